#include "app/config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace hdmd::app {
namespace {

namespace fs = std::filesystem;

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string field_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(Config, DefaultsAndOverrides) {
  const auto c = parse("hdmd-config 1\n# comment\nexperiment = probes\ngrid = 40  # trailing\n"
                       "dictionary.amplitude = 2,-1\nprobe.sizes = 5,10\nprobe.z = 0,2\ncluster_weighted_mean = false\n");
  EXPECT_EQ(c.experiment, Experiment::Probes);
  EXPECT_TRUE(c.experiment_set);
  EXPECT_EQ(c.grid, 40);
  EXPECT_EQ(c.full_grid, 300);
  EXPECT_EQ(c.dictionary_amplitude, std::complex<double>(2.0, -1.0));
  EXPECT_EQ(c.probe_sizes, (std::vector<long>{5, 10}));
  EXPECT_EQ(c.probe_z, std::complex<double>(0.0, 2.0));
  EXPECT_FALSE(c.cluster_weighted_mean);
  EXPECT_EQ(c.dictionary_per_axis, 20);
  EXPECT_EQ(c.dictionary_width, 3.0);
  EXPECT_EQ(c.cluster_radius, 0.4);
  EXPECT_EQ(c.rank_tolerance, 1e-12);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of("hdmd-config 1\ndictionary.width = -3\n"), "dictionary.width");
  EXPECT_EQ(field_of("hdmd-config 1\nbogus = 1\n"), "bogus");
  EXPECT_EQ(field_of("hdmd-config 1\ngrid = 10\ngrid = 20\n"), "grid");
  EXPECT_EQ(field_of("hdmd-config 1\ngrid = ten\n"), "grid");
  EXPECT_EQ(field_of("hdmd-config 1\ncluster_radius = 0.6\n"), "cluster_radius");
  EXPECT_EQ(field_of("hdmd-config 1\nprobe.n_ref = 100\nprobe.sizes = 10,200\n"), "probe.sizes");
  EXPECT_EQ(field_of("grid = 10\n"), "");
  EXPECT_EQ(field_of(""), "");
}

// ---- CLI end to end ----

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hdmd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(HDMD_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(Cli, InvalidConfigExitsWithTwo) {
  const auto cfg = write("bad.cfg", "hdmd-config 1\ndictionary.width = -1\n");
  EXPECT_EQ(run("schrodinger --config " + cfg.string()), 2);
  EXPECT_NE(slurp(dir_ / "stdout.txt").find("dictionary.width"), std::string::npos);
  const auto wrong = write("wrong.cfg", "hdmd-config 1\nexperiment = probes\n");
  EXPECT_EQ(run("schrodinger --config " + wrong.string()), 2);
}

TEST_F(Cli, EmptySnapshotFileExitsWithTwo) {
  const auto x = write("x.csv", "");
  const auto y = write("y.csv", "");
  EXPECT_EQ(run("custom --x " + x.string() + " --y " + y.string() + " --out " + (dir_ / "out").string()), 2);
}

TEST_F(Cli, MalformedRowReportsLine) {
  const auto x = write("x.csv", "x1,x2\n0,0\n1,oops\n");
  const auto y = write("y.csv", "x1,x2\n0,0\n1,1\n");
  EXPECT_EQ(run("custom --x " + x.string() + " --y " + y.string() + " --out " + (dir_ / "out").string()), 2);
  EXPECT_NE(slurp(dir_ / "stdout.txt").find("line 3"), std::string::npos) << slurp(dir_ / "stdout.txt");
}

// Snapshots y = S x of a symmetric S on a symmetric grid (G proportional to I)
// with the linear dictionary: the eigenvalues of S are recovered.
TEST_F(Cli, CustomRecoversPlantedLinearMap) {
  const double s11 = 0.5, s12 = 0.3, s22 = -0.2;
  std::ostringstream xs, ys;
  xs << "x1,x2,w\n";
  ys << "x1,x2\n";
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      xs << i << ',' << j << ",0.25\n";
      ys << s11 * i + s12 * j << ',' << s12 * i + s22 * j << '\n';
    }
  }
  const auto x = write("x.csv", xs.str());
  const auto y = write("y.csv", ys.str());
  const auto cfg = write("c.cfg", "hdmd-config 1\nexperiment = custom\ndictionary.kind = linear\n");
  ASSERT_EQ(run("custom --config " + cfg.string() + " --x " + x.string() + " --y " + y.string() + " --out " +
                (dir_ / "out").string()),
            0)
      << slurp(dir_ / "stdout.txt");
  std::istringstream ev(slurp(dir_ / "out" / "eigenvalues.csv"));
  std::string line;
  std::getline(ev, line);
  EXPECT_EQ(line, "index,lambda");
  std::vector<double> lambda;
  while (std::getline(ev, line)) lambda.push_back(std::stod(line.substr(line.find(',') + 1)));
  ASSERT_EQ(lambda.size(), 2u);
  const double mean = 0.5 * (s11 + s22), rad = std::hypot(0.5 * (s11 - s22), s12);
  EXPECT_NEAR(lambda[0], mean - rad, 1e-12);
  EXPECT_NEAR(lambda[1], mean + rad, 1e-12);
}

TEST_F(Cli, IdentityDataGivesUnitEigenvalue) {
  const auto x = write("x.csv", "x1\n0.1\n0.5\n0.9\n");
  const auto cfg = write("c.cfg", "hdmd-config 1\ndictionary.kind = constant\nsnapshots.total_mass = 3\n");
  ASSERT_EQ(run("custom --config " + cfg.string() + " --x " + x.string() + " --y " + x.string() + " --out " +
                (dir_ / "out").string()),
            0)
      << slurp(dir_ / "stdout.txt");
  double lambda = 0.0, weight = 0.0;
  char comma = 0;
  std::istringstream ev(slurp(dir_ / "out" / "eigenvalues.csv").substr(std::string("index,lambda\n0,").size()));
  ev >> lambda;
  EXPECT_NEAR(lambda, 1.0, 1e-14);
  std::istringstream ms(slurp(dir_ / "out" / "measure.csv").substr(std::string("lambda,weight\n").size()));
  ms >> lambda >> comma >> weight;
  EXPECT_NEAR(lambda, 1.0, 1e-14);
  EXPECT_NEAR(weight, 3.0, 1e-13);
}

TEST_F(Cli, RunsAreByteIdentical) {
  const auto cfg = write("c.cfg", "hdmd-config 1\ngrid = 30\ndictionary.per_axis = 6\nexact_quad_resolution = 40\n");
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(run("schrodinger --config " + cfg.string() + " --threads 3 --out " + (dir_ / sub).string()), 0)
        << slurp(dir_ / "stdout.txt");
  }
  for (const char* f : {"eigenvalues.csv", "measure.csv", "clustered.csv", "measure.json"}) {
    const auto a = slurp(dir_ / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
  }
  EXPECT_EQ(slurp(dir_ / "a" / "koopman.bin"), slurp(dir_ / "b" / "koopman.bin"));
}

TEST_F(Cli, ProbesWritesTables) {
  const auto cfg = write("p.cfg", "hdmd-config 1\nprobe.n_ref = 200\nprobe.sizes = 10,50,100\n");
  ASSERT_EQ(run("probes --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0) << slurp(dir_ / "stdout.txt");
  for (const char* f : {"jacobi_resolvent.csv", "jacobi_moments.csv", "jacobi_weak.csv", "diagonal_resolvent.csv",
                        "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  EXPECT_EQ(slurp(dir_ / "out" / "jacobi_resolvent.csv").substr(0, 10), "n,key,gap\n");
}

}  // namespace
}  // namespace hdmd::app
