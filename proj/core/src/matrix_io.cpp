#include "hdmd/matrix_io.hpp"

#include "hdmd/csv.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hdmd {

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out << ',';
    out << 'c' << (j + 1) << "_re,c" << (j + 1) << "_im";
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << csv::format(m(i, j).real()) << ',' << csv::format(m(i, j).imag());
    }
    out << '\n';
  }
}

Eigen::MatrixXcd read_matrix_csv(std::istream& in) {
  auto table = csv::read_numeric(in);
  if (table.header.size() % 2 != 0) throw csv::ParseError(1, "complex matrix CSV needs re,im column pairs");
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(table.header.size() / 2);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {table.rows[i][2 * j], table.rows[i][2 * j + 1]};
  return m;
}

namespace {

constexpr std::array<char, 5> kMagic{'H', 'D', 'M', 'D', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  std::array<char, 8> bytes;
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  out.write(bytes.data(), 8);
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 8)) throw std::runtime_error("read_matrix_binary: truncated input");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXcd& m) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_le<double>(out, m(i, j).real());
      put_le<double>(out, m(i, j).imag());
    }
  }
}

Eigen::MatrixXcd read_matrix_binary(std::istream& in) {
  std::array<char, 5> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("read_matrix_binary: bad magic, expected HDMD1");
  }
  const auto rows = get_le<std::uint64_t>(in);
  const auto cols = get_le<std::uint64_t>(in);
  if (rows > (1ull << 32) || cols > (1ull << 32)) throw std::runtime_error("read_matrix_binary: implausible shape");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = get_le<double>(in);
      const double im = get_le<double>(in);
      m(i, j) = {re, im};
    }
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m) {
  const bool binary = path.extension() == ".bin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("save_matrix: cannot open " + path.string());
  if (binary) {
    write_matrix_binary(out, m);
  } else {
    write_matrix_csv(out, m);
  }
}

Eigen::MatrixXcd load_matrix(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("load_matrix: cannot open " + path.string());
  return binary ? read_matrix_binary(in) : read_matrix_csv(in);
}

}  // namespace hdmd
