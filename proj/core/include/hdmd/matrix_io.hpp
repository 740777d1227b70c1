#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>

namespace hdmd {

// CSV: header `c1_re,c1_im,...,cN_re,cN_im`, one matrix row per line.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_csv(std::istream& in);

// Binary layout, all little-endian:
//   bytes 0..4   magic "HDMD1"
//   u64          rows
//   u64          cols
//   rows*cols    (f64 re, f64 im) pairs in row-major order
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_binary(std::istream& in);

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m);  // by extension: .csv or .bin
Eigen::MatrixXcd load_matrix(const std::filesystem::path& path);

}  // namespace hdmd
