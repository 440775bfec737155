#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "grom/errors.hpp"
#include "grom/matrix.hpp"

namespace grom {

// Binary matrix format: 8-byte magic, rows and cols as little-endian uint64,
// then row-major little-endian IEEE-754 doubles.
inline constexpr std::array<unsigned char, 8> kMatrixMagic = {'G', 'R', 'S', 'M',
                                                             0,   0,   0,   '1'};

namespace detail {

inline void write_u64_le(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

inline std::uint64_t read_u64_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559,
              "IEEE-754 binary64 required");

}  // namespace detail

inline void write_matrix_binary(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("io: cannot open '" + path.string() + "' for writing");
  os.write(reinterpret_cast<const char*>(kMatrixMagic.data()), kMatrixMagic.size());
  detail::write_u64_le(os, m.rows());
  detail::write_u64_le(os, m.cols());
  // Host is little-endian on every supported target.
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(m.rows() * m.cols() * sizeof(double)));
  if (!os) throw io_error("io: write failed for '" + path.string() + "'");
}

inline Matrix read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("io: cannot open '" + path.string() + "'");
  std::array<unsigned char, 8> magic{};
  is.read(reinterpret_cast<char*>(magic.data()), magic.size());
  if (!is || magic != kMatrixMagic)
    throw io_error("io: bad magic in '" + path.string() + "' (not a matrix file)");
  const std::uint64_t rows = detail::read_u64_le(is);
  const std::uint64_t cols = detail::read_u64_le(is);
  if (!is || rows == 0 || cols == 0 || rows * cols > (std::uint64_t{1} << 32))
    throw io_error("io: invalid header in '" + path.string() + "'");
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(rows * cols * sizeof(double)))
    throw io_error("io: truncated payload in '" + path.string() + "'");
  m.ensure_finite("io: '" + path.string() + "'");
  return m;
}

/// CSV: one matrix row per line, comma separated, '.' decimal, no header.
inline void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw io_error("io: cannot open '" + path.string() + "' for writing");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  if (!os) throw io_error("io: write failed for '" + path.string() + "'");
}

inline Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw io_error("io: cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw io_error("io: '" + path.string() + "' line " + std::to_string(lineno) +
                       ": cannot parse '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw io_error("io: '" + path.string() + "' line " + std::to_string(lineno) +
                     ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw io_error("io: '" + path.string() + "' is empty");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  m.ensure_finite("io: '" + path.string() + "'");
  return m;
}

/// Dispatch on extension: ".csv" is text, anything else the binary format.
inline Matrix read_matrix(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_matrix_csv(path) : read_matrix_binary(path);
}

inline void write_matrix(const Matrix& m, const std::filesystem::path& path) {
  if (path.extension() == ".csv")
    write_matrix_csv(m, path);
  else
    write_matrix_binary(m, path);
}

}  // namespace grom
