#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "evocode/gf2.hpp"

namespace evocode {

// Matrix text format, used by every tool:
//   line 1:      "n k" (decimal, single space)
//   lines 2..k+1: exactly n characters from {0,1}, row i holding x_1..x_n
// A trailing newline is expected; anything after the last row is an error.

inline BinMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("matrix: empty input");

  int n = 0, k = 0;
  {
    std::istringstream header(line);
    char trailing = '\0';
    if (!(header >> n >> k) || header.get(trailing) ||
        line != std::to_string(n) + " " + std::to_string(k))
      throw std::runtime_error("matrix: header must be \"n k\"");
    if (n < 1 || n > kMaxLength)
      throw std::runtime_error("matrix: n must be in [1, 32]");
    if (k < 1 || k > n)
      throw std::runtime_error("matrix: k must be in [1, n]");
  }

  std::vector<std::uint32_t> rows;
  rows.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("matrix: expected " + std::to_string(k) +
                               " rows, got " + std::to_string(i - 1));
    if (line.size() != static_cast<std::size_t>(n))
      throw std::runtime_error("matrix: row " + std::to_string(i) +
                               " has length " + std::to_string(line.size()) +
                               ", expected " + std::to_string(n));
    std::uint32_t bits = 0;
    for (char c : line) {
      if (c != '0' && c != '1')
        throw std::runtime_error("matrix: row " + std::to_string(i) +
                                 " contains a character other than 0/1");
      bits = (bits << 1) | static_cast<std::uint32_t>(c - '0');
    }
    rows.push_back(bits);
  }
  if (std::getline(in, line))
    throw std::runtime_error("matrix: unexpected content after row " +
                             std::to_string(k));

  return make_matrix(n, std::move(rows));
}

// Same format, generator-matrix context: rank below k is rejected.
inline GeneratorMatrix parse_generator(const std::string& text) {
  BinMatrix m = parse_matrix(text);
  if (rank(m) != m.k())
    throw std::runtime_error("matrix: rank " + std::to_string(rank(m)) +
                             " is below row count " + std::to_string(m.k()));
  return GeneratorMatrix::unchecked(std::move(m));
}

inline std::string format_matrix(const BinMatrix& m) {
  std::string out = std::to_string(m.n) + " " + std::to_string(m.k()) + "\n";
  for (std::uint32_t r : m.rows) out += to_string(BitVec(r, m.n)) + "\n";
  return out;
}

inline std::string format_matrix(const GeneratorMatrix& g) {
  return format_matrix(g.mat);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline BinMatrix read_matrix_file(const std::string& path) {
  try {
    return parse_matrix(read_text_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline GeneratorMatrix read_generator_file(const std::string& path) {
  try {
    return parse_generator(read_text_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void write_matrix_file(const std::string& path, const BinMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << format_matrix(m);
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline void write_matrix_file(const std::string& path, const GeneratorMatrix& g) {
  write_matrix_file(path, g.mat);
}

}  // namespace evocode
