#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "ccnet/bitbuffer.hpp"

namespace ccnet {

/// Field over which segment sizes are whole symbols. GF256 is the production
/// field; GF2 exists for the exhaustive security oracles, where every bit of
/// randomness must be enumerable.
enum class Field { GF2, GF256 };

inline constexpr std::size_t symbol_bits(Field f) {
  return f == Field::GF2 ? 1 : 8;
}

/// GF(2^8) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d).
class GF256 {
 public:
  static std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const Tables& t = tables();
    return t.exp[t.log[a] + t.log[b]];
  }

  static std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw std::domain_error("GF256: inverse of zero");
    const Tables& t = tables();
    return t.exp[255 - t.log[a]];
  }

  static std::uint8_t add(std::uint8_t a, std::uint8_t b) {
    return std::uint8_t(a ^ b);
  }

  static std::uint8_t div(std::uint8_t a, std::uint8_t b) {
    return mul(a, inv(b));
  }

 private:
  struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};
    Tables() {
      int x = 1;
      for (int i = 0; i < 255; ++i) {
        exp[i] = std::uint8_t(x);
        log[x] = i;
        x <<= 1;
        if (x & 0x100) x ^= 0x11d;
      }
      for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
      log[0] = 0;  // never read
    }
  };
  static const Tables& tables() {
    static const Tables t;
    return t;
  }
};

/// Dense matrix over GF(2^8). Small; used for MDS generator matrices and
/// ramp-sharing mixing matrices.
class GFMatrix {
 public:
  GFMatrix() = default;
  GFMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint8_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  static GFMatrix identity(std::size_t n) {
    GFMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  GFMatrix mul(const GFMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("GFMatrix::mul: shape");
    GFMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const std::uint8_t v = at(i, k);
        if (v == 0) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j)
          out.at(i, j) ^= GF256::mul(v, rhs.at(k, j));
      }
    return out;
  }

  /// Gauss-Jordan inverse. Throws if singular.
  GFMatrix inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("GFMatrix::inverse: not square");
    const std::size_t n = rows_;
    GFMatrix a = *this;
    GFMatrix inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && a.at(pivot, col) == 0) ++pivot;
      if (pivot == n) throw std::domain_error("GFMatrix::inverse: singular");
      if (pivot != col) {
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(a.at(pivot, j), a.at(col, j));
          std::swap(inv.at(pivot, j), inv.at(col, j));
        }
      }
      const std::uint8_t pinv = GF256::inv(a.at(col, col));
      for (std::size_t j = 0; j < n; ++j) {
        a.at(col, j) = GF256::mul(a.at(col, j), pinv);
        inv.at(col, j) = GF256::mul(inv.at(col, j), pinv);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == col) continue;
        const std::uint8_t f = a.at(i, col);
        if (f == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          a.at(i, j) ^= GF256::mul(f, a.at(col, j));
          inv.at(i, j) ^= GF256::mul(f, inv.at(col, j));
        }
      }
    }
    return inv;
  }

  GFMatrix submatrix_rows(const std::vector<std::size_t>& row_ids) const {
    GFMatrix out(row_ids.size(), cols_);
    for (std::size_t i = 0; i < row_ids.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        out.at(i, j) = at(row_ids[i], j);
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint8_t> a_;
};

/// Cauchy matrix 1/(x_i + y_j) over GF(2^8); every square submatrix is
/// invertible when all x_i, y_j are distinct.
inline GFMatrix cauchy_matrix(std::size_t rows, std::size_t cols) {
  if (rows + cols > 255)
    throw std::invalid_argument("cauchy_matrix: rows + cols must be <= 255");
  GFMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m.at(i, j) = GF256::inv(std::uint8_t((1 + i) ^ (rows + 1 + j)));
  return m;
}

}  // namespace ccnet
