#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "zdforge/errors.hpp"

namespace zdforge {

// Dense row-major matrix. State spaces stay small (<= 2^12), so dense
// storage and O(m^3) factorizations are the whole linear-algebra story.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// In-place LU with partial pivoting on a row-major m x m buffer.
// piv must have room for m entries; sign receives the permutation parity.
// Returns false when a pivot vanishes (singular to working precision).
inline bool lu_factor_inplace(double* a, int m, int* piv, int& sign) {
  sign = 1;
  for (int k = 0; k < m; ++k) {
    int p = k;
    double best = std::fabs(a[static_cast<std::size_t>(k) * m + k]);
    for (int i = k + 1; i < m; ++i) {
      double v = std::fabs(a[static_cast<std::size_t>(i) * m + k]);
      if (v > best) { best = v; p = i; }
    }
    piv[k] = p;
    if (best == 0.0) return false;
    if (p != k) {
      sign = -sign;
      for (int j = 0; j < m; ++j)
        std::swap(a[static_cast<std::size_t>(k) * m + j], a[static_cast<std::size_t>(p) * m + j]);
    }
    const double pivot = a[static_cast<std::size_t>(k) * m + k];
    for (int i = k + 1; i < m; ++i) {
      double f = a[static_cast<std::size_t>(i) * m + k] / pivot;
      a[static_cast<std::size_t>(i) * m + k] = f;
      if (f != 0.0) {
        const double* rk = a + static_cast<std::size_t>(k) * m;
        double* ri = a + static_cast<std::size_t>(i) * m;
        for (int j = k + 1; j < m; ++j) ri[j] -= f * rk[j];
      }
    }
  }
  return true;
}

inline void lu_solve_inplace(const double* lu, const int* piv, int m, double* b) {
  for (int k = 0; k < m; ++k) {
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    for (int i = k + 1; i < m; ++i) b[i] -= lu[static_cast<std::size_t>(i) * m + k] * b[k];
  }
  for (int i = m - 1; i >= 0; --i) {
    const double* ri = lu + static_cast<std::size_t>(i) * m;
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= ri[j] * b[j];
    b[i] = s / ri[i];
  }
}

inline double lu_det(const double* lu, int m, int sign) {
  double d = sign;
  for (int k = 0; k < m; ++k) d *= lu[static_cast<std::size_t>(k) * m + k];
  return d;
}

// Owning wrapper for the callers that are not in a hot loop.
struct LuFactorization {
  Matrix lu;
  std::vector<int> piv;
  int sign = 1;
  bool ok = false;

  double det() const { return ok ? lu_det(lu.data(), lu.rows(), sign) : 0.0; }
  void solve(std::vector<double>& b) const {
    if (!ok) throw InternalError("linear solve on a singular factorization");
    lu_solve_inplace(lu.data(), piv.data(), lu.rows(), b.data());
  }
};

inline LuFactorization lu_factor(Matrix a) {
  LuFactorization f;
  f.piv.assign(a.rows(), 0);
  f.ok = lu_factor_inplace(a.data(), a.rows(), f.piv.data(), f.sign);
  f.lu = std::move(a);
  return f;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace zdforge
