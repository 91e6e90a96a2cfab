#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace scfo {

using Vec = std::vector<double>;

/// Dense row-major matrix, sized for desk-scale problems.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rs) {
    Mat m(static_cast<int>(rs.size()), rs.size() ? static_cast<int>(rs.begin()->size()) : 0);
    int i = 0;
    for (const auto& r : rs) {
      int j = 0;
      for (double v : r) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  double& operator()(int r, int c) {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return a[static_cast<size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return a[static_cast<size_t>(r) * cols + c];
  }

  Vec row(int r) const {
    Vec out(cols);
    for (int c = 0; c < cols; ++c) out[c] = (*this)(r, c);
    return out;
  }
};

inline double dot(const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Vec sub(const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

inline Vec add(const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

inline Vec scaled(const Vec& x, double s) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
  return out;
}

// y + s * x
inline Vec axpy(double s, const Vec& x, const Vec& y) {
  assert(x.size() == y.size());
  Vec out(y.size());
  for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] + s * x[i];
  return out;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline Vec matvec(const Mat& m, const Vec& x) {
  assert(static_cast<int>(x.size()) == m.cols);
  Vec out(m.rows, 0.0);
  for (int r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < m.cols; ++c) s += m(r, c) * x[c];
    out[r] = s;
  }
  return out;
}

inline Vec mat_tvec(const Mat& m, const Vec& x) {
  assert(static_cast<int>(x.size()) == m.rows);
  Vec out(m.cols, 0.0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) out[c] += m(r, c) * x[r];
  return out;
}

}  // namespace scfo
