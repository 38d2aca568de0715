#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "vadu/errors.hpp"

namespace vadu {

/// Point of R^n with finite coordinates (checked on construction).
class FloatVec {
public:
  FloatVec() = default;
  explicit FloatVec(std::size_t n, double fill = 0.0) : c_(n, fill) {}
  explicit FloatVec(std::vector<double> c) : c_(std::move(c)) { check_finite(); }
  FloatVec(std::initializer_list<double> c) : c_(c) { check_finite(); }

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  const std::vector<double>& coords() const { return c_; }

  bool all_finite() const {
    for (double x : c_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  double norm() const { return std::sqrt(squared_norm()); }
  double squared_norm() const {
    double s = 0;
    for (double x : c_) s += x * x;
    return s;
  }

  FloatVec& operator+=(const FloatVec& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  FloatVec& operator-=(const FloatVec& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  FloatVec& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }

  friend FloatVec operator+(FloatVec a, const FloatVec& b) { return a += b; }
  friend FloatVec operator-(FloatVec a, const FloatVec& b) { return a -= b; }
  friend FloatVec operator*(double s, FloatVec a) { return a *= s; }
  friend FloatVec operator*(FloatVec a, double s) { return a *= s; }
  friend FloatVec operator-(FloatVec a) { return a *= -1.0; }
  friend bool operator==(const FloatVec& a, const FloatVec& b) { return a.c_ == b.c_; }

private:
  void check_finite() const {
    if (!all_finite()) throw InputError("vector has a non-finite coordinate");
  }

  std::vector<double> c_;
};

inline double dot(const FloatVec& a, const FloatVec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const FloatVec& a, const FloatVec& b) { return (a - b).norm(); }

inline FloatVec unit_vector(std::size_t n, std::size_t axis) {
  FloatVec e(n);
  e[axis] = 1.0;
  return e;
}

inline void require_same_dim(const FloatVec& a, const FloatVec& b, const char* what) {
  if (a.dim() != b.dim())
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()) + ")");
}

/// Geometric tolerance, 0 < eps < 1.
struct Tolerance {
  double eps = 1e-9;

  Tolerance() = default;
  explicit Tolerance(double e) : eps(e) {
    if (!(e > 0.0 && e < 1.0)) throw InputError("tolerance must lie in (0,1)");
  }
};

} // namespace vadu
