#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "vadu/errors.hpp"

namespace vadu {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. Always held in lowest terms with a positive
/// denominator (Boost normalizes on every operation).
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(long long num, long long den = 1) {
  if (den == 0) throw InputError("rational with zero denominator");
  // Boost rejects a negative denominator, so move the sign up.
  if (den < 0) return Rat(-BigInt(num), -BigInt(den));
  return Rat(BigInt(num), BigInt(den));
}

/// Exact conversion of a finite double (every double is a dyadic rational).
inline Rat rat_from_double(double v) {
  if (!(v == v) || v - v != 0.0) throw InputError("non-finite value cannot become a rational");
  return Rat(v);
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// "p/q", with "/q" omitted when q == 1.
inline std::string to_string(const Rat& r) {
  const auto& num = boost::multiprecision::numerator(r);
  const auto& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "p", "p/q" or "-p/q" (optional sign on the numerator only).
inline Rat parse_rat(std::string_view text) {
  const auto bad = [&] { return InputError("malformed rational \"" + std::string(text) + "\""); };
  const auto valid_int = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
  std::string num_s(num);
  if (!num_s.empty() && num_s.front() == '+') num_s.erase(0, 1);
  BigInt n(num_s);
  BigInt d{std::string(den)};
  if (d == 0) throw bad();
  return Rat(n, d);
}

/// Point of Q^n. Comparison is lexicographic and exact.
struct RatVec {
  std::vector<Rat> coords;

  RatVec() = default;
  explicit RatVec(std::vector<Rat> c) : coords(std::move(c)) {}
  RatVec(std::initializer_list<Rat> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  const Rat& operator[](std::size_t i) const { return coords[i]; }
  Rat& operator[](std::size_t i) { return coords[i]; }

  friend bool operator==(const RatVec& a, const RatVec& b) { return a.coords == b.coords; }
  friend std::strong_ordering operator<=>(const RatVec& a, const RatVec& b) {
    const std::size_t n = std::min(a.dim(), b.dim());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coords[i] < b.coords[i]) return std::strong_ordering::less;
      if (b.coords[i] < a.coords[i]) return std::strong_ordering::greater;
    }
    return a.dim() <=> b.dim();
  }

  friend RatVec operator+(const RatVec& a, const RatVec& b) {
    RatVec r(a);
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] += b[i];
    return r;
  }

  friend RatVec operator-(const RatVec& a, const RatVec& b) {
    RatVec r(a);
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] -= b[i];
    return r;
  }

  friend RatVec operator*(const Rat& s, const RatVec& a) {
    RatVec r(a);
    for (auto& c : r.coords) c *= s;
    return r;
  }
};

inline RatVec rat_vec(std::initializer_list<long long> ints) {
  RatVec v;
  for (long long x : ints) v.coords.emplace_back(x);
  return v;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

} // namespace vadu
