#pragma once

// Truncated power series in one small parameter. Used to push the
// unfolding parameter epsilon through the normal-form coordinate pipeline
// so that the coefficients of eps, eps^2, ... come out exact to rounding.

#include <array>
#include <cmath>
#include <cstddef>

namespace tritrophic {

template <std::size_t N>
class Taylor {
  static_assert(N >= 1);

 public:
  constexpr Taylor() = default;
  constexpr Taylor(double c0) { c_[0] = c0; }  // NOLINT: implicit on purpose

  /// x0 + eps
  static constexpr Taylor variable(double x0) {
    Taylor t(x0);
    if constexpr (N > 1) t.c_[1] = 1.0;
    return t;
  }

  static constexpr std::size_t order = N;

  constexpr double operator[](std::size_t i) const { return c_[i]; }
  constexpr double& operator[](std::size_t i) { return c_[i]; }
  constexpr double value() const { return c_[0]; }
  constexpr const std::array<double, N>& coefficients() const { return c_; }

  /// Divides by eps, discarding the constant term.
  constexpr Taylor shifted() const {
    Taylor t;
    for (std::size_t i = 0; i + 1 < N; ++i) t.c_[i] = c_[i + 1];
    return t;
  }

  constexpr Taylor& operator+=(const Taylor& o) {
    for (std::size_t i = 0; i < N; ++i) c_[i] += o.c_[i];
    return *this;
  }
  constexpr Taylor& operator-=(const Taylor& o) {
    for (std::size_t i = 0; i < N; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  constexpr Taylor& operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  constexpr Taylor& operator/=(double s) {
    for (auto& c : c_) c /= s;
    return *this;
  }
  constexpr Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  constexpr Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  constexpr Taylor operator-() const {
    Taylor t;
    for (std::size_t i = 0; i < N; ++i) t.c_[i] = -c_[i];
    return t;
  }

  friend constexpr Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend constexpr Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend constexpr Taylor operator+(Taylor a, double b) {
    a.c_[0] += b;
    return a;
  }
  friend constexpr Taylor operator+(double a, Taylor b) {
    b.c_[0] += a;
    return b;
  }
  friend constexpr Taylor operator-(Taylor a, double b) {
    a.c_[0] -= b;
    return a;
  }
  friend constexpr Taylor operator-(double a, const Taylor& b) { return -b + a; }
  friend constexpr Taylor operator*(Taylor a, double s) { return a *= s; }
  friend constexpr Taylor operator*(double s, Taylor a) { return a *= s; }
  friend constexpr Taylor operator/(Taylor a, double s) { return a /= s; }

  friend constexpr Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor t;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; i + j < N; ++j) t.c_[i + j] += a.c_[i] * b.c_[j];
    return t;
  }

  // Requires b[0] != 0.
  friend constexpr Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q;
    for (std::size_t i = 0; i < N; ++i) {
      double s = a.c_[i];
      for (std::size_t j = 1; j <= i; ++j) s -= b.c_[j] * q.c_[i - j];
      q.c_[i] = s / b.c_[0];
    }
    return q;
  }
  friend constexpr Taylor operator/(double a, const Taylor& b) { return Taylor(a) / b; }

 private:
  std::array<double, N> c_{};
};

// Requires x[0] > 0.
template <std::size_t N>
Taylor<N> sqrt(const Taylor<N>& x) {
  Taylor<N> s;
  s[0] = std::sqrt(x[0]);
  for (std::size_t i = 1; i < N; ++i) {
    double acc = x[i];
    for (std::size_t j = 1; j < i; ++j) acc -= s[j] * s[i - j];
    s[i] = acc / (2.0 * s[0]);
  }
  return s;
}

/// Scalar-generic helpers so templated formulas work for double and Taylor.
inline double sqrt_of(double x) { return std::sqrt(x); }
template <std::size_t N>
Taylor<N> sqrt_of(const Taylor<N>& x) {
  return sqrt(x);
}

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Taylor<N>& x) {
  return x.value();
}

}  // namespace tritrophic
