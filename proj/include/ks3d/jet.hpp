#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace ks3d {

/// Truncated multivariate Taylor polynomial in three variables: all
/// coefficients c_a of (x - x0)^a with |a| <= N. derivative_at() converts
/// to partial derivatives (a! c_a).
template <int N>
class Jet {
 public:
  static_assert(N >= 0);
  static constexpr int kSize = (N + 1) * (N + 2) * (N + 3) / 6;

  struct Tables {
    std::array<std::array<int, 3>, kSize> multi{};
    std::array<int, (N + 1) * (N + 1) * (N + 1)> index{};
    struct Pair {
      int i, j, k;
    };
    std::vector<Pair> pairs;

    Tables() {
      index.fill(-1);
      int k = 0;
      for (int d = 0; d <= N; ++d)
        for (int a = d; a >= 0; --a)
          for (int b = d - a; b >= 0; --b) {
            const int c = d - a - b;
            multi[k] = {a, b, c};
            index[(a * (N + 1) + b) * (N + 1) + c] = k;
            ++k;
          }
      for (int i = 0; i < kSize; ++i)
        for (int j = 0; j < kSize; ++j) {
          const auto& p = multi[i];
          const auto& q = multi[j];
          if (p[0] + p[1] + p[2] + q[0] + q[1] + q[2] > N) continue;
          pairs.push_back({i, j, at(p[0] + q[0], p[1] + q[1], p[2] + q[2])});
        }
    }
    [[nodiscard]] int at(int a, int b, int c) const {
      if (a < 0 || b < 0 || c < 0 || a + b + c > N) return -1;
      return index[(a * (N + 1) + b) * (N + 1) + c];
    }
  };

  static const Tables& tables() {
    static const Tables t;
    return t;
  }

  Jet() { c_.fill(0.0); }

  static Jet constant(double v) {
    Jet j;
    j.c_[0] = v;
    return j;
  }
  /// The coordinate function x_dir expanded at x0.
  static Jet variable(int dir, double x0) {
    Jet j = constant(x0);
    if constexpr (N >= 1) {
      const int a = dir == 0 ? 1 : 0;
      const int b = dir == 1 ? 1 : 0;
      j.c_[tables().at(a, b, 1 - a - b)] = 1.0;
    }
    return j;
  }

  [[nodiscard]] double value() const { return c_[0]; }
  [[nodiscard]] double coefficient(int a, int b, int c) const {
    const int k = tables().at(a, b, c);
    return k < 0 ? 0.0 : c_[k];
  }
  /// d^{a+b+c} / dx1^a dx2^b dx3^c at the expansion point.
  [[nodiscard]] double derivative_at(int a, int b, int c) const {
    return coefficient(a, b, c) * factorial(a) * factorial(b) * factorial(c);
  }
  /// First partial derivative along `dir`.
  [[nodiscard]] double d(int dir) const {
    return coefficient(dir == 0, dir == 1, dir == 2);
  }
  /// Second partial derivative d^2 / dx_i dx_j.
  [[nodiscard]] double d2(int i, int j) const {
    int m[3] = {0, 0, 0};
    ++m[i];
    ++m[j];
    return derivative_at(m[0], m[1], m[2]);
  }

  double& operator[](int k) { return c_[k]; }
  double operator[](int k) const { return c_[k]; }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a) { return (a *= -1.0) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out;
    for (const auto& p : tables().pairs) out.c_[p.k] += a.c_[p.i] * b.c_[p.j];
    return out;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  /// f(u) for a univariate f with Taylor coefficients t[k] = f^(k)(u0) / k!.
  [[nodiscard]] static Jet compose(const Jet& u, const std::array<double, N + 1>& t) {
    Jet delta = u;
    delta.c_[0] = 0.0;
    Jet out = constant(t[0]);
    Jet power = constant(1.0);
    for (int k = 1; k <= N; ++k) {
      power = power * delta;
      Jet term = power;
      term *= t[k];
      out += term;
    }
    return out;
  }

  static Jet reciprocal(const Jet& u) {
    std::array<double, N + 1> t{};
    const double inv = 1.0 / u.value();
    double p = inv;
    for (int k = 0; k <= N; ++k) {
      t[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
      p *= inv;
    }
    return compose(u, t);
  }

  static double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  }

 private:
  std::array<double, kSize> c_;
};

template <int N>
Jet<N> sin(const Jet<N>& u) {
  std::array<double, N + 1> t{};
  const double s = std::sin(u.value());
  const double c = std::cos(u.value());
  for (int k = 0; k <= N; ++k) {
    const double d[4] = {s, c, -s, -c};
    t[k] = d[k % 4] / Jet<N>::factorial(k);
  }
  return Jet<N>::compose(u, t);
}

template <int N>
Jet<N> cos(const Jet<N>& u) {
  std::array<double, N + 1> t{};
  const double s = std::sin(u.value());
  const double c = std::cos(u.value());
  for (int k = 0; k <= N; ++k) {
    const double d[4] = {c, -s, -c, s};
    t[k] = d[k % 4] / Jet<N>::factorial(k);
  }
  return Jet<N>::compose(u, t);
}

template <int N>
Jet<N> exp(const Jet<N>& u) {
  std::array<double, N + 1> t{};
  const double e = std::exp(u.value());
  for (int k = 0; k <= N; ++k) t[k] = e / Jet<N>::factorial(k);
  return Jet<N>::compose(u, t);
}

/// u^r for u0 > 0 (any real r).
template <int N>
Jet<N> pow(const Jet<N>& u, double r) {
  std::array<double, N + 1> t{};
  double binom = 1.0;
  for (int k = 0; k <= N; ++k) {
    t[k] = binom * std::pow(u.value(), r - k);
    binom *= (r - k) / (k + 1);
  }
  return Jet<N>::compose(u, t);
}

template <int N>
Jet<N> sqrt(const Jet<N>& u) {
  return pow(u, 0.5);
}

template <int N>
Jet<N> atan(const Jet<N>& u) {
  // Series of 1 / (1 + (x0 + s)^2) in s, integrated termwise.
  const double x0 = u.value();
  const double q0 = 1.0 + x0 * x0;
  std::array<double, N + 1> inv{};
  for (int k = 0; k <= N; ++k) {
    double acc = k == 0 ? 1.0 : 0.0;
    if (k >= 1) acc -= 2.0 * x0 * inv[k - 1];
    if (k >= 2) acc -= inv[k - 2];
    inv[k] = acc / q0;
  }
  std::array<double, N + 1> t{};
  t[0] = std::atan(x0);
  for (int k = 1; k <= N; ++k) t[k] = inv[k - 1] / k;
  return Jet<N>::compose(u, t);
}

/// Polar angle of (x, y) with the value of std::atan2 at the expansion point,
/// propagated through the angle-difference identity.
template <int N>
Jet<N> atan2(const Jet<N>& y, const Jet<N>& x) {
  const double x0 = x.value();
  const double y0 = y.value();
  Jet<N> num = x0 * y - y0 * x;
  Jet<N> den = x0 * x + y0 * y;
  num[0] = 0.0;
  Jet<N> out = atan(num / den);
  out[0] = std::atan2(y0, x0);
  return out;
}

/// Partial derivative along `dir`, one order lower.
template <int N>
Jet<N - 1> derivative(const Jet<N>& u, int dir) {
  static_assert(N >= 1);
  Jet<N - 1> out;
  const auto& tin = Jet<N>::tables();
  const auto& tout = Jet<N - 1>::tables();
  for (int k = 0; k < Jet<N - 1>::kSize; ++k) {
    auto m = tout.multi[k];
    ++m[dir];
    out[k] = m[dir] * u[tin.at(m[0], m[1], m[2])];
  }
  return out;
}

/// Lowers the truncation order.
template <int M, int N>
Jet<M> truncate(const Jet<N>& u) {
  static_assert(M <= N);
  Jet<M> out;
  const auto& tin = Jet<N>::tables();
  const auto& tout = Jet<M>::tables();
  for (int k = 0; k < Jet<M>::kSize; ++k) {
    const auto& m = tout.multi[k];
    out[k] = u[tin.at(m[0], m[1], m[2])];
  }
  return out;
}

}  // namespace ks3d
