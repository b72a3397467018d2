#pragma once
// Exact scalar arithmetic: rationals with overflow-checked int64 limbs and
// prime fields F_p. No floating point anywhere in the library.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymnd {

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  static long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }
  static long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                    checked_mul(a.den, b.den));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(checked_add(checked_mul(a.num, b.den), -checked_mul(b.num, a.den)),
                    checked_mul(a.den, b.den));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("rational: division by zero");
    return Rational(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
  }
  Rational operator-() const { return Rational(-num, den); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  bool is_zero() const { return num == 0; }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

// Scalars in F_p for small primes, stored as canonical representatives 0..p-1.
struct Fp {
  long long v = 0;
  long long p = 2;

  Fp() = default;
  Fp(long long x, long long prime) : p(prime) { v = ((x % p) + p) % p; }
  friend Fp operator+(const Fp& a, const Fp& b) { return Fp(a.v + b.v, a.p); }
  friend Fp operator-(const Fp& a, const Fp& b) { return Fp(a.v - b.v, a.p); }
  friend Fp operator*(const Fp& a, const Fp& b) { return Fp(a.v * b.v, a.p); }
  Fp inv() const {
    // p is prime and tiny; Fermat by repeated multiplication.
    if (v == 0) throw std::domain_error("Fp: inverse of zero");
    Fp r(1, p), base = *this;
    long long e = p - 2;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
  Fp operator-() const { return Fp(-v, p); }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v == b.v && a.p == b.p; }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
  bool is_zero() const { return v == 0; }
  std::string str() const { return std::to_string(v); }
};

// Dense matrix over an exact field; only what rank/kernel computations need.
template <class K>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<K> a;  // row-major

  Mat() = default;
  Mat(int r, int c, K zero) : rows(r), cols(c), a((size_t)r * c, zero) {}
  K& at(int r, int c) { return a[(size_t)r * cols + c]; }
  const K& at(int r, int c) const { return a[(size_t)r * cols + c]; }
};

// Row-reduce in place; returns rank.
template <class K>
int row_reduce(Mat<K>& m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int piv = -1;
    for (int r = rank; r < m.rows; ++r)
      if (!m.at(r, col).is_zero()) { piv = r; break; }
    if (piv < 0) continue;
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(piv, c), m.at(rank, c));
    K inv = m.at(rank, col);
    for (int c = col; c < m.cols; ++c) m.at(rank, c) = m.at(rank, c) / inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m.at(r, col).is_zero()) continue;
      K f = m.at(r, col);
      for (int c = col; c < m.cols; ++c)
        m.at(r, c) = m.at(r, c) - f * m.at(rank, c);
    }
    ++rank;
  }
  return rank;
}

template <class K>
int rank_of(Mat<K> m) { return row_reduce(m); }

}  // namespace polymnd
