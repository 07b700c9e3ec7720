#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lmax {

/// Exact dyadic rational m * 2^e with a 128-bit mantissa.
///
/// All cube/domain geometry runs on these so that set logic (family
/// membership, dyadic nesting, band assignment) has no float drift.
/// Mantissas are kept odd (or zero) by normalization; arithmetic throws
/// on overflow instead of silently wrapping.
class Dyadic {
 public:
  Dyadic() : m_(0), e_(0) {}
  Dyadic(long long v) : m_(v), e_(0) { normalize(); }

  static Dyadic from_parts(long long mantissa, int scale) {
    Dyadic d;
    d.m_ = mantissa;
    d.e_ = scale;
    d.normalize();
    return d;
  }

  /// Exact conversion: every finite double is a dyadic rational.
  static Dyadic from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("dyadic: non-finite double");
    if (v == 0.0) return Dyadic();
    int exp = 0;
    double frac = std::frexp(v, &exp);           // v = frac * 2^exp, |frac| in [0.5,1)
    auto m = static_cast<long long>(std::ldexp(frac, 53));  // integer, |m| < 2^53
    Dyadic d;
    d.m_ = m;
    d.e_ = exp - 53;
    d.normalize();
    return d;
  }

  static Dyadic pow2(int k) { return from_parts(1, k); }

  double to_double() const {
    return std::ldexp(static_cast<double>(m_), e_);
  }

  bool is_zero() const { return m_ == 0; }
  int sign() const { return m_ == 0 ? 0 : (m_ > 0 ? 1 : -1); }

  /// floor(log2(value)) + 1 for positive values: the unique k with
  /// 2^(k-1) <= value < 2^k. Used for band indices.
  int band_index() const {
    if (m_ <= 0) throw std::domain_error("band_index: value must be positive");
    return e_ + bit_length(m_);
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.m_ == 0) return b;
    if (b.m_ == 0) return a;
    int e = a.e_ < b.e_ ? a.e_ : b.e_;
    Dyadic r;
    r.m_ = shifted(a, e) + shifted(b, e);
    r.e_ = e;
    r.normalize();
    return r;
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  Dyadic operator-() const {
    Dyadic r;
    r.m_ = -m_;
    r.e_ = e_;
    return r;
  }

  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.m_ == 0 || b.m_ == 0) return Dyadic();
    check_mul(a.m_, b.m_);
    Dyadic r;
    r.m_ = a.m_ * b.m_;
    r.e_ = a.e_ + b.e_;
    r.normalize();
    return r;
  }

  Dyadic mul_ll(long long k) const {
    if (k == 0 || m_ == 0) return Dyadic();
    check_mul(m_, static_cast<__int128>(k));
    Dyadic r;
    r.m_ = m_ * k;
    r.e_ = e_;
    r.normalize();
    return r;
  }

  Dyadic mul_pow2(int k) const {
    if (m_ == 0) return Dyadic();
    Dyadic r;
    r.m_ = m_;
    r.e_ = e_ + k;
    return r;
  }

  /// Exact halving (division by 2^k is always exact for dyadics).
  Dyadic div_pow2(int k) const { return mul_pow2(-k); }

  Dyadic abs() const { return m_ < 0 ? -*this : *this; }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    if (a.sign() != b.sign()) return a.sign() <=> b.sign();
    if (a.m_ == 0) return std::strong_ordering::equal;
    int e = a.e_ < b.e_ ? a.e_ : b.e_;
    __int128 am = shifted(a, e), bm = shifted(b, e);
    if (am < bm) return std::strong_ordering::less;
    if (am > bm) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.m_ == b.m_ && a.e_ == b.e_;
  }

  /// floor(a / b) for b > 0, exact.
  static long long floor_div(const Dyadic& a, const Dyadic& b) {
    if (b.m_ <= 0) throw std::domain_error("floor_div: divisor must be positive");
    if (a.m_ == 0) return 0;
    int e = a.e_ < b.e_ ? a.e_ : b.e_;
    __int128 am = shifted(a, e), bm = shifted(b, e);
    __int128 q = am / bm;
    if (am % bm != 0 && ((am < 0) != (bm < 0))) --q;
    return to_ll(q);
  }
  static long long ceil_div(const Dyadic& a, const Dyadic& b) {
    return -floor_div(-a, b);
  }

  /// Serialization view. Throws if the normalized mantissa does not fit
  /// in 64 bits (never the case for grid-aligned quantities).
  long long mantissa_ll() const { return to_ll(m_); }
  int scale() const { return e_; }

  std::string str() const {
    return std::to_string(static_cast<long long>(m_)) + "*2^" + std::to_string(e_);
  }

 private:
  __int128 m_;
  int e_;

  static int bit_length(__int128 v) {
    if (v < 0) v = -v;
    int b = 0;
    while (v > 0) {
      v >>= 1;
      ++b;
    }
    return b;
  }

  static void check_mul(__int128 a, __int128 b) {
    if (bit_length(a) + bit_length(b) > 124)
      throw std::overflow_error("dyadic: mantissa overflow in multiply");
  }

  static __int128 shifted(const Dyadic& d, int e) {
    int s = d.e_ - e;
    if (s < 0) throw std::logic_error("dyadic: negative shift");
    if (s + bit_length(d.m_) > 126) throw std::overflow_error("dyadic: shift overflow");
    return d.m_ << s;
  }

  static long long to_ll(__int128 v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
      throw std::overflow_error("dyadic: value does not fit in 64 bits");
    return static_cast<long long>(v);
  }

  void normalize() {
    if (m_ == 0) {
      e_ = 0;
      return;
    }
    while ((m_ & 1) == 0) {
      m_ >>= 1;
      ++e_;
    }
  }
};

/// Small exact rational, used for the family parameter beta (which need
/// not be dyadic: beta = 1/5 etc.). den > 0 always.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    reduce();
  }

  /// Parse "1/2", "0.25" or "3" exactly.
  static Rational parse(const std::string& s);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational halved() const { return Rational(num, 2 * den); }
  Rational quartered() const { return Rational(num, 4 * den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num) * b.den;
    __int128 r = static_cast<__int128>(b.num) * a.den;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

 private:
  void reduce() {
    auto g = [](long long a, long long b) {
      if (a < 0) a = -a;
      while (b) {
        long long t = a % b;
        a = b;
        b = t;
      }
      return a == 0 ? 1 : a;
    };
    long long d = g(num, den);
    num /= d;
    den /= d;
  }
};

/// Exact test  a < (num/den) * b  <=>  a*den < b*num.
inline bool less_than_scaled(const Dyadic& a, const Rational& r, const Dyadic& b) {
  return a.mul_ll(r.den) < b.mul_ll(r.num);
}

}  // namespace lmax
