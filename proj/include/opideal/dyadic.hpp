// Exact dyadic rationals: value = mantissa * 2^exponent with arbitrary
// precision mantissa and exponent.  Canonical form keeps the mantissa odd
// (or zero, with exponent zero), so equality is representation equality.
//
// Addition aligns exponents by shifting, which is only possible when the
// exponent gap fits in memory; the gap is capped and exceeding it throws.
// Every sequence this library manipulates keeps neighbouring exponents
// within a few million bits of each other, far below the cap.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace opideal {

using BigInt = mpz_class;
using BigRat = mpq_class;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class IndexOutOfCoverage : public Error {
 public:
  explicit IndexOutOfCoverage(const std::string& what) : Error(what) {}
};

inline size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

class Dyadic {
 public:
  Dyadic() : man_(0), exp_(0) {}
  Dyadic(long v) : man_(v), exp_(0) { canonicalize(); }        // NOLINT
  Dyadic(const BigInt& mantissa, const BigInt& exponent)
      : man_(mantissa), exp_(exponent) {
    canonicalize();
  }

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1); }

  // 2^e
  static Dyadic pow2(const BigInt& e) { return Dyadic(BigInt(1), e); }

  // Doubles are dyadic rationals, so this conversion is exact.
  static Dyadic from_double(double v);

  const BigInt& mantissa() const { return man_; }
  const BigInt& exponent() const { return exp_; }

  bool is_zero() const { return man_ == 0; }
  int sign() const { return sgn(man_); }
  // true iff the value is +-2^e
  bool is_pow2() const { return man_ == 1 || man_ == -1; }

  Dyadic abs() const {
    Dyadic r = *this;
    r.man_ = ::abs(r.man_);
    return r;
  }

  Dyadic operator-() const {
    Dyadic r = *this;
    r.man_ = -r.man_;
    return r;
  }

  Dyadic& operator+=(const Dyadic& o) {
    add(o, /*negate=*/false);
    return *this;
  }
  Dyadic& operator-=(const Dyadic& o) {
    add(o, /*negate=*/true);
    return *this;
  }
  Dyadic& operator*=(const Dyadic& o) {
    if (man_ == 0 || o.man_ == 0) {
      man_ = 0;
      exp_ = 0;
      return *this;
    }
    man_ *= o.man_;
    exp_ += o.exp_;
    return *this;  // odd*odd stays odd
  }

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  Dyadic times_big(const BigInt& n) const {
    if (n == 0 || man_ == 0) return Dyadic();
    return Dyadic(man_ * n, exp_);
  }
  // value / 2, exact
  Dyadic half() const {
    if (man_ == 0) return Dyadic();
    return Dyadic(man_, exp_ - 1);
  }
  Dyadic times_pow2(const BigInt& e) const {
    if (man_ == 0) return Dyadic();
    return Dyadic(man_, exp_ + e);
  }

  int compare(const Dyadic& o) const;
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.man_ == b.man_ && a.exp_ == b.exp_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    return a.compare(b) < 0;
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) {
    return a.compare(b) <= 0;
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) {
    return a.compare(b) > 0;
  }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) {
    return a.compare(b) >= 0;
  }

  // floor(log2(|value|)); value must be nonzero.
  BigInt floor_log2() const {
    if (man_ == 0) throw Error("floor_log2 of zero");
    return exp_ + BigInt(static_cast<unsigned long>(bit_length(man_)) - 1);
  }

  // Lossy, for reports and matrix assembly only.  Saturates to +-inf/0
  // outside the double range.
  double to_double() const;

  std::string to_string() const {  // "m*2^e", debugging and reports
    if (man_ == 0) return "0";
    return man_.get_str() + "*2^" + exp_.get_str();
  }

 private:
  void canonicalize() {
    if (man_ == 0) {
      exp_ = 0;
      return;
    }
    unsigned long tz = mpz_scan1(man_.get_mpz_t(), 0);
    if (tz > 0) {
      mpz_tdiv_q_2exp(man_.get_mpz_t(), man_.get_mpz_t(), tz);
      exp_ += static_cast<long>(tz);
    }
  }

  void add(const Dyadic& o, bool negate);

  BigInt man_;
  BigInt exp_;
};

// Exact log2 of a positive power of two; throws otherwise.
inline BigInt exact_log2(const Dyadic& d) {
  if (d.mantissa() != 1) throw Error("exact_log2: value is not a power of 2");
  return d.exponent();
}

}  // namespace opideal
