#include "opideal/dyadic.hpp"

#include <cmath>
#include <limits>

namespace opideal {

namespace {
// Exponent gaps above this many bits would need >16MB shifts per addition.
constexpr unsigned long kMaxAlignShift = 1ul << 27;
}  // namespace

void Dyadic::add(const Dyadic& o, bool negate) {
  BigInt oman = negate ? BigInt(-o.man_) : o.man_;
  if (oman == 0) return;
  if (man_ == 0) {
    man_ = oman;
    exp_ = o.exp_;
    canonicalize();
    return;
  }
  // Align to the smaller exponent.
  BigInt gap = exp_ - o.exp_;
  BigInt agap = ::abs(gap);
  if (agap > kMaxAlignShift)
    throw Error("dyadic addition: exponent gap too large to align (" +
                gap.get_str() + " bits)");
  unsigned long shift = agap.get_ui();
  if (gap >= 0) {
    mpz_mul_2exp(man_.get_mpz_t(), man_.get_mpz_t(), shift);
    man_ += oman;
    exp_ = o.exp_;
  } else {
    BigInt tmp;
    mpz_mul_2exp(tmp.get_mpz_t(), oman.get_mpz_t(), shift);
    man_ += tmp;
  }
  canonicalize();
}

int Dyadic::compare(const Dyadic& o) const {
  int sa = sign(), sb = o.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  // Same sign.  Fast path: disjoint magnitude ranges.
  // |x| in [2^(e+bits-1), 2^(e+bits))
  BigInt lo_a = exp_ + BigInt(static_cast<long>(bit_length(man_)) - 1);
  BigInt hi_a = lo_a + 1;
  BigInt lo_b = o.exp_ + BigInt(static_cast<long>(bit_length(o.man_)) - 1);
  BigInt hi_b = lo_b + 1;
  if (hi_a <= lo_b) return sa > 0 ? -1 : 1;  // |a| < |b|
  if (hi_b <= lo_a) return sa > 0 ? 1 : -1;
  // Overlapping ranges: exponent gap is at most a few bits; align exactly.
  BigInt gap = exp_ - o.exp_;
  unsigned long shift = BigInt(::abs(gap)).get_ui();
  BigInt ma = man_, mb = o.man_;
  if (gap >= 0) {
    mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), shift);
  } else {
    mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), shift);
  }
  return cmp(ma, mb) < 0 ? -1 : (ma == mb ? 0 : 1);
}

Dyadic Dyadic::from_double(double v) {
  if (!std::isfinite(v)) throw Error("from_double: non-finite value");
  if (v == 0.0) return Dyadic();
  int e2 = 0;
  double frac = std::frexp(v, &e2);  // v = frac * 2^e2, |frac| in [0.5, 1)
  // 53 doublings make the fraction integral.
  long long m = static_cast<long long>(std::ldexp(frac, 53));
  Dyadic r;
  r.man_ = BigInt(static_cast<long>(m));
  r.exp_ = BigInt(e2 - 53);
  r.canonicalize();
  return r;
}

double Dyadic::to_double() const {
  if (man_ == 0) return 0.0;
  if (!exp_.fits_slong_p())
    return exp_ > 0 ? std::numeric_limits<double>::infinity() * sign() : 0.0;
  long e = exp_.get_si();
  double m = man_.get_d();  // may be +-inf for huge mantissas; ldexp keeps it
  long mb = static_cast<long>(bit_length(man_));
  if (e + mb > 1024) return std::numeric_limits<double>::infinity() * sign();
  if (e + mb < -1070) return 0.0;
  return std::ldexp(m, static_cast<int>(e));
}

}  // namespace opideal
