#include "opideal/transforms.hpp"

namespace opideal::exactseq {

namespace {

// Error slack for one double log2 evaluation.
constexpr double kLogPad = 1e-13;

double big_to_double_checked(const BigInt& x, const char* what) {
  double d = x.get_d();
  if (!std::isfinite(d))
    throw Error(std::string(what) + " too large for interval arithmetic");
  return d;
}

}  // namespace

LogInterval log2_interval(const Dyadic& d) {
  if (d.sign() <= 0) throw Error("log2_interval needs a positive value");
  long e2 = 0;
  double f = mpz_get_d_2exp(&e2, d.mantissa().get_mpz_t());  // |f| in [0.5,1)
  double lm = std::log2(std::fabs(f)) + static_cast<double>(e2);
  double e = big_to_double_checked(d.exponent(), "exponent");
  double v = e + lm;
  return LogInterval{v - kLogPad - 1e-12 * std::fabs(v),
                     v + kLogPad + 1e-12 * std::fabs(v)};
}

GmValue geometric_mean_transform(const BlockSequence& s, const BigInt& k) {
  if (s.value_at(k).sign() <= 0) throw Error("zero term inside GM range");
  GmValue out;
  if (s.all_pow2()) {
    out.exact = true;
    out.log2_exact = s.gm_log2(k);
    return out;
  }
  LogInterval acc{0, 0};
  size_t last = s.run_of(k);
  for (size_t r = 0; r <= last; ++r) {
    BigInt len = (r == last) ? BigInt(k - s.run_start(r) + 1) : s.run(r).length;
    double lend = big_to_double_checked(len, "run length");
    LogInterval lv = log2_interval(s.run(r).value);
    acc = acc + LogInterval{lv.lo * lend, lv.hi * lend}.widen();
  }
  double kd = big_to_double_checked(k, "index");
  out.exact = false;
  out.log2_range = LogInterval{acc.lo / kd, acc.hi / kd}.widen();
  return out;
}

ExactMean cesaro_transform(const std::vector<Dyadic>& w, const BigInt& k) {
  if (k < 1 || k > static_cast<long>(w.size()))
    throw IndexOutOfCoverage("cesaro index outside coverage");
  Dyadic s;
  long kk = k.get_si();
  for (long j = 0; j < kk; ++j) s += w[static_cast<size_t>(j)];
  return ExactMean{s, k};
}

ExactMean cesaro_transform(const BlockSequence& pos, const BlockSequence& neg,
                           const BigInt& k) {
  Dyadic s = pos.partial_sum(k) - neg.partial_sum(k);
  return ExactMean{s, k};
}

}  // namespace opideal::exactseq
