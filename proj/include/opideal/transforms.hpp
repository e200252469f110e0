// Sequence transforms over exact run-length sequences: the geometric-mean
// map s |-> (s_1...s_k)^{1/k} in exact log2 form (with a rigorous interval
// fallback for values that are not powers of two) and the Cesaro mean.

#pragma once

#include <cmath>
#include <vector>

#include "opideal/block_sequence.hpp"

namespace opideal::exactseq {

// Closed interval [lo, hi] in the log2 domain, outward rounded.
struct LogInterval {
  double lo;
  double hi;
  LogInterval widen() const {
    return {std::nextafter(lo, -1e308), std::nextafter(hi, 1e308)};
  }
  LogInterval operator+(const LogInterval& o) const {
    return LogInterval{lo + o.lo, hi + o.hi}.widen();
  }
};

// Rigorous enclosure of log2 of a positive dyadic.
LogInterval log2_interval(const Dyadic& d);

// GM value in log2 form.  exact==true carries an exact rational; otherwise
// [lo, hi] encloses the true log2 with the width reported by the caller.
struct GmValue {
  bool exact = false;
  BigRat log2_exact;
  LogInterval log2_range{0, 0};
  double width() const { return exact ? 0.0 : log2_range.hi - log2_range.lo; }
};

// (s_1...s_k)^{1/k}; s must be strictly positive on [1, k].
GmValue geometric_mean_transform(const BlockSequence& s, const BigInt& k);

// Exact rational sum/k.
struct ExactMean {
  Dyadic sum;
  BigInt k;
  // mean <=> bound
  int compare(const Dyadic& bound) const {
    Dyadic rhs = bound.times_big(k);
    return sum.compare(rhs);
  }
  double to_double() const { return sum.to_double() / k.get_d(); }
  std::string to_string() const { return sum.to_string() + "/" + k.get_str(); }
};

// Cesaro mean of an explicit signed list, (1/k) sum_{j<=k} w_j.
ExactMean cesaro_transform(const std::vector<Dyadic>& w, const BigInt& k);

// Cesaro mean of a signed sequence given as positive and negative parts.
ExactMean cesaro_transform(const BlockSequence& pos, const BlockSequence& neg,
                           const BigInt& k);

}  // namespace opideal::exactseq
