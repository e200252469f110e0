// Run-length representation of a decreasing nonnegative sequence.
//
// A sequence is a list of runs (value, length) with strictly decreasing
// values and arbitrary-precision lengths; coverage is contiguous from
// index 1.  All per-index queries locate the containing run by binary
// search, so astronomically long runs cost nothing.
//
// Prefix caches:
//   end_[r]        last index of run r (1-based indices)
//   weighted_[r]   sum value*length over runs <= r     (exact partial sums)
//   log2sum_[r]    sum length*log2(value) over runs <= r, kept only when
//                  every value is a power of two (then log2 is an integer)

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "opideal/dyadic.hpp"

namespace opideal {

struct Run {
  Dyadic value;
  BigInt length;
};

class BlockSequence {
 public:
  BlockSequence() = default;

  // Merges adjacent equal values; throws if values increase anywhere or a
  // length is nonpositive or a value is negative.
  static BlockSequence from_runs(std::vector<Run> runs);

  static BlockSequence constant(const Dyadic& v, const BigInt& len) {
    return from_runs({Run{v, len}});
  }

  size_t run_count() const { return runs_.size(); }
  const Run& run(size_t r) const { return runs_[r]; }
  const BigInt& coverage() const { return end_.back(); }
  bool empty() const { return runs_.empty(); }

  // First and last index of run r.
  BigInt run_start(size_t r) const { return r == 0 ? BigInt(1) : end_[r - 1] + 1; }
  const BigInt& run_end(size_t r) const { return end_[r]; }

  // Index of the run containing k (1 <= k <= coverage).
  size_t run_of(const BigInt& k) const;

  const Dyadic& value_at(const BigInt& k) const { return runs_[run_of(k)].value; }

  // sigma_k = sum_{j<=k} value_j, exact; cost O(log runs).
  Dyadic partial_sum(const BigInt& k) const;

  // All values strictly positive powers of two?
  bool all_pow2() const { return all_pow2_; }

  // sum_{j<=k} log2(value_j) as an exact integer; requires all_pow2().
  BigInt log2_prefix(const BigInt& k) const;

  // log2 of (v_1...v_k)^{1/k} as an exact rational; requires all_pow2().
  BigRat gm_log2(const BigInt& k) const;

  // Transforms.
  BlockSequence interleave() const;             // u(+)u: lengths doubled
  BlockSequence scale(const Dyadic& c) const;   // c*u, c > 0
  BlockSequence dilate(const BigInt& m) const;  // t_j = u_ceil(j/m)

  // Sorted list of run end indices clipped to [1, k].
  std::vector<BigInt> boundaries_upto(const BigInt& k) const;

 private:
  void check_coverage(const BigInt& k) const {
    if (empty() || k < 1 || k > coverage())
      throw IndexOutOfCoverage("index " + k.get_str() + " outside coverage");
  }

  std::vector<Run> runs_;
  std::vector<BigInt> end_;
  std::vector<Dyadic> weighted_;
  std::vector<BigInt> log2sum_;
  bool all_pow2_ = false;
};

}  // namespace opideal
