#include "opideal/block_sequence.hpp"

#include <algorithm>

namespace opideal {

BlockSequence BlockSequence::from_runs(std::vector<Run> in) {
  BlockSequence s;
  for (auto& r : in) {
    if (r.length <= 0) throw Error("run length must be positive");
    if (r.value.sign() < 0) throw Error("run value must be nonnegative");
    if (!s.runs_.empty()) {
      Run& last = s.runs_.back();
      if (r.value == last.value) {
        last.length += r.length;
        continue;
      }
      if (r.value > last.value)
        throw Error("run values must be decreasing");
    }
    s.runs_.push_back(std::move(r));
  }
  if (s.runs_.empty()) throw Error("sequence needs at least one run");

  s.all_pow2_ = true;
  BigInt idx(0);
  Dyadic wsum;
  BigInt lsum(0);
  for (const Run& r : s.runs_) {
    idx += r.length;
    s.end_.push_back(idx);
    wsum += r.value.times_big(r.length);
    s.weighted_.push_back(wsum);
    if (r.value.mantissa() != 1) s.all_pow2_ = false;
    if (s.all_pow2_) {
      lsum += r.length * r.value.exponent();
      s.log2sum_.push_back(lsum);
    }
  }
  if (!s.all_pow2_) s.log2sum_.clear();
  return s;
}

size_t BlockSequence::run_of(const BigInt& k) const {
  check_coverage(k);
  auto it = std::lower_bound(end_.begin(), end_.end(), k);
  return static_cast<size_t>(it - end_.begin());
}

Dyadic BlockSequence::partial_sum(const BigInt& k) const {
  size_t r = run_of(k);
  Dyadic s = r == 0 ? Dyadic() : weighted_[r - 1];
  BigInt inside = k - run_start(r) + 1;
  s += runs_[r].value.times_big(inside);
  return s;
}

BigInt BlockSequence::log2_prefix(const BigInt& k) const {
  if (!all_pow2_) throw Error("log2_prefix needs power-of-two values");
  size_t r = run_of(k);
  BigInt s = r == 0 ? BigInt(0) : log2sum_[r - 1];
  BigInt inside = k - run_start(r) + 1;
  s += inside * runs_[r].value.exponent();
  return s;
}

BigRat BlockSequence::gm_log2(const BigInt& k) const {
  BigRat g(log2_prefix(k), k);
  g.canonicalize();
  return g;
}

BlockSequence BlockSequence::interleave() const {
  std::vector<Run> rs;
  rs.reserve(runs_.size());
  for (const Run& r : runs_) rs.push_back(Run{r.value, r.length * 2});
  return from_runs(std::move(rs));
}

BlockSequence BlockSequence::scale(const Dyadic& c) const {
  if (c.sign() <= 0) throw Error("scale factor must be positive");
  std::vector<Run> rs;
  rs.reserve(runs_.size());
  for (const Run& r : runs_) rs.push_back(Run{r.value * c, r.length});
  return from_runs(std::move(rs));
}

BlockSequence BlockSequence::dilate(const BigInt& m) const {
  if (m <= 0) throw Error("dilation must be positive");
  std::vector<Run> rs;
  rs.reserve(runs_.size());
  for (const Run& r : runs_) rs.push_back(Run{r.value, r.length * m});
  return from_runs(std::move(rs));
}

std::vector<BigInt> BlockSequence::boundaries_upto(const BigInt& k) const {
  check_coverage(k);
  std::vector<BigInt> out;
  for (const BigInt& e : end_) {
    if (e >= k) {
      out.push_back(k);
      break;
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace opideal
