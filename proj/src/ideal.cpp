#include "opideal/ideal.hpp"

#include <algorithm>

namespace opideal::exactseq {

namespace {

// Piece-start indices j in [1, K] at which either u_j or t_{m j} can change
// value: starts of u-runs, plus the smallest j mapping into each t-run.
std::vector<BigInt> piece_starts(const BlockSequence& t, const BlockSequence& u,
                                 const BigInt& m, const BigInt& K) {
  std::vector<BigInt> starts;
  starts.push_back(1);
  for (size_t r = 1; r < u.run_count(); ++r) {
    BigInt s = u.run_start(r);
    if (s > K) break;
    starts.push_back(s);
  }
  for (size_t r = 1; r < t.run_count(); ++r) {
    // smallest j with m j > end(r-1)
    BigInt s = t.run_end(r - 1) / m + 1;
    if (s > K) break;
    starts.push_back(s);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  return starts;
}

}  // namespace

DominanceResult dominance_check(const BlockSequence& t, const BlockSequence& u,
                                const BigInt& m, const Dyadic& c,
                                const BigInt& K) {
  if (m < 1) throw Error("dilation must be >= 1");
  if (c.sign() <= 0) throw Error("scale must be positive");
  if (K < 1) throw Error("range must be >= 1");
  if (K > u.coverage() || m * K > t.coverage())
    throw IndexOutOfCoverage("dominance range outside coverage");

  DominanceResult res;
  res.range = K;
  for (const BigInt& j : piece_starts(t, u, m, K)) {
    Dyadic lhs = t.value_at(m * j);
    Dyadic rhs = u.value_at(j) * c;
    if (lhs > rhs) {
      res.ok = false;
      res.first_failure = j;
      return res;
    }
  }
  res.ok = true;
  return res;
}

std::pair<size_t, long> IdealSpec::closure_coords(long n) const {
  if (n < 1) throw Error("closure index must be >= 1");
  size_t g = generators.size();
  if (g == 0) throw Error("ideal has no generators");
  if (presentation == Presentation::principal || g == 1)
    return {0, n};
  // Diagonal enumeration over (generator, power).
  long i = n - 1;
  return {static_cast<size_t>(i % static_cast<long>(g)),
          i / static_cast<long>(g) + 1};
}

BlockSequence IdealSpec::closure_member(long n) const {
  auto [g, a] = closure_coords(n);
  BigInt two_a = BigInt(1) << static_cast<unsigned long>(a);
  return generators[g].dilate(two_a).scale(Dyadic(two_a, BigInt(0)));
}

MembershipOutcome membership_search(const BlockSequence& t, const IdealSpec& J,
                                    const SearchBounds& bounds) {
  MembershipOutcome out;
  for (size_t g = 0; g < J.generators.size(); ++g) {
    const BlockSequence& u = J.generators[g];
    for (BigInt m(1); m <= bounds.max_dilation; m *= 2) {
      BigInt K = std::min(std::min(bounds.range, u.coverage()),
                          BigInt(t.coverage() / m));
      if (K < 1) break;
      out.range_used = std::max(out.range_used, K);
      for (long b = 0; b <= bounds.max_scale_exp; ++b) {
        Dyadic c = Dyadic::pow2(BigInt(b));
        DominanceResult r = dominance_check(t, u, m, c, K);
        if (r.ok) {
          out.witness = DominanceWitness{g + 1, m, c};
          return out;
        }
        out.misses.push_back(SearchMiss{g + 1, m, c, r.first_failure});
      }
    }
  }
  return out;
}

namespace {

// GM-side dominance for the stability probe.  LHS(j) = GM(u)(m j) is
// nonincreasing and RHS(j) = c u_j is constant on u-runs, so checking each
// u-run start decides the whole range.  Exact when u has power-of-two
// values, else rigorous intervals (throws when an interval comparison is
// inconclusive).
std::optional<BigInt> gm_dominance_failure(const BlockSequence& u,
                                           const BigInt& m, long scale_exp,
                                           const BigInt& K) {
  for (size_t r = 0; r < u.run_count(); ++r) {
    BigInt j = u.run_start(r);
    if (j > K) break;
    BigInt mj = m * j;
    if (u.all_pow2()) {
      // S(mj)/(mj) <= scale_exp + e_j  <=>  S(mj) <= (scale_exp + e_j) * mj
      BigInt lhs = u.log2_prefix(mj);
      BigInt rhs = (BigInt(scale_exp) + u.value_at(j).exponent()) * mj;
      if (lhs > rhs) return j;
    } else {
      GmValue gm = geometric_mean_transform(u, mj);
      LogInterval lhs = gm.log2_range;
      LogInterval rhs = log2_interval(u.value_at(j));
      rhs.lo += static_cast<double>(scale_exp);
      rhs.hi += static_cast<double>(scale_exp);
      if (lhs.hi <= rhs.lo) continue;   // decided: dominated
      if (lhs.lo > rhs.hi) return j;    // decided: violated
      throw Error("stability probe: interval comparison inconclusive at j=" +
                  j.get_str() + " (width " + std::to_string(gm.width()) + ")");
    }
  }
  return std::nullopt;
}

}  // namespace

StabilityVerdict stability_probe(const BlockSequence& u,
                                 const SearchBounds& bounds) {
  if (u.value_at(u.coverage()).sign() <= 0)
    throw Error("stability probe needs a strictly positive sequence");
  StabilityVerdict v;
  for (BigInt m(1); m <= bounds.max_dilation; m *= 2) {
    BigInt K = std::min(std::min(bounds.range, u.coverage()),
                        BigInt(u.coverage() / m));
    if (K < 1) break;
    v.range_used = std::max(v.range_used, K);
    for (long b = 0; b <= bounds.max_scale_exp; ++b) {
      auto fail = gm_dominance_failure(u, m, b, K);
      if (!fail) {
        v.stable = true;
        v.witness = DominanceWitness{1, m, Dyadic::pow2(BigInt(b))};
        return v;
      }
      v.certificate.push_back(SearchMiss{1, m, Dyadic::pow2(BigInt(b)), *fail});
    }
  }
  v.stable = false;
  return v;
}

}  // namespace opideal::exactseq
