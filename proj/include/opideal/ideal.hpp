// Ideal membership calculus for diagonal operators described by their
// singular-value sequences.
//
// Membership of diag(t) in the ideal generated by diag(u) reduces to a
// dominance witness: positive integers (m, c) with  t_{m j} <= c u_j  for
// every j.  Both sides are step functions of j, so dominance over a range
// is decided by comparing finitely many piece-start indices.  Searches are
// bounded: dilations and scales run over powers of two up to the caller's
// budget, and a miss is reported as "not found within bounds", never as a
// proof of non-membership.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opideal/block_sequence.hpp"
#include "opideal/transforms.hpp"

namespace opideal::exactseq {

// Certifies t_{m j} <= c u_j on the verified range, for generator k.
struct DominanceWitness {
  size_t generator_index = 1;  // 1-based
  BigInt dilation{1};
  Dyadic scale{1};
  std::string to_string() const {
    return "(gen " + std::to_string(generator_index) + ", m=" +
           dilation.get_str() + ", c=" + scale.to_string() + ")";
  }
};

struct DominanceResult {
  bool ok = false;
  BigInt first_failure{0};  // smallest failing j when !ok
  BigInt range{0};          // the J that was verified
};

// Exact check of t_{m j} <= c u_j for all j in [1, K].
// Pre: m K <= coverage(t), K <= coverage(u).
DominanceResult dominance_check(const BlockSequence& t, const BlockSequence& u,
                                const BigInt& dilation, const Dyadic& scale,
                                const BigInt& K);

inline DominanceResult dominance_check(const BlockSequence& t,
                                       const BlockSequence& u,
                                       const DominanceWitness& w,
                                       const BigInt& K) {
  return dominance_check(t, u, w.dilation, w.scale, K);
}

struct SearchBounds {
  BigInt max_dilation{1048576};  // dilations 1,2,4,... up to this
  long max_scale_exp = 20;       // scales 2^0 .. 2^max_scale_exp
  BigInt range{1048576};         // indices verified: j in [1, min(range, coverage)]
};

struct IdealSpec {
  enum class Presentation { principal, countably_generated };
  std::vector<BlockSequence> generators;
  Presentation presentation = Presentation::principal;

  // Lazy closure family: member n is  2^a dilate(gen_g, 2^a)  where (g, a)
  // enumerates generators diagonally (for a principal ideal, g=1 and a=n).
  // Scales and dilations restricted to powers of two generate the same
  // ideal and keep every comparison exact.
  std::pair<size_t, long> closure_coords(long n) const;
  BlockSequence closure_member(long n) const;
};

struct SearchMiss {
  size_t generator_index;
  BigInt dilation;
  Dyadic scale;
  BigInt fail_index;
};

struct MembershipOutcome {
  std::optional<DominanceWitness> witness;
  std::vector<SearchMiss> misses;  // one refusal per searched combination
  BigInt range_used{0};
  bool found() const { return witness.has_value(); }
};

// First witness in deterministic order (generator, then dilation, then
// scale, all ascending).  A miss is a bounded refutation only.
MembershipOutcome membership_search(const BlockSequence& t, const IdealSpec& J,
                                    const SearchBounds& bounds);

// Geometric stability probe: does the GM transform of u stay in the ideal
// generated by u, within bounds?  The GM side is evaluated exactly (all
// values powers of two) or by rigorous log intervals; an interval verdict
// is issued only when every comparison is decided.
struct StabilityVerdict {
  bool stable = false;
  std::optional<DominanceWitness> witness;  // when stable
  std::vector<SearchMiss> certificate;      // when unstable: per-combo failures
  BigInt range_used{0};
};

StabilityVerdict stability_probe(const BlockSequence& u,
                                 const SearchBounds& bounds);

}  // namespace opideal::exactseq
