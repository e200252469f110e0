// Generators and certified checkers for the two counterexample families:
//
//  * the quasi-nilpotent ledger: from an exponent schedule p build the pair
//    of sequences u (2^-p_n on [2^{p_{n-1}}, 2^{p_n}-1]) and v
//    (2^n 2^{-p_{n+1}} on [2^{q_{n-1}}, 2^{q_n}-1], q_n = 2n + p_n), verify
//    the prefix product inequality exactly, evaluate
//    theta_k = inf_j (j v_j + |sigma_k - sigma_j|) by certified finite
//    enumeration, and refute the Cesaro-type criterion
//    theta_k / k <= c u_{ceil(alpha k)} over a grid of (alpha, c);
//
//  * the instability ledger: from a generator whose geometric-mean
//    transform escapes the ideal, pick windows (m_{n-1}, m_n] whose
//    windowed geometric means wbar_n beat the n-th closure member, then
//    build the block data sigma_bar, eps, mu, nu and the signed block
//    sequences whose Cesaro means separate membership from
//    non-membership within stated bounds.
//
// Everything scale-relevant is exact: dyadic values, big integer indices,
// and rational log2 forms; wbar values (p_n-th roots) are handled through
// certified floor-log separations rather than decimal approximations.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opideal/commlab.hpp"
#include "opideal/hornmat.hpp"
#include "opideal/ideal.hpp"

namespace opideal::gallery {

using hornmat::Matrix;

// ------------------------------- schedules --------------------------------

struct Schedule {
  std::vector<long> p;  // p[0] = 0 < p[1] < ...
  long q(size_t n) const { return 2 * static_cast<long>(n) + p.at(n); }
  size_t blocks() const { return p.empty() ? 0 : p.size() - 1; }
};

struct ScheduleCheck {
  bool ok = false;
  long first_failure = -1;  // n with p_{n+1} <= p_n + 2n 4^n
};

// p_{n+1} > p_n + 2n 2^(2n) for all n >= 0, plus monotonicity.
ScheduleCheck check_schedule(const Schedule& s);

class ScheduleViolation : public Error {
 public:
  ScheduleViolation(const std::string& what, long n) : Error(what), n(n) {}
  long n;
};

enum class SchedulePolicy { strict, relaxed };

// --------------------------- quasi-nilpotent ledger ------------------------

struct Ex15Bundle {
  Schedule schedule;
  bool conforming = false;
  long first_violation = -1;
  BlockSequence u;
  BlockSequence v;
  BigInt coverage;  // indices where both u and v are defined

  Dyadic sigma(const BigInt& k) const { return u.partial_sum(k); }
};

Ex15Bundle build_ex15(const Schedule& s,
                      SchedulePolicy policy = SchedulePolicy::strict);

struct ProductMargin {
  BigInt k;
  BigInt log2_margin;  // log2 prod(v/u) up to k; must be <= 0
};

struct ProductReport {
  bool ok = false;
  BigInt first_violation{0};
  std::vector<ProductMargin> boundary_margins;
};

// Exact verification of prod v <= prod u for every k <= K: big-integer
// log2 accounting at the merged run partition; in between, prefix margins
// are monotone piecewise so endpoint checks certify all interior k.
ProductReport check_product_inequality(const Ex15Bundle& b, const BigInt& K);

struct ThetaResult {
  Dyadic value;   // exact minimum over the covered candidate set
  BigInt argmin;
  bool tail_certified = false;  // value is the infimum of every extension
  Dyadic tail_lower;            // floor for candidates beyond coverage
  Dyadic certified_lower() const {
    return tail_certified ? value : std::min(value, tail_lower);
  }
};

// theta_k = inf_j (j v_j + |sigma_k - sigma_j|).  The objective is linear
// on every cell of the merged run partition, so the covered infimum is a
// finite exact minimum over cell endpoints; beyond coverage the sigma term
// alone gives a floor, and when that floor clears the covered minimum the
// result is the infimum over all of N for any tail extension.
ThetaResult theta_exact(const Ex15Bundle& b, const BigInt& k);

// Brute force over every covered j; only for small coverage.
ThetaResult theta_brute_force(const Ex15Bundle& b, const BigInt& k);

struct Rational {
  BigInt num{1};
  BigInt den{1};
  std::string to_string() const { return num.get_str() + "/" + den.get_str(); }
};

struct RefuteEntry {
  Rational alpha;
  Dyadic c;
  bool refuted = false;
  long witness_block = -1;   // n with theta lower bound beating c u_(alpha k)
  BigInt witness_k{0};
  std::string detail;
};

struct ThetaBoundRow {
  long n;
  BigInt k;                 // 2^(p_n + n)
  Dyadic theta_lower;       // certified lower bound for theta_k
  Dyadic theta_value;       // covered minimum
  bool tail_certified;
  Dyadic claimed_floor;     // 2^(-p_{n+1} + p_n + 2n - 1)
  bool floor_holds;         // theta_lower >= claimed_floor, exact
  bool ratio_holds;         // theta_lower/k >= 2^(n-1) u_k, exact
};

struct RefuteReport {
  std::vector<ThetaBoundRow> rows;      // per block n = 1 .. blocks-1
  std::vector<RefuteEntry> entries;     // per grid point
  bool w_bounds_ok = false;             // |w_k| <= u_k at sampled indices
  bool theta_envelope_ok = false;       // 0 <= theta_k <= k v_k at samples
  bool rearrangement_ok = false;        // |sum lambda - sum w| <= 2 k u_k
  std::string rearrangement_note;
};

RefuteReport build_w_and_refute(const Ex15Bundle& b,
                                const std::vector<Rational>& alphas,
                                const std::vector<Dyadic>& cs);

// --------------------------- instability ledger ----------------------------

// u_1 = 2^-1 and u_n = 2^(-2^k) on [2^(2^(k-1)), 2^(2^k) - 1]: the standard
// non-geometrically-stable generator at desk scale.
BlockSequence double_exp_generator(int kmax);

struct Thm13Block {
  BigInt m;              // window end m_n
  BigInt p;              // window length p_n
  BigRat wbar_log2;      // exact log2 of the windowed geometric mean
  BigInt wbar_floor;     // floor(wbar_log2)
  Dyadic gap_bound;      // 2^(wbar_floor - 1) <= wbar_n - wbar_{n+1}, certified
  Dyadic sigma_bar;      // power of two
  Dyadic eps;            // eps_n (pairwise equal)
};

struct Thm13Bundle {
  BlockSequence t;               // source sequence (a member of J)
  exactseq::IdealSpec J;
  int pairs = 0;                 // usable (2n-1, 2n) pairs
  std::vector<Thm13Block> blocks;  // singles 1 .. 2 pairs + 2
  std::vector<double> ratio_p_over_m;  // achieved p_n / m_n

  const Thm13Block& block(long n) const {  // 1-based
    return blocks.at(static_cast<size_t>(n - 1));
  }
};

// Greedy window selection: m_n is the least index with
//   wbar_n > closure_member(n) at m_n   and   p_n/m_n >= 1 - 1/n,
// then sigma_bar_n = (1/2) min(gap certificate, t value at m_n, previous),
// eps as the pairwise minimum of sigma gaps.  Throws when the search
// exhausts the coverage or the floor-log separation fails.
Thm13Bundle build_thm13(const exactseq::IdealSpec& J, const BlockSequence& t,
                        int pairs);

struct CrudeBoundRow {
  long pair;       // n
  int range;       // 1..4
  BigInt index;    // endpoint checked
  bool holds;      // exact
};

struct DominatingSample {
  long pair;
  BigInt index;    // 2 m_{2n-2} + p_{2n-1}
  std::string value_floor;  // certified floor of |eta|/index as "2^(a/b)"
  bool at_least_third_of_wbar;  // |eta|/index >= wbar_{2n-1} / 3, certified
};

struct LambdaRefutation {
  long power;        // diagonal witness (2^a, 2^a)
  long pair;         // block pair used
  BigInt rank;       // rearranged position with the certified floor
  BigInt gen_index;  // generator index compared against
  bool refuted;
};

struct Thm13Report {
  bool invariants_ok = false;   // every bundle inequality, exact
  std::vector<CrudeBoundRow> crude_rows;
  bool crude_ok = false;
  exactseq::DominanceWitness lambda_prime_witness;  // for the eta'/k sequence
  bool lambda_prime_ok = false;
  std::vector<DominatingSample> dominating_w;
  std::vector<LambdaRefutation> lambda_refutations;
  long lambda_bound_power = 0;  // every (m, c) <= (2^a, 2^a) refuted
  bool lambda_not_found_within_bounds = false;
};

Thm13Report check_thm13_estimates(const Thm13Bundle& b, long max_power);

// ------------------------------ matrix demos -------------------------------

struct Ex15Matrices {
  Matrix A;  // upper triangular, diagonal w
  Matrix W;  // diag(w)
  Matrix T;  // A - W: strictly upper triangular, nilpotent
  std::vector<double> w;
};

// N is rounded down to a full dyadic block count (2^K - 1).
Ex15Matrices assemble_ex15_matrices(const Ex15Bundle& b, long N);

struct Thm13Matrices {
  Matrix A;   // upper triangular, diagonal w, singular values <= t
  Matrix D1;  // diag(mu)
  Matrix D2;  // diag(nu)
  Matrix T;   // (A + D1) (+) (-A - D2), block diagonal
  std::vector<double> w, mu, nu;
  std::vector<hornmat::Complex> lambda_prime_prefix;  // fully-represented head
};

Thm13Matrices assemble_thm13_matrices(const Thm13Bundle& b, long N);

}  // namespace opideal::gallery
