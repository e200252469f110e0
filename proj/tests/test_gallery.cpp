#include <algorithm>

#include "doctest.h"
#include "opideal/gallery.hpp"
#include "test_util.hpp"

using namespace opideal;
using namespace opideal::gallery;

namespace {

Schedule paper_schedule() { return Schedule{{0, 1, 10, 75, 460}}; }
Schedule mild_schedule() { return Schedule{{0, 1, 4, 8}}; }

}  // namespace

TEST_CASE("schedule check: pinned inequalities") {
  // 1 > 0, 10 > 1+8, 75 > 10+64, 460 > 75+384
  CHECK(check_schedule(paper_schedule()).ok);
  ScheduleCheck bad = check_schedule(Schedule{{0, 1, 9, 75, 460}});
  CHECK(!bad.ok);
  CHECK(bad.first_failure == 1);
  CHECK(!check_schedule(mild_schedule()).ok);
  CHECK_THROWS_AS(build_ex15(mild_schedule()), ScheduleViolation);
  Ex15Bundle relaxed = build_ex15(mild_schedule(), SchedulePolicy::relaxed);
  CHECK(!relaxed.conforming);
  CHECK(relaxed.first_violation == 1);
}

TEST_CASE("quasi-nilpotent ledger: block values") {
  Ex15Bundle b = build_ex15(paper_schedule());
  CHECK(b.conforming);
  CHECK(b.u.value_at(BigInt(1)) == Dyadic::pow2(BigInt(-1)));
  CHECK(b.u.value_at(BigInt(2)) == Dyadic::pow2(BigInt(-10)));
  CHECK(b.u.value_at(BigInt(1) << 1) == Dyadic::pow2(BigInt(-10)));
  CHECK(b.u.value_at(BigInt(1) << 10) == Dyadic::pow2(BigInt(-75)));
  CHECK(b.v.value_at(BigInt(1)) == Dyadic::pow2(BigInt(-9)));   // 2^(1-p_2)
  CHECK(b.v.value_at(BigInt(7)) == Dyadic::pow2(BigInt(-9)));
  CHECK(b.v.value_at(BigInt(8)) == Dyadic::pow2(BigInt(-73)));  // 2^(2-p_3)
  CHECK(b.coverage == (BigInt(1) << 81) - 1);  // v ends at 2^(q_3) - 1
  // sigma_1, sigma_2
  CHECK(b.sigma(BigInt(1)) == Dyadic::pow2(BigInt(-1)));
  CHECK(b.sigma(BigInt(2)) == Dyadic::pow2(BigInt(-1)) + Dyadic::pow2(BigInt(-10)));
}

TEST_CASE("product inequality: exact margins at every boundary") {
  Ex15Bundle b = build_ex15(paper_schedule());
  ProductReport rep = check_product_inequality(b, b.coverage);
  CHECK(rep.ok);
  // frozen exact log2 margins (big-integer accounting)
  for (const ProductMargin& m : rep.boundary_margins) {
    CHECK(m.log2_margin < 0);
    if (m.k == 1) CHECK(m.log2_margin == -8);
    if (m.k == 7) CHECK(m.log2_margin == -2);
    if (m.k == 1023) CHECK(m.log2_margin == -64010);
    if (m.k == (BigInt(1) << 14) - 1) CHECK(m.log2_margin == -33290);
  }
  // margins exist at the v-block ends up to 2^(q_3)
  CHECK(rep.boundary_margins.size() >= 6);

  // a sequence pair that violates: bump v above u everywhere early
  Ex15Bundle bad = b;
  std::vector<Run> vr;
  vr.push_back(Run{Dyadic::pow2(BigInt(0)), BigInt(4)});
  vr.push_back(Run{Dyadic::pow2(BigInt(-100)), BigInt(1000)});
  bad.v = BlockSequence::from_runs(vr);
  bad.coverage = std::min(bad.u.coverage(), bad.v.coverage());
  ProductReport vrep = check_product_inequality(bad, bad.coverage);
  CHECK(!vrep.ok);
  CHECK(vrep.first_violation == 1);  // v_1 = 1 > 1/2 = u_1
}

TEST_CASE("product inequality gives GM-level membership of v") {
  // prefix products of v below those of u mean GM(v) <= GM(u) pointwise,
  // the geometric-mean-level membership statement; checked exactly at the
  // merged run boundaries
  Ex15Bundle b = build_ex15(paper_schedule());
  std::vector<BigInt> pts;
  for (const BigInt& k : b.u.boundaries_upto(b.coverage)) pts.push_back(k);
  for (const BigInt& k : b.v.boundaries_upto(b.coverage)) pts.push_back(k);
  for (const BigInt& k : pts) CHECK(b.v.gm_log2(k) <= b.u.gm_log2(k));
}

TEST_CASE("theta: brute force agreement on a mild schedule") {
  Ex15Bundle b = build_ex15(mild_schedule(), SchedulePolicy::relaxed);
  testutil::Rng rng(515151);
  long cov = b.coverage.get_si();
  REQUIRE(cov <= 10000);
  for (int i = 0; i < 50; ++i) {
    BigInt k(rng.range(1, cov));
    ThetaResult fast = theta_exact(b, k);
    ThetaResult brute = theta_brute_force(b, k);
    CHECK(fast.value == brute.value);
    CHECK(fast.tail_certified == brute.tail_certified);
  }
}

TEST_CASE("theta: frozen exact values on the steep schedule") {
  Ex15Bundle b = build_ex15(paper_schedule());

  // theta_1 <= v_1 <= u_1
  ThetaResult t1 = theta_exact(b, BigInt(1));
  CHECK(t1.value <= b.v.value_at(BigInt(1)));
  CHECK(t1.value <= b.u.value_at(BigInt(1)));

  // k = 2^(p_1 + 1) = 4: the infimum sits at j = 8 with value 2^-8 + 2^-70
  ThetaResult t4 = theta_exact(b, BigInt(4));
  CHECK(t4.tail_certified);
  CHECK(t4.value == Dyadic::pow2(BigInt(-8)) + Dyadic::pow2(BigInt(-70)));
  CHECK(t4.argmin == 8);

  // k = 2^(p_2 + 2) = 2^12: j = 1023, value 7165 * 2^-75
  ThetaResult t12 = theta_exact(b, BigInt(1) << 12);
  CHECK(t12.tail_certified);
  CHECK(t12.value == Dyadic(BigInt(7165), BigInt(-75)));
  CHECK(t12.argmin == 1023);

  // k = 2^(p_3 + 3) = 2^78: j = 2^75 - 1, value (15*2^75 - 7) * 2^-460
  ThetaResult t78 = theta_exact(b, BigInt(1) << 78);
  CHECK(t78.tail_certified);
  CHECK(t78.value == Dyadic(15 * (BigInt(1) << 75) - 7, BigInt(-460)));
  CHECK(t78.argmin == (BigInt(1) << 75) - 1);

  // theta_k <= k v_k always (witness j = k)
  for (long e : {3l, 20l, 40l}) {
    BigInt k = BigInt(1) << static_cast<unsigned long>(e);
    ThetaResult th = theta_exact(b, k);
    CHECK(th.value <= b.v.value_at(k).times_big(k));
    CHECK(th.value.sign() >= 0);
  }
}

TEST_CASE("refutation grid and bound rows") {
  Ex15Bundle b = build_ex15(paper_schedule());
  std::vector<Rational> alphas = {Rational{BigInt(1), BigInt(1)},
                                  Rational{BigInt(1), BigInt(2)}};
  std::vector<Dyadic> cs = {Dyadic(1), Dyadic::pow2(BigInt(10))};
  RefuteReport rep = build_w_and_refute(b, alphas, cs);

  REQUIRE(rep.rows.size() == 3);
  // the claimed floor 2^(-p_{n+1} + p_n + 2n - 1) holds at n = 1 and fails
  // at n = 2 and 3: theta at 2^12 is 7165*2^-75 < 2^-62, and at 2^78 it is
  // (15*2^75 - 7)*2^-460 < 2^-380
  CHECK(rep.rows[0].floor_holds);
  CHECK(!rep.rows[1].floor_holds);
  CHECK(!rep.rows[2].floor_holds);
  CHECK(rep.rows[0].ratio_holds);
  CHECK(!rep.rows[1].ratio_holds);
  CHECK(!rep.rows[2].ratio_holds);
  for (const ThetaBoundRow& row : rep.rows) CHECK(row.tail_certified);

  // (alpha=1, c=1) is refuted already at n = 1
  const RefuteEntry& e0 = rep.entries[0];
  CHECK(e0.refuted);
  CHECK(e0.witness_block == 1);
  // (alpha=1/2, c=2^10) cannot be refuted from these blocks
  bool found_unrefuted = false;
  for (const RefuteEntry& e : rep.entries)
    if (!e.refuted) found_unrefuted = true;
  CHECK(found_unrefuted);

  CHECK(rep.w_bounds_ok);
  CHECK(rep.theta_envelope_ok);
  CHECK(rep.rearrangement_ok);
}

TEST_CASE("mild-schedule matrices: nilpotent difference") {
  Ex15Bundle b = build_ex15(mild_schedule(), SchedulePolicy::relaxed);
  Ex15Matrices mats = assemble_ex15_matrices(b, 63);
  const long N = mats.A.rows();
  CHECK(N == 63);
  CHECK(hornmat::is_upper_triangular(mats.A));
  for (long i = 0; i < N; ++i) {
    CHECK(mats.A(i, i) == hornmat::Complex(mats.w[static_cast<size_t>(i)], 0));
    CHECK(mats.T(i, i) == hornmat::Complex(0, 0));
  }
  // strictly upper triangular implies exactly nilpotent, even in floats
  Matrix P = mats.T;
  for (int k = 0; k < 6; ++k) P = P * P;  // T^64
  CHECK(P.isZero(0.0));
}

TEST_CASE("instability ledger: window selection on the doubly exponential pair") {
  BlockSequence u = double_exp_generator(23);
  exactseq::IdealSpec J{{u}, exactseq::IdealSpec::Presentation::principal};

  // precondition: the pair is certified unstable within (2^20, 20)
  BlockSequence uu = double_exp_generator(26);
  exactseq::SearchBounds bounds;
  bounds.max_dilation = BigInt(1) << 20;
  bounds.max_scale_exp = 20;
  bounds.range = uu.coverage();
  exactseq::StabilityVerdict v = exactseq::stability_probe(uu, bounds);
  CHECK(!v.stable);

  Thm13Bundle b = build_thm13(J, u, 7);
  REQUIRE(b.blocks.size() == 16);

  // frozen window ends, found by exact scan
  CHECK(b.block(1).m == 31);
  CHECK(b.block(1).p == 31);
  CHECK(b.block(2).m == 262141);
  CHECK(b.block(3).m == (BigInt(1) << 35) - 7);

  // achieved ratios p_n/m_n >= 1 - 1/n
  for (long n = 1; n <= 16; ++n) {
    CHECK(b.block(n).p * n >= (n - 1) * b.block(n).m);
  }

  // wbar_1 = 2^(-181/31)
  BigRat want(-181, 31);
  want.canonicalize();
  CHECK(b.block(1).wbar_log2 == want);

  // sigma ledger: strictly decreasing powers of two below the envelope
  for (long n = 1; n <= 15; ++n) {
    CHECK(b.block(n).sigma_bar.is_pow2());
    CHECK(b.block(n).sigma_bar <= u.value_at(b.block(n).m));
    if (n > 1) CHECK(b.block(n).sigma_bar < b.block(n - 1).sigma_bar);
  }
}

TEST_CASE("instability ledger: estimates, witness and refutation") {
  BlockSequence u = double_exp_generator(23);
  exactseq::IdealSpec J{{u}, exactseq::IdealSpec::Presentation::principal};
  Thm13Bundle b = build_thm13(J, u, 7);
  Thm13Report rep = check_thm13_estimates(b, 8);

  CHECK(rep.invariants_ok);
  CHECK(rep.crude_ok);
  CHECK(rep.crude_rows.size() == 7 * 4 * 2);

  CHECK(rep.lambda_prime_ok);
  CHECK(rep.lambda_prime_witness.dilation == 2);
  CHECK(rep.lambda_prime_witness.scale == Dyadic(2));

  CHECK(rep.lambda_not_found_within_bounds);
  REQUIRE(rep.lambda_refutations.size() == 9);
  for (const LambdaRefutation& lr : rep.lambda_refutations) CHECK(lr.refuted);

  for (const DominatingSample& s : rep.dominating_w)
    CHECK(s.at_least_third_of_wbar);
}

TEST_CASE("instability ledger: truncated matrices") {
  BlockSequence u = double_exp_generator(23);
  exactseq::IdealSpec J{{u}, exactseq::IdealSpec::Presentation::principal};
  Thm13Bundle b = build_thm13(J, u, 7);
  const long N = 40;
  Thm13Matrices mats = assemble_thm13_matrices(b, N);

  CHECK(hornmat::is_upper_triangular(mats.A));
  // diagonal of A is w, singular values dominated by t (the generator)
  std::vector<double> s(static_cast<size_t>(N));
  for (long k = 1; k <= N; ++k)
    s[static_cast<size_t>(k - 1)] = u.value_at(BigInt(k)).to_double();
  CHECK(hornmat::svd_verify(mats.A, s, 1e-9).ok);
  for (long k = 0; k < N; ++k)
    CHECK(mats.A(k, k) == hornmat::Complex(mats.w[static_cast<size_t>(k)], 0));

  // eigenvalues of D1 (+) (-D2) match the lambda' head: the first 2 m_1
  // canonically ordered values agree, and everything after is smaller
  std::vector<hornmat::Complex> eig;
  for (long k = 0; k < N; ++k) {
    eig.push_back(mats.D1(k, k));
    eig.push_back(-mats.D2(k, k));
  }
  auto ordered = hornmat::EigenData::ordered(eig);
  REQUIRE(mats.lambda_prime_prefix.size() == 62);
  for (size_t i = 0; i < mats.lambda_prime_prefix.size(); ++i) {
    CHECK(std::abs(ordered.values[i] - mats.lambda_prime_prefix[i]) <= 1e-18);
  }
  double floor_rest = std::abs(mats.lambda_prime_prefix.back());
  for (size_t i = mats.lambda_prime_prefix.size(); i < ordered.values.size(); ++i)
    CHECK(std::abs(ordered.values[i]) < floor_rest);

  // T is block upper triangular; its eigenvalues are the diagonal entries
  auto teig = hornmat::EigenData::ordered(hornmat::eigenvalues_oracle(mats.T));
  std::vector<hornmat::Complex> expect;
  for (long k = 0; k < N; ++k) {
    expect.push_back(mats.A(k, k) + mats.D1(k, k));
    expect.push_back(-mats.A(k, k) - mats.D2(k, k));
  }
  CHECK(hornmat::multiset_pairing_distance(teig.values, expect) <= 1e-8);
}
