#include <algorithm>

#include "opideal/gallery.hpp"

namespace opideal::gallery {

namespace {

// eta'(offset k) on one quarter range equals (a + b k + (c/p) k); exact
// arithmetic multiplies through by p.
struct EtaRange {
  BigInt start;   // global index of offset 0 (the range covers start+1 .. start+p)
  BigInt p;       // range length
  Dyadic a, b, c;
  Dyadic bound;   // crude ceiling for |eta'| / index on this range
  long pair;
  int quarter;    // 1..4
  Dyadic sigma_half;  // sigma value at ceil(index/2), constant on the range

  // |eta'(k)| * p at offset k
  Dyadic abs_value_times_p(const BigInt& k) const {
    Dyadic v = a.times_big(p) + b.times_big(k * p) + c.times_big(k);
    return v.sign() < 0 ? -v : v;
  }
};

std::vector<EtaRange> eta_ranges(const Thm13Bundle& b) {
  std::vector<EtaRange> out;
  for (long n = 1; n <= b.pairs; ++n) {
    const Thm13Block& odd = b.block(2 * n - 1);
    const Thm13Block& even = b.block(2 * n);
    const BigInt& m_prev = (2 * n - 2 >= 1) ? b.block(2 * n - 2).m : BigInt(0);
    BigInt base = 2 * m_prev;
    Dyadic zero;

    // k sigma_odd
    out.push_back(EtaRange{base, odd.p, zero, odd.sigma_bar, zero,
                           odd.sigma_bar, n, 1, odd.sigma_bar});
    base += odd.p;
    // (p - k) sigma_odd + k eps/p
    out.push_back(EtaRange{base, odd.p, odd.sigma_bar.times_big(odd.p),
                           -odd.sigma_bar, odd.eps,
                           odd.sigma_bar.times_big(BigInt(2)), n, 2,
                           odd.sigma_bar});
    base += odd.p;
    // eps_odd - k sigma_even
    out.push_back(EtaRange{base, even.p, odd.eps, -even.sigma_bar, zero,
                           odd.sigma_bar + even.sigma_bar, n, 3,
                           even.sigma_bar});
    base += even.p;
    // eps_odd - (p - k) sigma_even - k eps/p
    out.push_back(EtaRange{base, even.p,
                           odd.eps - even.sigma_bar.times_big(even.p),
                           even.sigma_bar, -even.eps,
                           odd.sigma_bar + even.sigma_bar, n, 4,
                           even.sigma_bar});
    base += even.p;
  }
  return out;
}

}  // namespace

BlockSequence double_exp_generator(int kmax) {
  std::vector<Run> runs;
  runs.push_back(Run{Dyadic::pow2(BigInt(-1)), BigInt(1)});
  for (int k = 1; k <= kmax; ++k) {
    BigInt lo = BigInt(1) << (1ul << (k - 1));
    BigInt hi = BigInt(1) << (1ul << k);
    runs.push_back(Run{Dyadic::pow2(-(BigInt(1) << k)), hi - lo});
  }
  return BlockSequence::from_runs(std::move(runs));
}

Thm13Bundle build_thm13(const exactseq::IdealSpec& J, const BlockSequence& t,
                        int pairs) {
  if (pairs < 1) throw Error("need at least one block pair");
  if (!t.all_pow2())
    throw Error("window geometric means need power-of-two values");
  Thm13Bundle b;
  b.t = t;
  b.J = J;
  b.pairs = pairs;
  const long singles = 2 * pairs + 2;

  // --- greedy window ends m_n ---
  BigInt m_prev(0);
  BigInt S_prev(0);
  for (long n = 1; n <= singles; ++n) {
    BlockSequence closure = b.J.closure_member(n);
    BigInt two_n = BigInt(1) << static_cast<unsigned long>(n);
    BigInt lower = std::max(BigInt(m_prev + 1), BigInt(n * m_prev));
    // candidate m: the lower limit and every index where the closure member
    // enters a new run
    std::vector<BigInt> cand;
    cand.push_back(lower);
    for (size_t r = 0; r < b.J.generators[0].run_count(); ++r) {
      BigInt s = (b.J.generators[0].run_start(r) - 1) * two_n + 1;
      if (s > lower && s <= t.coverage()) cand.push_back(s);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::optional<BigInt> found;
    for (const BigInt& m : cand) {
      if (m > t.coverage() || m > closure.coverage()) break;
      BigInt S = t.log2_prefix(m);
      // (S - S_prev)/(m - m_prev) > log2 closure(m), cross-multiplied
      BigInt rhs_log = closure.value_at(m).exponent();
      if (S - S_prev > rhs_log * (m - m_prev)) {
        found = m;
        break;
      }
    }
    if (!found)
      throw Error("window search exhausted the coverage at block " +
                  std::to_string(n) +
                  " (blocking constraint: windowed GM never beats closure "
                  "member " + std::to_string(n) + ")");

    Thm13Block blk;
    blk.m = *found;
    blk.p = blk.m - m_prev;
    BigInt S = t.log2_prefix(blk.m);
    blk.wbar_log2 = BigRat(S - S_prev, blk.p);
    blk.wbar_log2.canonicalize();
    mpz_fdiv_q(blk.wbar_floor.get_mpz_t(), BigInt(S - S_prev).get_mpz_t(),
               blk.p.get_mpz_t());
    b.blocks.push_back(blk);
    b.ratio_p_over_m.push_back(blk.p.get_d() / blk.m.get_d());
    m_prev = blk.m;
    S_prev = S;
  }

  // --- floor-log separation certifies wbar_n - wbar_{n+1} >= 2^(floor_n - 1) ---
  for (long n = 1; n < singles; ++n) {
    const Thm13Block& cur = b.block(n);
    const Thm13Block& next = b.block(n + 1);
    if (!(next.wbar_floor <= cur.wbar_floor - 2))
      throw Error("floor-log separation failed between blocks " +
                  std::to_string(n) + " and " + std::to_string(n + 1) +
                  "; window re-blocking would be required");
  }
  for (long n = 1; n < singles; ++n)
    b.blocks[static_cast<size_t>(n - 1)].gap_bound =
        Dyadic::pow2(BigInt(b.block(n).wbar_floor - 1));

  // --- sigma_bar and eps ---
  for (long n = 1; n <= singles - 1; ++n) {
    Thm13Block& blk = b.blocks[static_cast<size_t>(n - 1)];
    Dyadic envelope = b.J.generators[0].value_at(blk.m);
    Dyadic sb = std::min(blk.gap_bound, envelope);
    if (n > 1) sb = std::min(sb, b.block(n - 1).sigma_bar);
    blk.sigma_bar = sb.half();
  }
  for (long i = 1; i <= pairs; ++i) {
    Dyadic d1 = b.block(2 * i - 1).sigma_bar - b.block(2 * i).sigma_bar;
    Dyadic d2 = b.block(2 * i).sigma_bar - b.block(2 * i + 1).sigma_bar;
    Dyadic eps = std::min(d1, d2).half();
    b.blocks[static_cast<size_t>(2 * i - 2)].eps = eps;
    b.blocks[static_cast<size_t>(2 * i - 1)].eps = eps;
  }

  // --- exact bundle invariants ---
  for (long n = 1; n + 1 <= singles - 1; ++n) {
    if (!(b.block(n).sigma_bar > b.block(n + 1).sigma_bar))
      throw Error("sigma_bar not strictly decreasing");
  }
  for (long i = 1; i <= pairs; ++i) {
    const Dyadic& eps = b.block(2 * i - 1).eps;
    if (!(eps.sign() > 0)) throw Error("eps must be positive");
    for (long n : {2 * i - 1, 2 * i}) {
      if (!(b.block(n).sigma_bar - eps > b.block(n + 1).sigma_bar))
        throw Error("sigma_bar_n - eps_n > sigma_bar_{n+1} failed");
    }
    if (!(eps <= b.block(2 * i - 1).sigma_bar))
      throw Error("alternating eps sum exceeds sigma_bar");
  }
  // lambda' moduli decrease across the four ranges of each pair and into
  // the next pair; cross-multiplied exact comparisons
  for (long i = 1; i <= pairs; ++i) {
    const Thm13Block& odd = b.block(2 * i - 1);
    const Thm13Block& even = b.block(2 * i);
    // sigma_odd > sigma_odd - eps/p  is eps > 0
    // sigma_odd - eps/p > sigma_even:  (sigma_odd - sigma_even) p > eps
    if (!((odd.sigma_bar - even.sigma_bar).times_big(odd.p) > odd.eps))
      throw Error("lambda' ordering failed at range 2/3");
    // sigma_even - eps/p > sigma_{2i+1}
    if (!((even.sigma_bar - b.block(2 * i + 1).sigma_bar).times_big(even.p) >
          even.eps))
      throw Error("lambda' ordering failed at range 4/next");
  }
  // mu, nu decreasing (same comparisons shifted)
  for (long i = 1; i <= pairs; ++i) {
    const Thm13Block& odd = b.block(2 * i - 1);
    const Thm13Block& even = b.block(2 * i);
    if (!((odd.sigma_bar - even.sigma_bar).times_big(even.p) + even.eps >
          Dyadic(0)))
      throw Error("mu not decreasing");
    if (!((even.sigma_bar - b.block(2 * i + 1).sigma_bar).times_big(even.p) >
          even.eps))
      throw Error("mu not decreasing into the next pair");
  }
  // eta' telescopes to zero at every pair end:
  // eps_odd - (p - p) sigma - p (eps_even / p) = eps_odd - eps_even = 0
  for (long i = 1; i <= pairs; ++i) {
    if (!(b.block(2 * i - 1).eps == b.block(2 * i).eps))
      throw Error("pairwise eps mismatch");
  }
  return b;
}

Thm13Report check_thm13_estimates(const Thm13Bundle& b, long max_power) {
  Thm13Report rep;
  rep.invariants_ok = true;  // build_thm13 throws otherwise; re-stated here

  std::vector<EtaRange> ranges = eta_ranges(b);

  // --- four crude bounds, endpoints of every range ---
  rep.crude_ok = true;
  for (const EtaRange& r : ranges) {
    for (const BigInt& k : {BigInt(1), r.p}) {
      BigInt index = r.start + k;
      // |eta'(k)| / index <= bound   <=>   |eta'(k)| p <= bound index p
      Dyadic lhs = r.abs_value_times_p(k);
      Dyadic rhs = r.bound.times_big(index * r.p);
      bool ok = lhs <= rhs;
      rep.crude_rows.push_back(CrudeBoundRow{r.pair, r.quarter, index, ok});
      if (!ok) rep.crude_ok = false;
    }
  }

  // --- lambda' witness: |eta'(k)| / index <= 2 sigma_(ceil(index/2))
  //     and sigma <= the generator enveloping it, so (m=2, c=2) works ---
  rep.lambda_prime_witness = exactseq::DominanceWitness{1, BigInt(2), Dyadic(2)};
  rep.lambda_prime_ok = true;
  for (const EtaRange& r : ranges) {
    for (const BigInt& k : {BigInt(1), r.p}) {
      BigInt index = r.start + k;
      Dyadic lhs = r.abs_value_times_p(k);
      Dyadic rhs = r.sigma_half.times_big(index * r.p).times_pow2(BigInt(1));
      if (!(lhs <= rhs)) rep.lambda_prime_ok = false;
    }
  }
  // sigma sits below the generator: sigma_bar_n <= gen(m_n)
  for (long n = 1; n <= 2 * b.pairs + 1; ++n) {
    if (!(b.block(n).sigma_bar <= b.J.generators[0].value_at(b.block(n).m)))
      rep.lambda_prime_ok = false;
  }

  // --- the dominating subsequence of (eta - eta')/k ---
  for (long n = 1; n <= b.pairs; ++n) {
    const Thm13Block& odd = b.block(2 * n - 1);
    const BigInt& m_prev = (2 * n - 2 >= 1) ? b.block(2 * n - 2).m : BigInt(0);
    BigInt index = 2 * m_prev + odd.p;
    DominatingSample s;
    s.pair = n;
    s.index = index;
    // eta(index)/index >= p wbar/(2m + p) >= wbar/3 certified by p >= m
    s.at_least_third_of_wbar = odd.p >= m_prev;
    s.value_floor = "2^(" + BigRat(odd.wbar_log2 - 2).get_str() + ")";
    rep.dominating_w.push_back(s);
  }

  // --- bounded refutation of the lambda criterion ---
  // Refuting the diagonal witness (2^a, 2^a) refutes every (m, c) with
  // m, c <= 2^a.  The certified chain: at rank r = floor(p_{2n-1}/2) the
  // rearranged sequence is >= (p/2) wbar / (2m + p) >= 2^Elb with
  // Elb = floor(wbar) + bits(p) - 2 - bits(2m + p); the witness would need
  // it <= 2^a u_j at j = floor(r / 2^a).
  rep.lambda_bound_power = max_power;
  rep.lambda_not_found_within_bounds = true;
  for (long a = 0; a <= max_power; ++a) {
    LambdaRefutation lr;
    lr.power = a;
    lr.refuted = false;
    for (long n = 1; n <= b.pairs && !lr.refuted; ++n) {
      const Thm13Block& odd = b.block(2 * n - 1);
      const BigInt& m_prev = (2 * n - 2 >= 1) ? b.block(2 * n - 2).m : BigInt(0);
      if (!(odd.p >= m_prev)) continue;  // the 1/3 certificate needs p >= m
      BigInt r = odd.p / 2;
      BigInt j = r >> static_cast<unsigned long>(a);
      if (j < 1 || j > b.J.generators[0].coverage()) continue;
      BigInt Elb = odd.wbar_floor + BigInt(static_cast<long>(bit_length(odd.p))) -
                   2 -
                   BigInt(static_cast<long>(bit_length(BigInt(2 * m_prev + odd.p))));
      BigInt rhs_log =
          BigInt(a) + b.J.generators[0].value_at(j).exponent();
      if (Elb > rhs_log) {
        lr.refuted = true;
        lr.pair = n;
        lr.rank = r;
        lr.gen_index = j;
      }
    }
    if (!lr.refuted) rep.lambda_not_found_within_bounds = false;
    rep.lambda_refutations.push_back(lr);
  }
  return rep;
}

Thm13Matrices assemble_thm13_matrices(const Thm13Bundle& b, long N) {
  const BigInt m1 = b.block(1).m;
  if (BigInt(N) > b.block(2).m)
    throw Error("truncation beyond the second window is not materialized");
  if (b.block(2).wbar_floor < -900)
    throw Error("window values underflow double precision; truncate earlier");

  Thm13Matrices out;
  out.w.resize(static_cast<size_t>(N));
  out.mu.resize(static_cast<size_t>(N));
  out.nu.resize(static_cast<size_t>(N));
  std::vector<double> s(static_cast<size_t>(N));
  for (long k = 1; k <= N; ++k) {
    long n = BigInt(k) <= m1 ? 1 : 2;
    const Thm13Block& blk = b.block(n);
    double w = std::exp2(blk.wbar_log2.get_d());
    double sb = blk.sigma_bar.to_double();
    double ep = blk.eps.to_double() / blk.p.get_d();
    out.w[static_cast<size_t>(k - 1)] = w;
    out.mu[static_cast<size_t>(k - 1)] = (n % 2 == 1) ? sb : sb - ep;
    out.nu[static_cast<size_t>(k - 1)] = (n % 2 == 1) ? sb - ep : sb;
    s[static_cast<size_t>(k - 1)] = b.t.value_at(BigInt(k)).to_double();
  }

  std::vector<hornmat::Complex> wc(out.w.begin(), out.w.end());
  out.A = hornmat::horn_construct(hornmat::EigenData{wc}, s);
  out.D1 = Matrix::Zero(N, N);
  out.D2 = Matrix::Zero(N, N);
  for (long k = 0; k < N; ++k) {
    out.D1(k, k) = out.mu[static_cast<size_t>(k)];
    out.D2(k, k) = out.nu[static_cast<size_t>(k)];
  }
  out.T = Matrix::Zero(2 * N, 2 * N);
  out.T.topLeftCorner(N, N) = out.A + out.D1;
  out.T.bottomRightCorner(N, N) = -(out.A + out.D2);

  // fully represented head of the lambda' sequence: both pair-1 half ranges
  if (BigInt(N) >= m1) {
    long p1 = b.block(1).p.get_si();
    double sb = b.block(1).sigma_bar.to_double();
    double ep = b.block(1).eps.to_double() / b.block(1).p.get_d();
    for (long i = 0; i < p1; ++i) out.lambda_prime_prefix.emplace_back(sb, 0.0);
    for (long i = 0; i < p1; ++i)
      out.lambda_prime_prefix.emplace_back(-sb + ep, 0.0);
  }
  return out;
}

}  // namespace opideal::gallery
