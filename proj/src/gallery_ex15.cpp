#include <algorithm>

#include "opideal/gallery.hpp"

namespace opideal::gallery {

namespace {

BigInt pow2i(long e) { return BigInt(1) << static_cast<unsigned long>(e); }

// ceil(num k / den)
BigInt ceil_index(const Rational& alpha, const BigInt& k) {
  BigInt r;
  BigInt nk = alpha.num * k;
  mpz_cdiv_q(r.get_mpz_t(), nk.get_mpz_t(), alpha.den.get_mpz_t());
  return r;
}

// run starts and ends of s clipped to [1, K], plus 1 and K
void collect_boundaries(const BlockSequence& s, const BigInt& K,
                        std::vector<BigInt>& out) {
  for (size_t r = 0; r < s.run_count(); ++r) {
    BigInt a = s.run_start(r);
    if (a > K) break;
    out.push_back(a);
    BigInt e = s.run_end(r);
    out.push_back(std::min(e, K));
  }
}

}  // namespace

ScheduleCheck check_schedule(const Schedule& s) {
  ScheduleCheck res;
  if (s.p.empty() || s.p[0] != 0) {
    res.first_failure = 0;
    return res;
  }
  for (size_t n = 0; n + 1 < s.p.size(); ++n) {
    // p_{n+1} > p_n + 2n 2^(2n); the n = 0 term only forces p_1 > 0
    long bound = s.p[n] + (n == 0 ? 0 : 2 * static_cast<long>(n) * (1l << (2 * n)));
    if (s.p[n + 1] <= bound) {
      res.first_failure = static_cast<long>(n);
      return res;
    }
  }
  res.ok = true;
  return res;
}

Ex15Bundle build_ex15(const Schedule& s, SchedulePolicy policy) {
  if (s.p.size() < 3) throw Error("schedule needs at least p_0, p_1, p_2");
  ScheduleCheck chk = check_schedule(s);
  if (!chk.ok && policy == SchedulePolicy::strict)
    throw ScheduleViolation("schedule violates p_{n+1} > p_n + 2n 2^(2n) at n=" +
                                std::to_string(chk.first_failure),
                            chk.first_failure);

  Ex15Bundle b;
  b.schedule = s;
  b.conforming = chk.ok;
  b.first_violation = chk.first_failure;

  const size_t P = s.blocks();
  std::vector<Run> ur;
  for (size_t n = 1; n <= P; ++n)
    ur.push_back(Run{Dyadic::pow2(BigInt(-s.p[n])),
                     pow2i(s.p[n]) - pow2i(s.p[n - 1])});
  b.u = BlockSequence::from_runs(std::move(ur));

  std::vector<Run> vr;
  for (size_t n = 1; n + 1 <= P; ++n)
    vr.push_back(Run{Dyadic::pow2(BigInt(static_cast<long>(n) - s.p[n + 1])),
                     pow2i(s.q(n)) - pow2i(s.q(n - 1))});
  b.v = BlockSequence::from_runs(std::move(vr));

  b.coverage = std::min(b.u.coverage(), b.v.coverage());
  return b;
}

ProductReport check_product_inequality(const Ex15Bundle& b, const BigInt& K) {
  if (K < 1 || K > b.coverage)
    throw IndexOutOfCoverage("product range outside coverage");
  ProductReport rep;
  rep.ok = true;

  std::vector<BigInt> pts;
  pts.push_back(K);
  collect_boundaries(b.u, K, pts);
  collect_boundaries(b.v, K, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  BigInt margin(0);  // log2 prod_{j<=k} v_j/u_j, maintained at piece ends
  BigInt prev(0);    // last index accounted for
  for (const BigInt& k : pts) {
    // slope is constant on (prev, k]: values change only at collected points
    BigInt d = b.v.value_at(k).exponent() - b.u.value_at(k).exponent();
    BigInt lo_margin = margin + d;  // margin at prev+1
    BigInt len = k - prev;
    BigInt hi_margin = margin + d * len;
    if (rep.ok) {
      // the in-piece maximum sits at an endpoint
      if (lo_margin > 0) {
        rep.ok = false;
        rep.first_violation = prev + 1;
      } else if (hi_margin > 0) {
        // slope must be positive; first k with margin + (k - prev) d > 0
        BigInt need = (-margin) / d + 1;  // floor division, d > 0
        rep.ok = false;
        rep.first_violation = prev + need;
      }
    }
    margin = hi_margin;
    prev = k;
    rep.boundary_margins.push_back(ProductMargin{k, margin});
  }
  return rep;
}

namespace {

Dyadic theta_objective(const Ex15Bundle& b, const Dyadic& sk, const BigInt& j) {
  Dyadic jv = b.v.value_at(j).times_big(j);
  Dyadic gap = sk - b.sigma(j);
  if (gap.sign() < 0) gap = -gap;
  return jv + gap;
}

}  // namespace

ThetaResult theta_exact(const Ex15Bundle& b, const BigInt& k) {
  if (k < 1 || k > b.coverage)
    throw IndexOutOfCoverage("theta index outside coverage");
  Dyadic sk = b.sigma(k);

  std::vector<BigInt> cand;
  cand.push_back(k);
  collect_boundaries(b.u, b.coverage, cand);
  collect_boundaries(b.v, b.coverage, cand);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  ThetaResult res;
  bool first = true;
  for (const BigInt& j : cand) {
    Dyadic obj = theta_objective(b, sk, j);
    if (first || obj < res.value) {
      res.value = obj;
      res.argmin = j;
      first = false;
    }
  }
  res.tail_lower = b.sigma(b.coverage) - sk;
  res.tail_certified = res.tail_lower >= res.value;
  return res;
}

ThetaResult theta_brute_force(const Ex15Bundle& b, const BigInt& k) {
  if (b.coverage > 1000000)
    throw Error("brute force needs small coverage");
  Dyadic sk = b.sigma(k);
  ThetaResult res;
  bool first = true;
  for (BigInt j(1); j <= b.coverage; j += 1) {
    Dyadic obj = theta_objective(b, sk, j);
    if (first || obj < res.value) {
      res.value = obj;
      res.argmin = j;
      first = false;
    }
  }
  res.tail_lower = b.sigma(b.coverage) - sk;
  res.tail_certified = res.tail_lower >= res.value;
  return res;
}

RefuteReport build_w_and_refute(const Ex15Bundle& b,
                                const std::vector<Rational>& alphas,
                                const std::vector<Dyadic>& cs) {
  RefuteReport rep;
  const Schedule& s = b.schedule;
  const long P = static_cast<long>(s.blocks());

  // --- the theta floor table at k = 2^(p_n + n) ---
  for (long n = 1; n + 1 <= P; ++n) {
    if (s.p[static_cast<size_t>(n)] + n >= 4096) break;  // demo guard
    BigInt k = pow2i(s.p[static_cast<size_t>(n)] + n);
    if (k > b.coverage) break;
    ThetaResult th = theta_exact(b, k);
    ThetaBoundRow row;
    row.n = n;
    row.k = k;
    row.theta_value = th.value;
    row.theta_lower = th.certified_lower();
    row.tail_certified = th.tail_certified;
    row.claimed_floor = Dyadic::pow2(
        BigInt(-s.p[static_cast<size_t>(n + 1)] + s.p[static_cast<size_t>(n)] +
               2 * n - 1));
    row.floor_holds = row.theta_lower >= row.claimed_floor;
    // theta_k / k >= 2^(n-1) u_k  <=>  theta_k >= 2^(n-1) k u_k
    Dyadic rhs = b.u.value_at(k).times_big(k).times_pow2(BigInt(n - 1));
    row.ratio_holds = row.theta_lower >= rhs;
    rep.rows.push_back(row);
  }

  // --- grid refutation of  theta_k / k <= c u_(ceil(alpha k))  ---
  for (const Rational& alpha : alphas) {
    for (const Dyadic& c : cs) {
      RefuteEntry e;
      e.alpha = alpha;
      e.c = c;
      for (const ThetaBoundRow& row : rep.rows) {
        BigInt idx = ceil_index(alpha, row.k);
        if (idx < 1 || idx > b.u.coverage()) continue;
        Dyadic rhs = (b.u.value_at(idx) * c).times_big(row.k);
        if (row.theta_lower > rhs) {
          e.refuted = true;
          e.witness_block = row.n;
          e.witness_k = row.k;
          e.detail = "theta lower bound " + row.theta_lower.to_string() +
                     " > c k u = " + rhs.to_string();
          break;
        }
      }
      if (!e.refuted)
        e.detail = "not refuted within the materialized blocks";
      rep.entries.push_back(e);
    }
  }

  // --- |w_k| <= u_k and the theta envelope at sampled indices ---
  std::vector<BigInt> samples;
  samples.push_back(BigInt(2));
  samples.push_back(BigInt(3));
  collect_boundaries(b.u, b.coverage, samples);
  collect_boundaries(b.v, b.coverage, samples);
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  rep.w_bounds_ok = true;
  rep.theta_envelope_ok = true;
  for (const BigInt& k : samples) {
    if (k < 2) continue;
    ThetaResult now = theta_exact(b, k);
    ThetaResult before = theta_exact(b, k - 1);
    // the envelope 0 <= theta_k <= k v_k holds for the covered minimum
    if (now.value.sign() < 0 ||
        now.value > b.v.value_at(k).times_big(k))
      rep.theta_envelope_ok = false;
    // |theta_k - theta_{k-1}| <= u_k needs both values to be the true
    // infimum, so only tail-certified samples are asserted
    if (!now.tail_certified || !before.tail_certified) continue;
    Dyadic w = now.value - before.value;
    if (w.sign() < 0) w = -w;
    if (w > b.u.value_at(k)) rep.w_bounds_ok = false;
  }

  // --- rearrangement bound over a materialized window ---
  BigInt window = std::min(b.coverage, BigInt(4096));
  long W = window.get_si();
  std::vector<Dyadic> w(static_cast<size_t>(W));
  {
    Dyadic prev;
    for (long j = 1; j <= W; ++j) {
      ThetaResult th = theta_exact(b, BigInt(j));
      w[static_cast<size_t>(j - 1)] = th.value - prev;
      prev = th.value;
    }
  }
  std::vector<Dyadic> moduli = w;
  for (auto& x : moduli)
    if (x.sign() < 0) x = -x;
  std::sort(moduli.begin(), moduli.end(),
            [](const Dyadic& a, const Dyadic& b2) { return b2 < a; });
  rep.rearrangement_ok = true;
  Dyadic uW = b.u.value_at(window);
  std::vector<long> ks;
  for (long k = 2; k <= std::min(256l, W); k *= 2) ks.push_back(k);
  for (long k : ks) {
    Dyadic sum_l, sum_w;
    for (long j = 0; j < k; ++j) {
      sum_l += moduli[static_cast<size_t>(j)];
      sum_w += w[static_cast<size_t>(j)];
    }
    Dyadic diff = sum_l - sum_w;
    if (diff.sign() < 0) diff = -diff;
    // window top-k differs from the true top-k by at most k u_W
    Dyadic bound = b.u.value_at(BigInt(k)).times_big(BigInt(2 * k));
    if (diff + uW.times_big(BigInt(k)) > bound) rep.rearrangement_ok = false;
  }
  rep.rearrangement_note =
      "lambda taken from the leading window of length " + window.get_str() +
      "; the window tail contributes at most k * u_window";
  return rep;
}

Ex15Matrices assemble_ex15_matrices(const Ex15Bundle& b, long N) {
  // exponent magnitude guard: values must be representable as doubles
  if (b.u.run(b.u.run_count() - 1).value.exponent() < -900)
    throw Error("schedule too steep for double-precision matrices; "
                "use a milder schedule");
  long K = 0;
  while ((1l << (K + 1)) - 1 <= N) ++K;
  N = (1l << K) - 1;  // full dyadic blocks
  if (N < 3 || BigInt(N) > b.coverage)
    throw Error("truncation too small or beyond coverage");

  Ex15Matrices out;
  out.w.resize(static_cast<size_t>(N));
  Dyadic prev;
  for (long j = 1; j <= N; ++j) {
    ThetaResult th = theta_exact(b, BigInt(j));
    out.w[static_cast<size_t>(j - 1)] = (th.value - prev).to_double();
    prev = th.value;
  }
  auto av = commlab::dyadic_averages(out.w);
  Matrix B = Matrix::Zero(N, N);
  for (long n = 1; n <= N; ++n) B(n - 1, n - 1) = av.xi[static_cast<size_t>(n - 1)];
  Matrix A = commlab::commutator_realize(B);
  // force the diagonal to w: the block-mean correction is itself a
  // commutator-subspace diagonal, collapsed here at finite scale
  for (long n = 1; n <= N; ++n) A(n - 1, n - 1) = out.w[static_cast<size_t>(n - 1)];
  out.A = A;
  out.W = Matrix::Zero(N, N);
  for (long n = 1; n <= N; ++n) out.W(n - 1, n - 1) = out.w[static_cast<size_t>(n - 1)];
  out.T = out.A - out.W;
  return out;
}

}  // namespace opideal::gallery
