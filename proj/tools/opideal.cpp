// Command line experiment runner: every verification in the library is
// exposed as a subcommand that emits a machine-readable report (JSON) or an
// aligned text table.  Reports are deterministic: fixed seeds, ordered
// keys, big integers as decimal strings, no clocks.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opideal/commlab.hpp"
#include "opideal/gallery.hpp"
#include "opideal/report.hpp"
#include "opideal/rng.hpp"
#include "opideal/serialize.hpp"
#include "opideal/specdecomp.hpp"

using namespace opideal;
using report::Json;
using report::Report;

namespace {

struct RunConfig {
  std::vector<long> p;
  std::vector<std::string> seq;
  std::string k = "";
  long n = 8;
  std::uint64_t seed = 1;
  std::string bounds = "2^20,20,2^20";
  double tol = 1e-9;
  std::string out = "";
  std::string format = "json";
  std::string check = "";
  std::string config_path = "";
};

BigInt parse_bigint(const std::string& s) {
  auto caret = s.find("2^");
  if (caret == 0) return BigInt(1) << std::stoul(s.substr(2));
  return BigInt(s);
}

exactseq::SearchBounds parse_bounds(const std::string& s) {
  exactseq::SearchBounds b;
  std::stringstream ss(s);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  if (parts.size() != 3) throw Error("bounds must be M,C,K");
  b.max_dilation = parse_bigint(parts[0]);
  b.max_scale_exp = std::stol(parts[1]);
  b.range = parse_bigint(parts[2]);
  return b;
}

BlockSequence parse_seq(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "const") {
    auto c2 = rest.find(':');
    Dyadic v = serialize::dyadic_from_string(rest.substr(0, c2));
    BigInt len = c2 == std::string::npos ? BigInt(1000) : parse_bigint(rest.substr(c2 + 1));
    return BlockSequence::constant(v, len);
  }
  if (kind == "halving") {
    long len = std::stol(rest.empty() ? "64" : rest);
    std::vector<Run> runs;
    for (long i = 1; i <= len; ++i)
      runs.push_back(Run{Dyadic::pow2(BigInt(-i)), BigInt(1)});
    return BlockSequence::from_runs(runs);
  }
  if (kind == "double-exp")
    return gallery::double_exp_generator(std::stoi(rest.empty() ? "12" : rest));
  if (kind == "file") {
    std::ifstream in(rest);
    if (!in) throw Error("cannot open " + rest);
    Json j = Json::parse(in);
    return serialize::block_sequence_from_json(j);
  }
  if (kind == "json")
    return serialize::block_sequence_from_json(Json::parse(rest));
  throw Error("unknown sequence spec '" + spec + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(part);
  return out;
}

bool has_check(const RunConfig& cfg, const std::string& name,
               const std::string& defaults) {
  std::string src = cfg.check.empty() ? defaults : cfg.check;
  for (const std::string& c : split_list(src))
    if (c == name) return true;
  return false;
}

std::string log2_string(const BigRat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// ----------------------------- subcommands -------------------------------

Report run_gm(const RunConfig& cfg) {
  Report rep;
  rep.tool = "gm";
  BlockSequence s = parse_seq(cfg.seq.at(0));
  BigInt K = cfg.k.empty() ? s.coverage() : parse_bigint(cfg.k);
  K = std::min(K, s.coverage());
  rep.config = Json{{"seq", cfg.seq.at(0)}, {"k", K.get_str()}};

  Json rows = Json::array();
  bool decreasing = true, bracketed = true;
  std::optional<BigRat> prev;
  for (const BigInt& b : s.boundaries_upto(K)) {
    exactseq::GmValue g = exactseq::geometric_mean_transform(s, b);
    Json row{{"k", b.get_str()}};
    if (g.exact) {
      row["log2"] = log2_string(g.log2_exact);
      if (prev && g.log2_exact > *prev) decreasing = false;
      if (s.all_pow2()) {
        BigRat lo(s.value_at(b).exponent()), hi(s.value_at(BigInt(1)).exponent());
        if (g.log2_exact < lo || g.log2_exact > hi) bracketed = false;
      }
      prev = g.log2_exact;
    } else {
      row["log2_lo"] = g.log2_range.lo;
      row["log2_hi"] = g.log2_range.hi;
      row["width"] = g.width();
    }
    rows.push_back(row);
  }
  rep.data["gm"] = rows;
  rep.add("gm-computed", true, std::to_string(rows.size()) + " boundary values");
  rep.add("gm-decreasing", decreasing, "monotone at run boundaries");
  rep.add("gm-bracketed", bracketed, "between u_k and u_1");
  return rep;
}

Report run_ideal_test(const RunConfig& cfg) {
  Report rep;
  rep.tool = "ideal-test";
  if (cfg.seq.size() < 2)
    throw Error("ideal-test needs --seq <t> and at least one generator --seq");
  BlockSequence t = parse_seq(cfg.seq[0]);
  exactseq::IdealSpec J;
  for (size_t i = 1; i < cfg.seq.size(); ++i)
    J.generators.push_back(parse_seq(cfg.seq[i]));
  J.presentation = J.generators.size() == 1
                       ? exactseq::IdealSpec::Presentation::principal
                       : exactseq::IdealSpec::Presentation::countably_generated;
  exactseq::SearchBounds bounds = parse_bounds(cfg.bounds);
  rep.config = Json{{"seq", cfg.seq}, {"bounds", cfg.bounds}};

  exactseq::MembershipOutcome out = exactseq::membership_search(t, J, bounds);
  if (out.found()) {
    rep.add("membership-witness", true, out.witness->to_string());
    rep.data["witness"] =
        Json{{"generator", static_cast<long>(out.witness->generator_index)},
             {"dilation", out.witness->dilation.get_str()},
             {"scale", out.witness->scale.to_string()}};
  } else {
    rep.add("membership-witness", false,
            "not found within bounds (" + cfg.bounds + ")");
    Json misses = Json::array();
    for (const auto& m : out.misses)
      misses.push_back(Json{{"generator", static_cast<long>(m.generator_index)},
                            {"dilation", m.dilation.get_str()},
                            {"scale", m.scale.to_string()},
                            {"fail_index", m.fail_index.get_str()}});
    rep.data["misses"] = misses;
  }
  return rep;
}

Report run_stability(const RunConfig& cfg) {
  Report rep;
  rep.tool = "stability";
  BlockSequence u = parse_seq(cfg.seq.at(0));
  exactseq::SearchBounds bounds = parse_bounds(cfg.bounds);
  rep.config = Json{{"seq", cfg.seq.at(0)}, {"bounds", cfg.bounds}};
  exactseq::StabilityVerdict v = exactseq::stability_probe(u, bounds);
  if (v.stable) {
    rep.add("geometric-stability", true,
            "stable up to bounds, witness " + v.witness->to_string());
  } else {
    rep.add("geometric-stability", false,
            "unstable with certificate: every dilation/scale fails");
    Json cert = Json::array();
    for (const auto& m : v.certificate)
      cert.push_back(Json{{"dilation", m.dilation.get_str()},
                          {"scale", m.scale.to_string()},
                          {"failing_boundary", m.fail_index.get_str()}});
    rep.data["certificate"] = cert;
  }
  rep.data["range_used"] = v.range_used.get_str();
  return rep;
}

Report run_horn(const RunConfig& cfg) {
  Report rep;
  rep.tool = "horn";
  rep.config = Json{{"n", cfg.n}, {"seed", cfg.seed}, {"tol", cfg.tol}};
  hornmat::HornInstance inst =
      hornmat::random_horn_instance(cfg.seed, static_cast<int>(cfg.n));
  auto maj = hornmat::log_majorization_check(inst.eig, inst.s);
  rep.add("log-majorization", maj.ok,
          "min margin " + std::to_string(maj.min_margin));
  hornmat::Matrix A = hornmat::horn_construct(inst.eig, inst.s);
  bool tri = hornmat::is_upper_triangular(A);
  bool diag_exact = true;
  for (long i = 0; i < A.rows(); ++i)
    if (A(i, i) != inst.eig.values[static_cast<size_t>(i)]) diag_exact = false;
  rep.add("upper-triangular", tri, "lower entries structurally zero");
  rep.add("diagonal-exact", diag_exact, "prescribed eigenvalues stored bit for bit");
  auto v = hornmat::svd_verify(A, inst.s, cfg.tol);
  rep.add("svd-margins", v.ok,
          "max violation " + std::to_string(v.max_violation));
  Json sv = Json::array();
  for (double x : v.singular_values) sv.push_back(x);
  rep.data["singular_values"] = sv;
  Json st = Json::array();
  for (double x : inst.s) st.push_back(x);
  rep.data["targets"] = st;
  return rep;
}

Report run_commutator(const RunConfig& cfg) {
  Report rep;
  rep.tool = "commutator";
  rep.config = Json{{"n", cfg.n}, {"seed", cfg.seed}};
  const long N = cfg.n;
  SplitMix64 rng(cfg.seed);
  hornmat::Matrix B = hornmat::Matrix::Zero(N, N);
  for (long i = 0; i < N; ++i)
    for (long j = i; j < N; ++j)
      B(i, j) = hornmat::Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  hornmat::Matrix A = commlab::commutator_realize(B);
  rep.add("upper-triangular", hornmat::is_upper_triangular(A), "structural zeros");

  bool identities = true;
  for (long r = 1; commlab::truncation_safe(r, N); ++r)
    for (long c = r; c <= N; ++c) {
      hornmat::Complex want = B(r - 1, c - 1);
      if (r >= 2 && c >= 2 && r % 2 == c % 2)
        want -= 0.5 * B(r / 2 - 1, c / 2 - 1);
      if (std::abs(A(r - 1, c - 1) - want) > 1e-12) identities = false;
    }
  rep.add("entry-identities", identities,
          "averaging identities on the truncation-safe range, tol 1e-12");

  auto [U1, U2] = commlab::shift_isometries(N);
  hornmat::Matrix C1 = U1.adjoint() * (U1 * B) - (U1 * B) * U1.adjoint();
  hornmat::Matrix C2 = U2.adjoint() * (U2 * B) - (U2 * B) * U2.adjoint();
  double resid = (A - 0.5 * (C1 + C2)).cwiseAbs().maxCoeff();
  rep.add("independent-recomputation", resid <= 1e-13 * B.norm(),
          "max entry residual " + std::to_string(resid));
  rep.add("trace-zero", C1.trace() == hornmat::Complex(0, 0) &&
                            C2.trace() == hornmat::Complex(0, 0),
          "finite commutators have exactly zero trace");
  return rep;
}

Report run_ex15(const RunConfig& cfg) {
  Report rep;
  rep.tool = "ex15";
  std::vector<long> p = cfg.p.empty() ? std::vector<long>{0, 1, 10, 75, 460} : cfg.p;
  gallery::Schedule sched{p};
  rep.config = Json{{"p", p}, {"check", cfg.check.empty() ? "schedule,product,theta,refute" : cfg.check}};

  gallery::Ex15Bundle b = gallery::build_ex15(sched, gallery::SchedulePolicy::relaxed);
  const std::string defaults = "schedule,product,theta,refute";

  if (has_check(cfg, "schedule", defaults)) {
    rep.add("schedule", b.conforming,
            b.conforming ? "p_{n+1} > p_n + 2n 2^(2n) for all n"
                         : "violated at n=" + std::to_string(b.first_violation));
  }
  if (has_check(cfg, "product", defaults)) {
    BigInt K = cfg.k.empty() ? b.coverage : std::min(b.coverage, parse_bigint(cfg.k));
    gallery::ProductReport pr = gallery::check_product_inequality(b, K);
    rep.add("product-inequality", pr.ok,
            pr.ok ? "certified at every index up to " + K.get_str()
                  : "violated at k=" + pr.first_violation.get_str());
    Json margins = Json::array();
    for (const auto& m : pr.boundary_margins)
      margins.push_back(Json{{"k", m.k.get_str()},
                             {"log2_margin", m.log2_margin.get_str()}});
    rep.data["product_margins"] = margins;
  }
  bool want_theta = has_check(cfg, "theta", defaults);
  bool want_refute = has_check(cfg, "refute", defaults);
  if (want_theta || want_refute) {
    std::vector<gallery::Rational> alphas = {{BigInt(1), BigInt(1)},
                                             {BigInt(1), BigInt(2)}};
    std::vector<Dyadic> cs = {Dyadic(1), Dyadic::pow2(BigInt(10))};
    gallery::RefuteReport rr = gallery::build_w_and_refute(b, alphas, cs);
    if (want_theta) {
      Json rows = Json::array();
      bool floors = true;
      for (const auto& row : rr.rows) {
        rows.push_back(Json{{"n", row.n},
                            {"k", row.k.get_str()},
                            {"theta_lower", row.theta_lower.to_string()},
                            {"tail_certified", row.tail_certified},
                            {"claimed_floor", row.claimed_floor.to_string()},
                            {"floor_holds", row.floor_holds},
                            {"ratio_holds", row.ratio_holds}});
        if (!row.floor_holds || !row.ratio_holds) floors = false;
      }
      rep.data["theta_rows"] = rows;
      rep.add("theta-floors", floors,
              floors ? "claimed floors and growth ratios hold"
                     : "a claimed floor or ratio fails; exact values in data");
      rep.add("w-bounds", rr.w_bounds_ok, "|w_k| <= u_k at sampled indices");
      rep.add("theta-envelope", rr.theta_envelope_ok, "0 <= theta_k <= k v_k");
      rep.add("rearrangement", rr.rearrangement_ok, rr.rearrangement_note);
    }
    if (want_refute) {
      Json entries = Json::array();
      bool first_refuted = false;
      for (const auto& e : rr.entries) {
        entries.push_back(Json{{"alpha", e.alpha.to_string()},
                               {"c", e.c.to_string()},
                               {"refuted", e.refuted},
                               {"witness_block", e.witness_block},
                               {"detail", e.detail}});
        if (e.alpha.num == 1 && e.alpha.den == 1 && e.c == Dyadic(1) && e.refuted)
          first_refuted = true;
      }
      rep.data["refutations"] = entries;
      rep.add("refute-alpha1-c1", first_refuted,
              "criterion theta_k/k <= u_k fails already in the first block");
    }
  }
  if (has_check(cfg, "theta-brute", defaults)) {
    bool ok = b.coverage <= 10000;
    long checked = 0;
    if (ok) {
      SplitMix64 rng(cfg.seed);
      for (int i = 0; i < 50; ++i) {
        BigInt k(rng.range(1, b.coverage.get_si()));
        if (!(gallery::theta_exact(b, k).value ==
              gallery::theta_brute_force(b, k).value))
          ok = false;
        ++checked;
      }
    }
    rep.add("theta-brute-force", ok,
            "exact agreement at " + std::to_string(checked) + " sampled k");
  }
  return rep;
}

Report run_thm13(const RunConfig& cfg) {
  Report rep;
  rep.tool = "thm13";
  int pairs = static_cast<int>(cfg.n <= 0 ? 6 : std::min(cfg.n, 7l));
  rep.config = Json{{"pairs", pairs}, {"bounds", cfg.bounds}};

  exactseq::SearchBounds bounds = parse_bounds(cfg.bounds);
  BlockSequence probe_u = gallery::double_exp_generator(26);
  exactseq::SearchBounds probe_bounds = bounds;
  probe_bounds.range = probe_u.coverage();
  exactseq::StabilityVerdict v = exactseq::stability_probe(probe_u, probe_bounds);
  rep.add("generator-unstable", !v.stable,
          "geometric mean escapes every dilation/scale in bounds");

  int singles = 2 * pairs + 2;
  int kmax = singles + 5;
  BlockSequence u = gallery::double_exp_generator(kmax);
  exactseq::IdealSpec J{{u}, exactseq::IdealSpec::Presentation::principal};
  gallery::Thm13Bundle b = gallery::build_thm13(J, u, pairs);
  rep.add("windows-found", true, "all " + std::to_string(singles) + " windows selected");
  Json blocks = Json::array();
  for (long n = 1; n <= singles; ++n) {
    const auto& blk = b.block(n);
    Json row{{"n", n},
             {"m", blk.m.get_str()},
             {"p", blk.p.get_str()},
             {"wbar_log2", log2_string(blk.wbar_log2)},
             {"ratio_p_over_m", b.ratio_p_over_m[static_cast<size_t>(n - 1)]}};
    if (n <= singles - 1) row["sigma_bar"] = blk.sigma_bar.to_string();
    blocks.push_back(row);
  }
  rep.data["blocks"] = blocks;

  gallery::Thm13Report tr = gallery::check_thm13_estimates(b, 8);
  rep.add("bundle-invariants", tr.invariants_ok, "all exact inequalities hold");
  rep.add("crude-bounds", tr.crude_ok,
          std::to_string(tr.crude_rows.size()) + " endpoint checks");
  rep.add("lambda-prime-member", tr.lambda_prime_ok,
          "witness " + tr.lambda_prime_witness.to_string());
  rep.add("lambda-not-found", tr.lambda_not_found_within_bounds,
          "refuted for every (m, c) <= (2^" +
              std::to_string(tr.lambda_bound_power) + ", 2^" +
              std::to_string(tr.lambda_bound_power) + ")");
  Json doms = Json::array();
  for (const auto& d : tr.dominating_w)
    doms.push_back(Json{{"pair", d.pair},
                        {"index", d.index.get_str()},
                        {"floor", d.value_floor},
                        {"at_least_wbar_third", d.at_least_third_of_wbar}});
  rep.data["dominating_w"] = doms;
  return rep;
}

Report run_decompose(const RunConfig& cfg) {
  Report rep;
  rep.tool = "decompose";
  rep.config = Json{{"n", cfg.n}, {"seed", cfg.seed}, {"tol", cfg.tol}};
  specdecomp::DecompInstance inst =
      specdecomp::random_decomp_instance(cfg.seed, static_cast<int>(cfg.n));
  specdecomp::DecompResult r = specdecomp::split(inst.T);
  double scale = std::max(inst.T.norm(), 1e-300);
  rep.add("recombine", r.recombine_residual <= 1e-10,
          "|T-(D+Q)|/|T| = " + std::to_string(r.recombine_residual));
  rep.add("normality", r.normality_residual <= 1e-10,
          "|DD*-D*D|/|D|^2 = " + std::to_string(r.normality_residual));
  auto ev = specdecomp::quasinilpotence_test(r.Q, 1e-8, scale, 1e-4);
  rep.add("nilpotent-power", ev.power_ok,
          "|Q^N| = " + std::to_string(ev.power_norm));
  bool strict = true;
  for (long i = 0; i < r.nilpotent_triangular.rows(); ++i)
    for (long j = 0; j <= i; ++j)
      if (r.nilpotent_triangular(i, j) != hornmat::Complex(0, 0)) strict = false;
  rep.add("strictly-upper-in-basis", strict, "structural zeros");
  double pair_dist = hornmat::multiset_pairing_distance(
      hornmat::eigenvalues_oracle(r.D), r.eigen.values);
  rep.add("eigen-pairing", pair_dist <= 1e-7 * scale,
          "pairing distance " + std::to_string(pair_dist));
  Json eig = Json::array();
  for (const auto& z : r.eigen.values) eig.push_back(Json::array({z.real(), z.imag()}));
  rep.data["eigenvalues"] = eig;
  return rep;
}

Report run_trace_cert(const RunConfig& cfg) {
  Report rep;
  rep.tool = "trace-cert";
  rep.config = Json{{"n", cfg.n}, {"seed", cfg.seed}};
  const long N = std::min(cfg.n, 24l);
  SplitMix64 rng(cfg.seed);
  hornmat::Matrix T = hornmat::Matrix::Zero(N, N);
  for (long i = 0; i < N; ++i) {
    double phi = rng.uniform(0, 2 * M_PI);
    T(i, i) = std::ldexp(1.0, -static_cast<int>(i + 1)) *
              hornmat::Complex(std::cos(phi), std::sin(phi));
    if (i + 1 < N)
      T(i, i + 1) = 0.25 * std::ldexp(1.0, -static_cast<int>(i + 1)) * rng.uniform();
  }
  BlockSequence gen = parse_seq(cfg.seq.empty() ? "halving:128" : cfg.seq[0]);
  exactseq::IdealSpec J{{gen}, exactseq::IdealSpec::Presentation::principal};
  exactseq::SearchBounds bounds = parse_bounds(cfg.bounds);
  bounds.range = std::min(bounds.range, gen.coverage());

  specdecomp::TraceCertificate cert = specdecomp::spectral_trace_reduce(T, J, bounds);
  rep.add("input-membership", cert.input_membership.found(),
          cert.input_membership.found() ? cert.input_membership.witness->to_string()
                                        : "not found");
  rep.add("weyl", cert.weyl_ok, "|lambda_n| <= (s_1...s_n)^(1/n)");
  rep.add("stability-probe", cert.stability.stable,
          cert.stability.stable ? "witness " + cert.stability.witness->to_string()
                                : "unstable within bounds");
  rep.add("d-membership", cert.d_membership.found(),
          cert.d_membership.found() ? cert.d_membership.witness->to_string()
                                    : "not found");
  rep.add("q-criterion", cert.q_criterion_trivial,
          "nilpotent remainder, Cesaro means vanish");
  rep.data["statement"] = cert.statement;
  Json eig = Json::array();
  for (const auto& z : cert.decomposition.eigen.values)
    eig.push_back(Json::array({z.real(), z.imag()}));
  rep.data["eigenvalues"] = eig;
  return rep;
}

void apply_config_file(RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw Error("cannot open config " + cfg.config_path);
  Json j = Json::parse(in);
  if (j.contains("p")) cfg.p = j["p"].get<std::vector<long>>();
  if (j.contains("seq")) cfg.seq = j["seq"].get<std::vector<std::string>>();
  if (j.contains("k")) cfg.k = j["k"].is_string() ? j["k"].get<std::string>() : std::to_string(j["k"].get<long>());
  if (j.contains("n")) cfg.n = j["n"].get<long>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("bounds")) cfg.bounds = j["bounds"].get<std::string>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("check")) cfg.check = j["check"].get<std::string>();
}

int emit(const Report& rep, const RunConfig& cfg) {
  std::string body = cfg.format == "table" ? rep.render_table()
                                           : rep.to_json().dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(cfg.out, std::ios::binary | std::ios::trunc);
    out << body;
  }
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-ideal verification toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string sub;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--p", cfg.p, "exponent schedule p_0,p_1,...")->delimiter(',');
    c->add_option("--seq", cfg.seq, "sequence spec (const:v:len | halving:n | double-exp:k | file:path | json:...)");
    c->add_option("--k", cfg.k, "index bound (decimal or 2^e)");
    c->add_option("--n", cfg.n, "dimension / block count");
    c->add_option("--seed", cfg.seed, "random seed");
    c->add_option("--bounds", cfg.bounds, "search bounds M,C,K");
    c->add_option("--tol", cfg.tol, "tolerance");
    c->add_option("--out", cfg.out, "output path (default stdout)");
    c->add_option("--format", cfg.format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    c->add_option("--check", cfg.check, "comma list of checks to run");
    c->add_option("--config", cfg.config_path, "JSON config overriding flags");
    c->callback([&, c]() { sub = c->get_name(); });
  };
  for (const char* name : {"gm", "ideal-test", "stability", "horn",
                           "commutator", "thm13", "ex15", "decompose",
                           "trace-cert"})
    add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    apply_config_file(cfg);
    Report rep;
    if (sub == "gm") rep = run_gm(cfg);
    else if (sub == "ideal-test") rep = run_ideal_test(cfg);
    else if (sub == "stability") rep = run_stability(cfg);
    else if (sub == "horn") rep = run_horn(cfg);
    else if (sub == "commutator") rep = run_commutator(cfg);
    else if (sub == "thm13") rep = run_thm13(cfg);
    else if (sub == "ex15") rep = run_ex15(cfg);
    else if (sub == "decompose") rep = run_decompose(cfg);
    else if (sub == "trace-cert") rep = run_trace_cert(cfg);
    else throw Error("unknown subcommand");
    return emit(rep, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
