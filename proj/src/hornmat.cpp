#include "opideal/hornmat.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace opideal::hornmat {

namespace {

constexpr double kShrink = 1e-12;     // pull targets off the boundary
constexpr double kSplitTol = 1e-11;   // prefix slack treated as tight

bool mod_less(const Complex& a, const Complex& b) {
  double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  double aa = std::arg(a), ab = std::arg(b);
  return aa < ab;
}

}  // namespace

EigenData EigenData::ordered(std::vector<Complex> vals) {
  std::stable_sort(vals.begin(), vals.end(),
                   [](const Complex& a, const Complex& b) { return mod_less(b, a); });
  return EigenData{std::move(vals)};
}

bool EigenData::is_ordered() const {
  for (size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) > std::abs(values[i - 1])) return false;
  return true;
}

MajorizationResult log_majorization_check(const EigenData& eig,
                                          const std::vector<double>& s,
                                          double tol) {
  const size_t n = s.size();
  if (eig.values.size() != n) throw Error("length mismatch");
  MajorizationResult res;
  res.min_margin = std::numeric_limits<double>::infinity();
  long double sl = 0, ll = 0;
  bool s_zero = false;
  for (size_t k = 0; k < n; ++k) {
    double lam = std::abs(eig.values[k]);
    if (s[k] <= 0.0) s_zero = true;
    if (s_zero) {
      // zero product on the right: the left product must vanish too
      if (lam > 0.0) {
        res.ok = false;
        res.first_failure = static_cast<long>(k + 1);
        res.min_margin = -std::numeric_limits<double>::infinity();
        return res;
      }
      continue;
    }
    sl += std::log(static_cast<long double>(s[k]));
    if (lam == 0.0) continue;  // left product is zero from here on
    ll += std::log(static_cast<long double>(lam));
    double margin = static_cast<double>(sl - ll);
    res.min_margin = std::min(res.min_margin, margin);
    if (margin < -tol * static_cast<double>(k + 1)) {
      res.ok = false;
      res.first_failure = static_cast<long>(k + 1);
      return res;
    }
  }
  res.ok = true;
  return res;
}

namespace {

// Arms of the arrowhead [[diag(d), u],[u*, c]] whose spectrum is mu.
// |u_i|^2 = -prod_j(mu_j - d_i) / prod_{l!=i}(d_l - d_i); computed in the
// log domain to dodge under/overflow, negatives from roundoff clamped to 0.
// d (size m) and mu (size m+1) are descending and weakly interlacing.
std::vector<double> arrowhead_arms(const std::vector<double>& d,
                                   const std::vector<double>& mu) {
  const size_t m = d.size();
  std::vector<double> arm(m, 0.0);
  double scale = mu.empty() ? 1.0 : std::max(mu[0], 1e-300);
  for (size_t i = 0; i < m; ++i) {
    long double logmag = 0;
    int sign = -1;  // leading minus of the formula
    bool zero = false;
    for (size_t j = 0; j < mu.size(); ++j) {
      double t = mu[j] - d[i];
      if (std::abs(t) <= 1e-18 * scale) {
        zero = true;
        break;
      }
      logmag += std::log(std::abs(static_cast<long double>(t)));
      if (t < 0) sign = -sign;
    }
    if (zero) continue;
    for (size_t l = 0; l < m; ++l) {
      if (l == i) continue;
      double t = d[l] - d[i];
      if (std::abs(t) <= 1e-18 * scale) {
        zero = true;
        break;
      }
      logmag -= std::log(std::abs(static_cast<long double>(t)));
      if (t < 0) sign = -sign;
    }
    if (zero || sign < 0) continue;  // roundoff landed outside; decouple
    arm[i] = static_cast<double>(std::exp(0.5l * logmag));
  }
  return arm;
}

// Deflate near-coincident (d_i, mu_j) pairs; arms for deflated rows are 0.
// Returns index lists of the surviving strict core.
void deflate_pairs(const std::vector<double>& d, const std::vector<double>& mu,
                   std::vector<size_t>& d_core, std::vector<size_t>& mu_core) {
  double scale = std::max(mu.empty() ? 0.0 : mu[0], 1e-300);
  std::vector<bool> d_used(d.size(), false), mu_used(mu.size(), false);
  // Weak interlacing puts d_i between mu_{i+1} and mu_i; pair with the
  // nearer one when the gap is negligible.
  for (size_t pass = 0; pass < d.size(); ++pass) {
    bool changed = false;
    size_t live_mu_before = 0;
    (void)live_mu_before;
    size_t j = 0;
    for (size_t i = 0; i < d.size(); ++i) {
      if (d_used[i]) continue;
      // candidate mu's: nearest unused above and below in value order
      size_t best = mu.size();
      double best_gap = std::numeric_limits<double>::infinity();
      for (j = 0; j < mu.size(); ++j) {
        if (mu_used[j]) continue;
        double gap = std::abs(mu[j] - d[i]);
        if (gap < best_gap) {
          best_gap = gap;
          best = j;
        }
      }
      if (best < mu.size() && best_gap <= 1e-14 * scale) {
        d_used[i] = true;
        mu_used[best] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (size_t i = 0; i < d.size(); ++i)
    if (!d_used[i]) d_core.push_back(i);
  for (size_t j = 0; j < mu.size(); ++j)
    if (!mu_used[j]) mu_core.push_back(j);
}

// Upper-triangular matrix with positive diagonal exp(b) and singular values
// exp(a); requires prefix dominance with equality at the end.
Matrix build_equal_case(const std::vector<double>& b, const std::vector<double>& a);

Matrix border_append(const Matrix& bar, double beta, const std::vector<double>& alpha) {
  const long n = bar.rows() + 1;
  Eigen::JacobiSVD<Matrix> svd(bar, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sig = svd.singularValues();

  std::vector<double> d(static_cast<size_t>(n - 1));
  for (long i = 0; i < n - 1; ++i) d[static_cast<size_t>(i)] = sig(i) * sig(i);
  std::vector<double> mu(alpha.size());
  for (size_t j = 0; j < alpha.size(); ++j) mu[j] = alpha[j] * alpha[j];

  std::vector<size_t> d_core, mu_core;
  deflate_pairs(d, mu, d_core, mu_core);

  std::vector<double> dc, mc;
  for (size_t i : d_core) dc.push_back(d[i]);
  for (size_t j : mu_core) mc.push_back(mu[j]);
  std::vector<double> core_arm = arrowhead_arms(dc, mc);

  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n - 1);
  for (size_t t = 0; t < d_core.size(); ++t) {
    size_t i = d_core[t];
    double si = sig(static_cast<long>(i));
    if (si > 0) z(static_cast<long>(i)) = core_arm[t] / si;
  }

  Matrix M = Matrix::Zero(n, n);
  M.topLeftCorner(n - 1, n - 1) = bar;
  M.col(n - 1).head(n - 1) = svd.matrixU() * z;
  M(n - 1, n - 1) = beta;
  return M;
}

Matrix build_equal_case(const std::vector<double>& b, const std::vector<double>& a) {
  const size_t n = b.size();
  if (n == 1) {
    Matrix m(1, 1);
    m(0, 0) = std::exp(b[0]);
    return m;
  }
  // Split at the first tight interior prefix: both halves are independent.
  double slack = 0;
  for (size_t k = 0; k + 1 < n; ++k) {
    slack += a[k] - b[k];
    if (slack <= kSplitTol) {
      std::vector<double> bl(b.begin(), b.begin() + static_cast<long>(k + 1));
      std::vector<double> al(a.begin(), a.begin() + static_cast<long>(k + 1));
      std::vector<double> br(b.begin() + static_cast<long>(k + 1), b.end());
      std::vector<double> ar(a.begin() + static_cast<long>(k + 1), a.end());
      Matrix L = build_equal_case(bl, al);
      Matrix R = build_equal_case(br, ar);
      Matrix M = Matrix::Zero(static_cast<long>(n), static_cast<long>(n));
      M.topLeftCorner(L.rows(), L.cols()) = L;
      M.bottomRightCorner(R.rows(), R.cols()) = R;
      return M;
    }
  }
  // Greedy water-fill of the penultimate targets: gamma_i in [a_{i+1}, a_i],
  // sum gamma = sum of b without its last entry, prefixes maximal.
  std::vector<double> gamma(n - 1);
  double budget = std::accumulate(b.begin(), b.end() - 1, 0.0);
  std::vector<double> low_suffix(n, 0.0);  // sum of a_{j+1} for j >= i
  for (size_t i = n - 1; i-- > 0;) low_suffix[i] = low_suffix[i + 1] + a[i + 1];
  double rem = budget;
  for (size_t i = 0; i + 1 < n; ++i) {
    double g = std::min(a[i], rem - low_suffix[i + 1]);
    g = std::max(g, a[i + 1]);
    gamma[i] = g;
    rem -= g;
  }
  Matrix bar = build_equal_case(std::vector<double>(b.begin(), b.end() - 1), gamma);
  std::vector<double> alpha(n);
  for (size_t j = 0; j < n; ++j) alpha[j] = std::exp(a[j]);
  return border_append(bar, std::exp(b[n - 1]), alpha);
}

}  // namespace

Matrix horn_construct(const EigenData& eig, const std::vector<double>& s) {
  const size_t N = s.size();
  if (eig.values.size() != N) throw Error("length mismatch");
  if (!eig.is_ordered()) throw Error("eigenvalues must be ordered by modulus");
  for (size_t i = 1; i < N; ++i)
    if (s[i] > s[i - 1]) throw Error("singular targets must be decreasing");

  MajorizationResult maj = log_majorization_check(eig, s);
  if (!maj.ok)
    throw MajorizationViolation("log-majorization violated at n=" +
                                    std::to_string(maj.first_failure),
                                maj.first_failure);

  size_t r = 0;
  while (r < N && std::abs(eig.values[r]) > 0.0) ++r;
  Matrix A = Matrix::Zero(static_cast<long>(N), static_cast<long>(N));
  if (r > 0) {
    std::vector<double> b(r), t(r);
    for (size_t i = 0; i < r; ++i) {
      if (s[i] <= 0.0)
        throw MajorizationViolation("zero target ahead of nonzero eigenvalue",
                                    static_cast<long>(i + 1));
      b[i] = std::log(std::abs(eig.values[i]));
    }
    double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
    double head = 0;
    for (size_t i = 0; i + 1 < r; ++i) {
      t[i] = std::log(s[i]) + std::log1p(-kShrink);
      head += t[i];
    }
    t[r - 1] = sum_b - head;  // forced by product equality
    std::sort(t.begin(), t.end(), std::greater<double>());
    Matrix core = build_equal_case(b, t);
    // restore phases: row scaling keeps triangularity and singular values
    for (size_t i = 0; i < r; ++i) {
      Complex phase = eig.values[i] / std::abs(eig.values[i]);
      core.row(static_cast<long>(i)) *= phase;
    }
    A.topLeftCorner(static_cast<long>(r), static_cast<long>(r)) = core;
  }
  // store the diagonal bit for bit
  for (size_t i = 0; i < N; ++i)
    A(static_cast<long>(i), static_cast<long>(i)) = eig.values[i];
  return A;
}

SvdVerifyResult svd_verify(const Matrix& A, const std::vector<double>& s,
                           double tol) {
  SvdVerifyResult res;
  res.singular_values = singular_values(A);
  if (res.singular_values.size() != s.size()) throw Error("dimension mismatch");
  double smax = s.empty() ? 0.0 : s[0];
  res.max_violation = -std::numeric_limits<double>::infinity();
  res.ok = true;
  for (size_t j = 0; j < s.size(); ++j) {
    double v = res.singular_values[j] - s[j] * (1.0 + tol);
    res.max_violation = std::max(res.max_violation, v);
    if (v > 1e-13 * smax) res.ok = false;
  }
  return res;
}

WeylResult weyl_check(const EigenData& eig, const std::vector<double>& s,
                      double tol) {
  const size_t N = s.size();
  if (eig.values.size() != N) throw Error("length mismatch");
  WeylResult res;
  long double logsum = 0;
  bool zero = false;
  double smax = s.empty() ? 0.0 : std::abs(s[0]);
  for (size_t k = 0; k < N; ++k) {
    if (s[k] <= 0.0) zero = true;
    if (!zero) logsum += std::log(static_cast<long double>(s[k]));
    double lam = std::abs(eig.values[k]);
    if (lam == 0.0) continue;
    if (zero) {
      if (lam > tol * smax) {
        res.ok = false;
        res.first_failure = static_cast<long>(k + 1);
        return res;
      }
      continue;
    }
    double gm_log = static_cast<double>(logsum) / static_cast<double>(k + 1);
    if (std::log(lam) > gm_log + tol * (1.0 + std::fabs(gm_log))) {
      res.ok = false;
      res.first_failure = static_cast<long>(k + 1);
      return res;
    }
  }
  res.ok = true;
  return res;
}

bool is_upper_triangular(const Matrix& A, double tol) {
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < std::min(i, A.cols()); ++j)
      if (std::abs(A(i, j)) > tol) return false;
  return true;
}

std::vector<double> singular_values(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  Eigen::VectorXd sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

std::vector<Complex> eigenvalues_oracle(const Matrix& A) {
  Eigen::ComplexEigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw Error("eigen solver failed");
  Eigen::VectorXcd ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

HornInstance random_horn_instance(std::uint64_t seed, int n) {
  SplitMix64 rng(seed);
  std::vector<double> logs(static_cast<size_t>(n));
  for (auto& x : logs) x = rng.uniform(-3.0, 2.0);
  std::sort(logs.begin(), logs.end(), std::greater<double>());
  std::vector<double> s(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = std::exp(logs[static_cast<size_t>(i)]);

  std::vector<double> a(static_cast<size_t>(n));
  double mode = rng.uniform();
  if (mode < 0.45) {
    // entrywise shrunk
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double v = s[static_cast<size_t>(i)] * std::exp(-rng.uniform(0.0, 0.8));
      prev = std::min(prev, v);
      a[static_cast<size_t>(i)] = prev;
    }
  } else {
    // block geometric means: prefix products tie exactly at block ends
    int i = 0;
    while (i < n) {
      int len = static_cast<int>(rng.range(1, std::min(4, n - i)));
      double lg = 0;
      for (int j = i; j < i + len; ++j) lg += logs[static_cast<size_t>(j)];
      double gm = std::exp(lg / len);
      for (int j = i; j < i + len; ++j) a[static_cast<size_t>(j)] = gm;
      i += len;
    }
    if (mode > 0.75) {  // push a few entries off the boundary
      for (int j = 0; j < n; ++j)
        if (rng.uniform() < 0.3) a[static_cast<size_t>(j)] *= std::exp(-rng.uniform(0.0, 0.3));
      for (int j = 1; j < n; ++j)
        a[static_cast<size_t>(j)] = std::min(a[static_cast<size_t>(j)], a[static_cast<size_t>(j - 1)]);
    }
  }
  // zero tail sometimes
  if (rng.uniform() < 0.3) {
    long z = rng.range(1, std::max(1, n / 3));
    for (long j = n - z; j < n; ++j) a[static_cast<size_t>(j)] = 0.0;
  }
  std::vector<Complex> vals(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double phi = rng.uniform(0.0, 2.0 * M_PI);
    vals[static_cast<size_t>(i)] =
        a[static_cast<size_t>(i)] * Complex(std::cos(phi), std::sin(phi));
  }
  return HornInstance{EigenData::ordered(std::move(vals)), std::move(s)};
}

double multiset_pairing_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (size_t round = 0; round < a.size(); ++round) {
    size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i].real())) continue;
      for (size_t j = 0; j < b.size(); ++j) {
        if (used[j]) continue;
        double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    a[bi] = Complex(std::numeric_limits<double>::quiet_NaN(), 0);
    used[bj] = true;
  }
  return worst;
}

}  // namespace opideal::hornmat
