#include "opideal/specdecomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace opideal::specdecomp {

namespace {

bool canonical_before(const Complex& a, const Complex& b) {
  double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  return std::arg(a) < std::arg(b);
}

// Swap the diagonal entries of the 2x2 block at (i, i+1) of the upper
// triangular S by a unitary similarity, updating U.  On an exactly equal
// pair the rotation degenerates to a phase and the diagonal stays put,
// which is the right outcome: entries of one cluster are interchangeable.
void swap_adjacent(Matrix& S, Matrix& U, long i) {
  Complex a = S(i, i), b = S(i + 1, i + 1), c = S(i, i + 1);
  double n = std::sqrt(std::norm(c) + std::norm(b - a));
  if (n == 0.0) return;  // identical block, nothing to do
  Complex g1 = c / n, g2 = (b - a) / n;
  Matrix G(2, 2);
  G << g1, -std::conj(g2), g2, std::conj(g1);
  S.block(i, 0, 2, S.cols()) = G.adjoint() * S.block(i, 0, 2, S.cols());
  S.block(0, i, S.rows(), 2) = S.block(0, i, S.rows(), 2) * G;
  U.block(0, i, U.rows(), 2) = U.block(0, i, U.rows(), 2) * G;
  S(i + 1, i) = 0.0;  // exact by construction, clear the roundoff
}

}  // namespace

OrderedSchur ordered_schur(const Matrix& T, const Options& opt) {
  if (T.rows() != T.cols()) throw Error("matrix must be square");
  Eigen::ComplexSchur<Matrix> schur(T, /*computeU=*/true);
  if (schur.info() != Eigen::Success) throw Error("Schur decomposition failed");
  Matrix S = schur.matrixT();
  Matrix U = schur.matrixU();
  const long N = S.rows();
  // clear the numerically-zero lower triangle once and for all
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < i; ++j) S(i, j) = 0.0;

  std::vector<Complex> target;
  target.reserve(static_cast<size_t>(N));
  for (long i = 0; i < N; ++i) target.push_back(S(i, i));
  std::stable_sort(target.begin(), target.end(), canonical_before);

  double scale = std::max(T.norm(), 1e-300);
  for (long i = 0; i < N; ++i) {
    // nearest remaining diagonal entry to the i-th target; entries within
    // one cluster are interchangeable, so the first member found wins and
    // swap chains stay short
    long best = i;
    double bestd = std::abs(S(i, i) - target[static_cast<size_t>(i)]);
    for (long j = i; j < N; ++j) {
      double d = std::abs(S(j, j) - target[static_cast<size_t>(i)]);
      if (d <= opt.cluster_tol * scale) {
        best = j;
        break;
      }
      if (d < bestd) {
        bestd = d;
        best = j;
      }
    }
    for (long j = best; j > i; --j) swap_adjacent(S, U, j - 1);
  }
  OrderedSchur out;
  out.eigen.values.reserve(static_cast<size_t>(N));
  for (long i = 0; i < N; ++i) out.eigen.values.push_back(S(i, i));
  out.basis = std::move(U);
  out.triangular = std::move(S);
  return out;
}

DecompResult split(const Matrix& T, const Options& opt) {
  OrderedSchur os = ordered_schur(T, opt);
  const long N = T.rows();
  Matrix lambda = Matrix::Zero(N, N);
  for (long i = 0; i < N; ++i) lambda(i, i) = os.triangular(i, i);

  DecompResult res;
  res.nilpotent_triangular = os.triangular - lambda;  // strictly upper, exact
  res.D = os.basis * lambda * os.basis.adjoint();
  res.Q = os.basis * res.nilpotent_triangular * os.basis.adjoint();
  res.basis = os.basis;
  res.eigen = os.eigen;

  double tn = std::max(T.norm(), 1e-300);
  res.recombine_residual = (T - (res.D + res.Q)).norm() / tn;
  double dn = std::max(res.D.norm(), 1e-300);
  res.normality_residual =
      (res.D * res.D.adjoint() - res.D.adjoint() * res.D).norm() / (dn * dn);
  return res;
}

namespace {

// Numerical kernel dimension and basis of M, absolute threshold; the
// caller normalizes M so that kernel directions sit near machine epsilon
// while everything else stays far above the cut.
std::pair<long, Matrix> kernel_basis(const Matrix& M, double tol) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  double cut = std::max(tol, 1e-10);
  long rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  long dim = M.cols() - rank;
  return {dim, svd.matrixV().rightCols(dim)};
}

}  // namespace

Matrix generalized_eigenspace(const Matrix& T, Complex lambda,
                              const Options& opt) {
  const long N = T.rows();
  // Work with the normalized resolvent factor so kernel thresholds can be
  // absolute; powers of it stay O(1) outside the kernel directions.
  Matrix M = lambda * Matrix::Identity(N, N) - T;
  double mnorm = M.norm();
  if (mnorm == 0.0) return Matrix::Identity(N, N);  // T = lambda I
  Matrix Mn = M / mnorm;
  Matrix P = Matrix::Identity(N, N);
  long prev = -1;
  Matrix basis;
  for (long j = 1; j <= N; ++j) {
    P = P * Mn;
    auto [dim, B] = kernel_basis(P, opt.tol);
    if (dim == prev) break;
    prev = dim;
    basis = B;
  }
  // Computed spectra of defective clusters scatter like eps^(1/k), so
  // presence is judged by the kernel itself, not by oracle distances.
  if (basis.cols() == 0)
    throw Error("lambda is not in the spectrum (within tolerance)");
  return basis;
}

Matrix deflate(const Matrix& T, Complex lambda, const Options& opt) {
  const long N = T.rows();
  Matrix B = generalized_eigenspace(T, lambda, opt);
  const long m = B.cols();
  if (m == N) return Matrix::Zero(0, 0);
  // orthonormal basis of the complement of range(B)
  Matrix P = Matrix::Identity(N, N) - B * B.adjoint();
  Eigen::JacobiSVD<Matrix> svd(P, Eigen::ComputeFullU);
  Matrix W = svd.matrixU().leftCols(N - m);
  return W.adjoint() * T * W;
}

NilpotenceEvidence quasinilpotence_test(const Matrix& Q, double tol,
                                        double scale, double eig_tol) {
  NilpotenceEvidence ev;
  const long N = Q.rows();
  if (scale <= 0.0) scale = Q.norm();
  if (eig_tol <= 0.0) eig_tol = tol;
  if (Q.norm() == 0.0) {
    ev.ok = ev.eig_ok = ev.power_ok = true;
    return ev;
  }
  for (const Complex& e : hornmat::eigenvalues_oracle(Q))
    ev.max_eigenvalue_modulus = std::max(ev.max_eigenvalue_modulus, std::abs(e));
  Matrix P = Matrix::Identity(N, N);
  for (long j = 0; j < N; ++j) P = P * Q;
  ev.power_norm = P.norm();
  ev.eig_ok = ev.max_eigenvalue_modulus <= eig_tol * scale;
  ev.power_ok =
      ev.power_norm <= tol * static_cast<double>(N) * std::pow(scale, N);
  ev.ok = ev.eig_ok && ev.power_ok;
  return ev;
}

BlockTriangularReport block_triangular_nilpotence(const Matrix& A,
                                                  const Matrix& B,
                                                  const Matrix& C,
                                                  double tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols()) throw Error("blocks must be square");
  if (C.rows() != A.rows() || C.cols() != B.cols()) throw Error("coupling shape mismatch");
  if (!quasinilpotence_test(A, tol).ok || !quasinilpotence_test(B, tol).ok)
    throw Error("diagonal blocks must be nilpotent");

  const long n1 = A.rows(), n2 = B.rows(), N = n1 + n2;
  Matrix T = Matrix::Zero(N, N);
  T.topLeftCorner(n1, n1) = A;
  T.bottomRightCorner(n2, n2) = B;
  T.topRightCorner(n1, n2) = C;

  BlockTriangularReport rep;
  rep.whole = quasinilpotence_test(T, tol);

  // validate T^n = [[A^n, sum_k A^(n-1-k) C B^k],[0, B^n]] for n <= 2N
  Matrix Tp = Matrix::Identity(N, N);
  double tnorm = std::max(T.norm(), 1e-300);
  double power_scale = 1.0;
  for (long n = 1; n <= 2 * N; ++n) {
    Tp = Tp * T;
    power_scale *= tnorm;
    Matrix Ap = Matrix::Identity(n1, n1), Bp = Matrix::Identity(n2, n2);
    for (long j = 0; j < n; ++j) Ap = Ap * A;
    Matrix coupling = Matrix::Zero(n1, n2);
    for (long k = 0; k < n; ++k) {
      // A^(n-1-k) C B^k
      Matrix left = Matrix::Identity(n1, n1);
      for (long j = 0; j < n - 1 - k; ++j) left = left * A;
      Matrix right = Matrix::Identity(n2, n2);
      for (long j = 0; j < k; ++j) right = right * B;
      coupling += left * C * right;
    }
    for (long j = 0; j < n; ++j) Bp = Bp * B;
    Matrix F = Matrix::Zero(N, N);
    F.topLeftCorner(n1, n1) = Ap;
    F.bottomRightCorner(n2, n2) = Bp;
    F.topRightCorner(n1, n2) = coupling;
    rep.expansion_residual = std::max(
        rep.expansion_residual, (Tp - F).norm() / std::max(power_scale, 1e-300));
  }
  rep.ok = rep.whole.ok;
  return rep;
}

namespace {

// Exact run-length form of a decreasing nonnegative double list.
BlockSequence to_block_sequence(const std::vector<double>& vals) {
  std::vector<Run> runs;
  for (double v : vals) runs.push_back(Run{Dyadic::from_double(v), BigInt(1)});
  return BlockSequence::from_runs(std::move(runs));
}

}  // namespace

TraceCertificate spectral_trace_reduce(const Matrix& T,
                                       const exactseq::IdealSpec& J,
                                       const exactseq::SearchBounds& bounds,
                                       const Options& opt) {
  TraceCertificate cert;
  std::vector<double> s = hornmat::singular_values(T);
  cert.input_membership = membership_search(to_block_sequence(s), J, bounds);
  if (!cert.input_membership.found())
    throw Error("singular values of T are not dominated by a generator "
                "within the search bounds");

  cert.decomposition = split(T, opt);
  cert.weyl_ok = hornmat::weyl_check(cert.decomposition.eigen, s).ok;
  if (!cert.weyl_ok)
    throw Error("Weyl inequality failed: eigen/SVD results inconsistent");

  cert.stability = exactseq::stability_probe(J.generators.at(0), bounds);

  std::vector<double> moduli;
  moduli.reserve(cert.decomposition.eigen.values.size());
  for (const Complex& z : cert.decomposition.eigen.values)
    moduli.push_back(std::abs(z));
  cert.d_membership = membership_search(to_block_sequence(moduli), J, bounds);

  // Q is nilpotent: its true eigenvalue list is zero (strictly upper in
  // basis coordinates), so the Cesaro-mean criterion holds trivially.
  NilpotenceEvidence qev = quasinilpotence_test(
      cert.decomposition.Q, 1e-8, std::max(T.norm(), 1e-300), 1e-4);
  cert.q_criterion_trivial = qev.power_ok;

  cert.statement = "tau(T) = tau(D) for every trace tau on the ideal";
  return cert;
}

DecompInstance random_decomp_instance(std::uint64_t seed, int max_n) {
  SplitMix64 rng(seed);
  DecompInstance inst;
  int n = static_cast<int>(rng.range(2, max_n));
  if (rng.uniform() < 0.5) {
    inst.T = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        inst.T(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return inst;
  }
  // planted Jordan structure under a random unitary similarity
  Matrix J = Matrix::Zero(n, n);
  int at = 0;
  std::vector<Complex> pool;
  while (at < n) {
    long size = rng.range(1, std::min(3l, static_cast<long>(n - at)));
    Complex lam;
    if (!pool.empty() && rng.uniform() < 0.3) {
      lam = pool[static_cast<size_t>(rng.range(0, static_cast<long>(pool.size()) - 1))];
    } else {
      lam = rng.uniform() < 0.15
                ? Complex(0, 0)
                : Complex(rng.uniform(-2, 2), rng.uniform(-2, 2));
      pool.push_back(lam);
    }
    for (long j = 0; j < size; ++j) {
      J(at + j, at + j) = lam;
      if (j + 1 < size) {
        J(at + j, at + j + 1) = 1.0;
        inst.defective = true;
      }
    }
    inst.planted.emplace_back(lam, size);
    at += static_cast<int>(size);
  }
  Matrix G = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix U = qr.householderQ();
  inst.T = U * J * U.adjoint();
  return inst;
}

}  // namespace opideal::specdecomp
