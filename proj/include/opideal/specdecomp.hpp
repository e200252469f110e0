// Finite-dimensional spectral splitting: ordered triangularization with a
// deterministic eigenvalue order, generalized eigenspaces, deflation of one
// eigenvalue, the decomposition T = D + Q with D normal and Q nilpotent,
// nilpotence of block-triangular assemblies, and the trace-reduction
// certificate tau(T) = tau(D).
//
// The ordered triangular form is produced by reordering a Schur form with
// 2x2 unitary swaps rather than by kernel chains; the kernel-chain route
// survives as a cross-check oracle in the tests.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "opideal/hornmat.hpp"
#include "opideal/ideal.hpp"

namespace opideal::specdecomp {

using hornmat::Complex;
using hornmat::EigenData;
using hornmat::Matrix;

struct Options {
  double tol = 1e-10;          // residual tolerances
  double cluster_tol = 1e-8;   // relative gap below which eigenvalues merge
};

// Schur form U S U* with the diagonal of S in canonical order: decreasing
// modulus, ties by argument then by position before sorting.
struct OrderedSchur {
  Matrix basis;       // unitary U
  Matrix triangular;  // S, exactly zero below the diagonal
  EigenData eigen;    // = diagonal of S
};

OrderedSchur ordered_schur(const Matrix& T, const Options& opt = {});

struct DecompResult {
  Matrix D;              // normal, same eigenvalues as T
  Matrix Q;              // nilpotent
  Matrix basis;          // unitary; basis* T basis is upper triangular
  Matrix nilpotent_triangular;  // basis* Q basis, exactly strictly upper
  EigenData eigen;
  double recombine_residual;  // ||T - (D+Q)|| / ||T||
  double normality_residual;  // ||D D* - D* D|| / ||D||^2
};

DecompResult split(const Matrix& T, const Options& opt = {});

// Orthonormal basis of the generalized eigenspace of lambda:
// span of ker (lambda - T)^j, j up to the dimension.
// Throws when lambda is not within tolerance of the spectrum.
Matrix generalized_eigenspace(const Matrix& T, Complex lambda,
                              const Options& opt = {});

// Compression of T to the orthogonal complement of the generalized
// eigenspace of lambda: the spectrum loses exactly that eigenvalue.
Matrix deflate(const Matrix& T, Complex lambda, const Options& opt = {});

struct NilpotenceEvidence {
  bool ok = false;        // eig_ok && power_ok
  bool eig_ok = false;    // max |eigenvalue| <= tol * scale
  bool power_ok = false;  // ||Q^N|| <= tol * N * scale^N
  double max_eigenvalue_modulus = 0.0;
  double power_norm = 0.0;  // ||Q^N||_F
};

// scale defaults to ||Q||; callers judging a remainder inside a larger
// problem pass the ambient scale instead.  Computed spectra of defective
// nilpotents scatter like eps^(1/k), so eig_tol defaults looser than tol.
NilpotenceEvidence quasinilpotence_test(const Matrix& Q, double tol = 1e-8,
                                        double scale = -1.0,
                                        double eig_tol = -1.0);

struct BlockTriangularReport {
  bool ok = false;
  NilpotenceEvidence whole;
  double expansion_residual = 0.0;  // worst over n <= 2 dim
};

// T = [[A, C],[0, B]] with A, B nilpotent (checked) is nilpotent; the
// report also validates the block expansion of T^n numerically.
BlockTriangularReport block_triangular_nilpotence(const Matrix& A,
                                                  const Matrix& B,
                                                  const Matrix& C,
                                                  double tol = 1e-8);

struct TraceCertificate {
  DecompResult decomposition;
  exactseq::MembershipOutcome input_membership;  // s(T) against J (precondition)
  exactseq::StabilityVerdict stability;          // probe of J's generator
  bool weyl_ok = false;
  exactseq::MembershipOutcome d_membership;      // |eigenvalues| against J
  bool q_criterion_trivial = false;              // Q has zero spectrum
  // the reduction itself: tau(T) = tau(D) for every trace tau vanishing on
  // commutators, because Q lands in the commutator subspace
  std::string statement;
};

TraceCertificate spectral_trace_reduce(const Matrix& T,
                                       const exactseq::IdealSpec& J,
                                       const exactseq::SearchBounds& bounds,
                                       const Options& opt = {});

// Seeded test matrix: dense random, or a planted Jordan structure
// conjugated by a random unitary (then `planted` lists eigenvalue/block
// pairs and defective is true when some block exceeds size one).
struct DecompInstance {
  Matrix T;
  bool defective = false;
  std::vector<std::pair<Complex, long>> planted;
};
DecompInstance random_decomp_instance(std::uint64_t seed, int max_n);

}  // namespace opideal::specdecomp
