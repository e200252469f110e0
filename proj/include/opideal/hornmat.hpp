// Finite-dimensional inverse problem: an upper-triangular matrix with a
// prescribed diagonal whose singular values stay below a prescribed
// decreasing sequence, feasible exactly when the diagonal moduli are
// log-majorized by the target sequence.
//
// Construction: reduce to the product-equality case on the nonzero part,
// then recurse; at each level either split at a tight prefix or pick an
// interlacing target vector by greedy water-filling and append the last
// diagonal entry with a bordered column, solving a diagonal-plus-arrowhead
// inverse eigenvalue problem for the column.  Every append touches one new
// diagonal entry, so the scheme is the chain of 2x2-style rotations of the
// classical proof, ordered bottom-up.  The ordering is validated by
// svd_verify, not assumed.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

#include "opideal/dyadic.hpp"
#include "opideal/rng.hpp"

namespace opideal::hornmat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class MajorizationViolation : public Error {
 public:
  MajorizationViolation(const std::string& what, long n)
      : Error(what), failure_index(n) {}
  long failure_index;
};

// Eigenvalue list with algebraic multiplicities expanded, ordered by
// decreasing modulus; ties broken by argument ascending, then original
// position.  The tie-break makes reordering deterministic.
struct EigenData {
  std::vector<Complex> values;

  static EigenData ordered(std::vector<Complex> vals);
  bool is_ordered() const;
};

struct MajorizationResult {
  bool ok = false;
  long first_failure = 0;   // 1-based n of the first violated prefix
  double min_margin = 0.0;  // min over n of sum(log s) - sum(log |lambda|)
};

// Prefix-product check  |lambda_1...lambda_n| <= s_1...s_n  for all n,
// in the log domain with relative tolerance tol; zero products handled by
// rank-prefix logic rather than logs.
MajorizationResult log_majorization_check(const EigenData& eig,
                                          const std::vector<double>& s,
                                          double tol = 1e-12);

// Upper-triangular A with diag(A) = eig.values (bit for bit) and
// s_j(A) <= s_j (verified by svd_verify at 1e-9 relative).
// Throws MajorizationViolation when infeasible.
Matrix horn_construct(const EigenData& eig, const std::vector<double>& s);

struct SvdVerifyResult {
  bool ok = false;
  double max_violation = 0.0;  // max_j s_j(A) - s_j*(1+tol); negative = margin
  std::vector<double> singular_values;
};

SvdVerifyResult svd_verify(const Matrix& A, const std::vector<double>& s,
                           double tol);

// |lambda_n| <= (s_1...s_n)^(1/n) for all n (log domain, tolerance tol).
struct WeylResult {
  bool ok = false;
  long first_failure = 0;
};
WeylResult weyl_check(const EigenData& eig, const std::vector<double>& s,
                      double tol = 1e-12);

// --- shared dense-matrix helpers ---

bool is_upper_triangular(const Matrix& A, double tol = 0.0);

std::vector<double> singular_values(const Matrix& A);

std::vector<Complex> eigenvalues_oracle(const Matrix& A);

// Greedy min-distance pairing between two multisets; returns the largest
// paired distance (infinity when sizes differ).
double multiset_pairing_distance(std::vector<Complex> a, std::vector<Complex> b);

// Seeded random (eigenvalues, targets) pair inside the majorization region.
// Mixes entrywise-dominated spectra, block-GM spectra that sit exactly on
// the boundary, random phases and zero tails.
struct HornInstance {
  EigenData eig;
  std::vector<double> s;
};
HornInstance random_horn_instance(std::uint64_t seed, int n);

}  // namespace opideal::hornmat
