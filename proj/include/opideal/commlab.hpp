// Commutator realization on a truncated basis: dyadic block averages, the
// odd/even shift isometries U1 e_n = e_{2n+1}, U2 e_n = e_{2n}, and the map
// B |-> (1/2)([U1*, U1 B] + [U2*, U2 B]), which turns an upper-triangular B
// with diagonal xi into an upper-triangular commutator sum whose diagonal
// is the block-average sequence eta.
//
// Truncation: U1, U2 send basis vectors with 2n+1 > N (resp. 2n > N) out of
// range, so the infinite-dimensional entry identities are asserted only on
// indices n with 2n+1 <= N.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

#include "opideal/dyadic.hpp"
#include "opideal/hornmat.hpp"
#include "opideal/ideal.hpp"

namespace opideal::commlab {

using hornmat::Complex;
using hornmat::EigenData;
using hornmat::Matrix;

// 1-based index n is safe iff both isometries keep e_n in range.
inline bool truncation_safe(long n, long N) { return 2 * n + 1 <= N; }

// Dyadic block of index n: largest k with 2^(k-1) <= n.
inline int block_of(long n) {
  int k = 0;
  while ((1l << k) <= n) ++k;
  return k;  // 2^(k-1) <= n <= 2^k - 1
}

// eta_n = mean of w over the dyadic block of n;
// xi_n  = 2^(1-k) * sum_{j < 2^k} w_j on block k.
// Entries are computed for every complete dyadic block inside [1, N].
template <typename T>
struct DyadicAverages {
  std::vector<T> eta;  // eta[i] is eta_{i+1}
  std::vector<T> xi;
};

DyadicAverages<double> dyadic_averages(const std::vector<double>& w);
DyadicAverages<Dyadic> dyadic_averages(const std::vector<Dyadic>& w);

// max_n |eta_n - w_n| - u_ceil(n/2), positive means the bound failed.
double averages_bound_violation(const std::vector<double>& w,
                                const DyadicAverages<double>& av,
                                const std::vector<double>& u);

// U1[2n+1, n] = 1, U2[2n, n] = 1 (1-based), other entries zero; columns
// whose image index exceeds N are zero.
std::pair<Matrix, Matrix> shift_isometries(long N);

// (1/2)([U1*, U1 B] + [U2*, U2 B]) evaluated through the index action of
// the isometries, O(N^2).  Throws unless B is upper triangular.
Matrix commutator_realize(const Matrix& B);

// Cesaro-mean membership test for a finite eigenvalue list: form the means
// (1/n) sum_{k<=n} lambda_k, rearrange their moduli decreasingly and search
// for a dominance witness against J.  All comparisons are exact (moduli are
// compared through their squares, which are dyadic).
struct CesaroCriterionResult {
  bool member = false;
  std::optional<exactseq::DominanceWitness> witness;
  std::vector<exactseq::SearchMiss> misses;
};

CesaroCriterionResult com_membership_criterion(const EigenData& eig,
                                               const exactseq::IdealSpec& J,
                                               const exactseq::SearchBounds& bounds);

}  // namespace opideal::commlab
