#include "opideal/commlab.hpp"

#include <algorithm>
#include <cmath>

namespace opideal::commlab {

namespace {

template <typename T, typename Halver>
DyadicAverages<T> averages_impl(const std::vector<T>& w, Halver scale_pow2) {
  DyadicAverages<T> out;
  const long N = static_cast<long>(w.size());
  long blocks = 0;
  while ((1l << (blocks + 1)) - 1 <= N) ++blocks;  // complete blocks
  if (blocks == 0) return out;
  long cov = (1l << blocks) - 1;
  out.eta.resize(static_cast<size_t>(cov));
  out.xi.resize(static_cast<size_t>(cov));
  T prefix{};  // sum of w_j, j < current block
  for (int k = 1; k <= blocks; ++k) {
    long lo = 1l << (k - 1), hi = (1l << k) - 1;
    T block_sum{};
    for (long j = lo; j <= hi; ++j) block_sum += w[static_cast<size_t>(j - 1)];
    T eta_val = scale_pow2(block_sum, 1 - k);
    T xi_val = scale_pow2(prefix + block_sum, 1 - k);
    for (long n = lo; n <= hi; ++n) {
      out.eta[static_cast<size_t>(n - 1)] = eta_val;
      out.xi[static_cast<size_t>(n - 1)] = xi_val;
    }
    prefix += block_sum;
  }
  return out;
}

}  // namespace

DyadicAverages<double> dyadic_averages(const std::vector<double>& w) {
  return averages_impl(w, [](double x, int e) { return std::ldexp(x, e); });
}

DyadicAverages<Dyadic> dyadic_averages(const std::vector<Dyadic>& w) {
  return averages_impl(
      w, [](const Dyadic& x, int e) { return x.times_pow2(BigInt(e)); });
}

double averages_bound_violation(const std::vector<double>& w,
                                const DyadicAverages<double>& av,
                                const std::vector<double>& u) {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < av.eta.size(); ++i) {
    long n = static_cast<long>(i) + 1;
    size_t half = static_cast<size_t>((n + 1) / 2 - 1);
    if (half >= u.size()) break;
    worst = std::max(worst, std::fabs(av.eta[i] - w[i]) - u[half]);
  }
  return worst;
}

std::pair<Matrix, Matrix> shift_isometries(long N) {
  if (N < 2) throw Error("need dimension >= 2");
  Matrix U1 = Matrix::Zero(N, N), U2 = Matrix::Zero(N, N);
  for (long n = 1; 2 * n + 1 <= N; ++n) U1(2 * n, n - 1) = 1.0;  // e_n -> e_{2n+1}
  for (long n = 1; 2 * n <= N; ++n) U2(2 * n - 1, n - 1) = 1.0;  // e_n -> e_{2n}
  return {U1, U2};
}

Matrix commutator_realize(const Matrix& B) {
  const long N = B.rows();
  if (B.cols() != N) throw Error("matrix must be square");
  if (!hornmat::is_upper_triangular(B))
    throw Error("commutator_realize needs an upper-triangular input");

  Matrix A = Matrix::Zero(N, N);
  // row masks: U1*U1 keeps rows r with 2r+1 <= N, U2*U2 keeps 2r <= N
  for (long r = 1; r <= N; ++r) {
    double m = (2 * r + 1 <= N ? 0.5 : 0.0) + (2 * r <= N ? 0.5 : 0.0);
    if (m != 0.0) A.row(r - 1) = m * B.row(r - 1);
  }
  // scatters: U1 B U1* places B(n,k) at (2n+1, 2k+1); U2 B U2* at (2n, 2k)
  for (long n = 1; 2 * n + 1 <= N; ++n)
    for (long k = n; 2 * k + 1 <= N; ++k)
      A(2 * n, 2 * k) -= 0.5 * B(n - 1, k - 1);
  for (long n = 1; 2 * n <= N; ++n)
    for (long k = n; 2 * k <= N; ++k)
      A(2 * n - 1, 2 * k - 1) -= 0.5 * B(n - 1, k - 1);
  return A;
}

namespace {

// modulus^2 of a Cesaro mean as an exact fraction num/den with num dyadic
// and den = n^2
struct MeanSq {
  Dyadic num;
  BigInt den;
};

// a < b as fractions
bool meansq_less(const MeanSq& a, const MeanSq& b) {
  return a.num.times_big(b.den) < b.num.times_big(a.den);
}
}  // namespace

CesaroCriterionResult com_membership_criterion(
    const EigenData& eig, const exactseq::IdealSpec& J,
    const exactseq::SearchBounds& bounds) {
  if (!eig.is_ordered()) throw Error("eigenvalues must be ordered by modulus");
  const long L = static_cast<long>(eig.values.size());
  CesaroCriterionResult out;

  // exact partial sums and mean moduli squared
  std::vector<MeanSq> d;
  d.reserve(static_cast<size_t>(L));
  Dyadic sre, sim;
  for (long n = 1; n <= L; ++n) {
    const Complex& z = eig.values[static_cast<size_t>(n - 1)];
    sre += Dyadic::from_double(z.real());
    sim += Dyadic::from_double(z.imag());
    d.push_back(MeanSq{sre * sre + sim * sim, BigInt(n) * n});
  }
  std::sort(d.begin(), d.end(),
            [](const MeanSq& a, const MeanSq& b) { return meansq_less(b, a); });

  for (size_t g = 0; g < J.generators.size(); ++g) {
    const BlockSequence& u = J.generators[g];
    for (BigInt m(1); m <= bounds.max_dilation; m *= 2) {
      // indices j with m j <= L need checking; beyond them the sorted
      // sequence is zero and dominance is automatic
      BigInt need((L + m.get_si() - 1) / m.get_si());
      if (need > u.coverage()) {
        out.misses.push_back(exactseq::SearchMiss{
            g + 1, m, Dyadic(1), BigInt(u.coverage() + 1)});
        continue;
      }
      for (long b = 0; b <= bounds.max_scale_exp; ++b) {
        BigInt fail(0);
        for (BigInt j(1); j <= need && m * j <= L; j += 1) {
          const MeanSq& val = d[static_cast<size_t>(BigInt(m * j).get_si() - 1)];
          Dyadic cu = u.value_at(j).times_pow2(BigInt(b));
          // val.num/val.den <= (c u)^2
          if (val.num > (cu * cu).times_big(val.den)) {
            fail = j;
            break;
          }
        }
        if (fail == 0) {
          out.member = true;
          out.witness =
              exactseq::DominanceWitness{g + 1, m, Dyadic::pow2(BigInt(b))};
          return out;
        }
        out.misses.push_back(
            exactseq::SearchMiss{g + 1, m, Dyadic::pow2(BigInt(b)), fail});
      }
    }
  }
  return out;
}

}  // namespace opideal::commlab
