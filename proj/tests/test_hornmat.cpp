#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "opideal/hornmat.hpp"
#include "opideal/rng.hpp"

using namespace opideal;
using namespace opideal::hornmat;

namespace {

EigenData real_eig(std::initializer_list<double> vals) {
  std::vector<Complex> v;
  for (double x : vals) v.emplace_back(x, 0.0);
  return EigenData::ordered(std::move(v));
}

}  // namespace

TEST_CASE("log majorization: pinned cases") {
  CHECK(log_majorization_check(real_eig({2, 1}), {2, 1}).ok);
  MajorizationResult bad = log_majorization_check(real_eig({2, 1}), {1, 1});
  CHECK(!bad.ok);
  CHECK(bad.first_failure == 1);
  // strict prefix slack but tied total
  CHECK(log_majorization_check(real_eig({1, 1}), {2, 0.5}).ok);
  CHECK(!log_majorization_check(real_eig({1, 1}), {2, 0.4}).ok);
  // zero handling: zero target needs zero eigenvalue
  CHECK(log_majorization_check(real_eig({1, 0}), {1, 0}).ok);
  CHECK(!log_majorization_check(real_eig({1, 0.5}), {1, 0}).ok);
}

TEST_CASE("log majorization agrees with a direct product oracle") {
  SplitMix64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 8;
    std::vector<double> s(n), a(n);
    for (int i = 0; i < n; ++i) s[i] = std::exp(rng.uniform(-2, 2));
    for (int i = 0; i < n; ++i) a[i] = std::exp(rng.uniform(-2, 2));
    std::sort(s.begin(), s.end(), std::greater<double>());
    std::sort(a.begin(), a.end(), std::greater<double>());
    std::vector<Complex> vals(a.begin(), a.end());
    MajorizationResult got = log_majorization_check(EigenData{vals}, s);
    // oracle: direct products
    double pl = 1, pr = 1;
    bool ok = true;
    long fail = 0;
    for (int k = 0; k < n; ++k) {
      pl *= a[k];
      pr *= s[k];
      if (pl > pr * (1 + 1e-9)) {
        ok = false;
        fail = k + 1;
        break;
      }
    }
    // skip borderline draws the two routes may legitimately disagree on
    if (std::fabs(std::log(pl) - std::log(pr)) < 1e-9) continue;
    CHECK(got.ok == ok);
    if (!ok && !got.ok) CHECK(got.first_failure == fail);
  }
}

TEST_CASE("horn_construct: diagonal case") {
  std::vector<double> s = {3, 2, 1};
  Matrix A = horn_construct(real_eig({3, 2, 1}), s);
  CHECK(A.isApprox(Matrix(Eigen::Vector3cd(3, 2, 1).asDiagonal())));
  CHECK(svd_verify(A, s, 1e-9).ok);
}

TEST_CASE("horn_construct: forced 2x2 nilpotent case") {
  std::vector<double> s = {1, 0};
  // the classical filling [[0,1],[0,0]] is a valid output
  Matrix hand(2, 2);
  hand << 0, 1, 0, 0;
  CHECK(svd_verify(hand, s, 1e-9).ok);
  // and so is whatever the construction returns
  Matrix A = horn_construct(real_eig({0, 0}), s);
  CHECK(is_upper_triangular(A));
  CHECK(A(0, 0) == Complex(0, 0));
  CHECK(A(1, 1) == Complex(0, 0));
  CHECK(svd_verify(A, s, 1e-9).ok);
}

TEST_CASE("horn_construct rejects infeasible data") {
  CHECK_THROWS_AS(horn_construct(real_eig({2, 1}), {1, 1}),
                  MajorizationViolation);
}

TEST_CASE("horn_construct: 200 seeded instances, N <= 16") {
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t seed = 42u + static_cast<std::uint64_t>(trial);
    int n = 2 + static_cast<int>(seed * 2654435761u % 15u);
    HornInstance inst = random_horn_instance(seed, n);
    REQUIRE(log_majorization_check(inst.eig, inst.s).ok);
    Matrix A = horn_construct(inst.eig, inst.s);

    // exactly upper triangular, diagonal stored bit for bit
    CHECK(is_upper_triangular(A));
    for (int i = 0; i < n; ++i) {
      CHECK(A(i, i).real() == inst.eig.values[static_cast<size_t>(i)].real());
      CHECK(A(i, i).imag() == inst.eig.values[static_cast<size_t>(i)].imag());
    }

    SvdVerifyResult v = svd_verify(A, inst.s, 1e-9);
    INFO("seed ", seed, " n ", n, " violation ", v.max_violation);
    CHECK(v.ok);

    // eigenvalues of an upper-triangular matrix are its diagonal; the
    // oracle must agree as a multiset
    double scale = std::max(1e-12, inst.s[0]);
    CHECK(multiset_pairing_distance(eigenvalues_oracle(A), inst.eig.values) <=
          1e-8 * scale);
  }
}

TEST_CASE("horn_construct: monotone coupling in the targets") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 30; ++trial) {
    HornInstance inst = random_horn_instance(1000 + static_cast<std::uint64_t>(trial), 9);
    std::vector<double> bigger = inst.s;
    for (auto& x : bigger) x *= 1.0 + rng.uniform(0.0, 0.5);
    for (size_t i = 1; i < bigger.size(); ++i)
      bigger[i] = std::min(bigger[i], bigger[i - 1]);
    Matrix A = horn_construct(inst.eig, bigger);
    CHECK(svd_verify(A, bigger, 1e-9).ok);
  }
}

TEST_CASE("svd_verify: pinned cases") {
  Matrix z = Matrix::Zero(3, 3);
  CHECK(svd_verify(z, {1, 0.5, 0}, 1e-9).ok);
  Matrix d(2, 2);
  d << 2, 0, 0, 1;
  SvdVerifyResult res = svd_verify(d, {2, 1}, 1e-9);
  CHECK(res.ok);
  CHECK(res.max_violation <= 0);
}

TEST_CASE("weyl_check") {
  // normal matrix: eigenvalue moduli equal singular values
  SplitMix64 rng(5);
  Matrix H = Matrix::Random(6, 6);
  H = (H + H.adjoint()).eval();  // hermitian => normal
  auto eigs = eigenvalues_oracle(H);
  auto s = singular_values(H);
  CHECK(weyl_check(EigenData::ordered(eigs), s).ok);

  // nilpotent Jordan block: eigenvalues all zero
  Matrix J = Matrix::Zero(5, 5);
  for (int i = 0; i + 1 < 5; ++i) J(i, i + 1) = 1.0;
  CHECK(weyl_check(EigenData::ordered(eigenvalues_oracle(J)),
                   singular_values(J))
            .ok);

  // random matrices: the inequality holds universally
  for (int trial = 0; trial < 50; ++trial) {
    Matrix M = Matrix::Random(10, 10);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        M(i, j) *= rng.uniform(0.2, 2.0);
    CHECK(weyl_check(EigenData::ordered(eigenvalues_oracle(M)),
                     singular_values(M), 1e-10)
              .ok);
  }
}
