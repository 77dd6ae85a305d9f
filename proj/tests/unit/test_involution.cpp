#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "balance_nets/algebra/involution.hpp"
#include "balance_nets/error.hpp"

using namespace balance_nets;

namespace {
  Matrix2 random_seed(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
      Matrix2 const g{u(rng), u(rng), u(rng), u(rng)};
      if (std::abs(g.det()) > 0.1) {
        return g;
      }
    }
  }

  InvolutionMatrix random_involution(std::mt19937_64& rng) {
    return involution_from_seed(random_seed(rng));
  }

  // Truncated power series of exp(M) in complex arithmetic.
  CMatrix2 exp_series(CMatrix2 const& m) {
    CMatrix2 sum  = CMatrix2::identity();
    CMatrix2 term = CMatrix2::identity();
    for (int k = 1; k < 80; ++k) {
      term = term * m * std::complex<double>(1.0 / k, 0.0);
      sum += term;
    }
    return sum;
  }
}  // namespace

TEST_CASE("the identity seed gives Z", "[involution]") {
  auto const a = involution_from_seed(Matrix2::identity());
  REQUIRE(a.matrix() == Matrix2::swap());
}

TEST_CASE("seed formulas agree with G Z G^-1", "[involution]") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix2 const g    = random_seed(rng);
    Matrix2 const want = g * Matrix2::swap() * g.inverse();
    auto const    a    = involution_from_seed(g);
    double const  d    = g.det();
    REQUIRE(a.a() == Approx((g.m01 * g.m11 - g.m00 * g.m10) / d));
    REQUIRE(approx_equal(a.matrix(), want, 1e-9));
    REQUIRE(approx_equal(a.matrix() * a.matrix(), Matrix2::identity(), tau_alg));
    REQUIRE(std::abs(a.matrix().det() + 1.0) < tau_alg);
  }
}

TEST_CASE("seeds differing by a commutant element give the same involution", "[involution]") {
  std::mt19937_64                        rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix2 const g = random_seed(rng);
    Matrix2 const s = u(rng) * Matrix2::identity() + u(rng) * Matrix2::swap();
    if (std::abs((g * s).det()) < 0.1) {
      continue;
    }
    REQUIRE(approx_equal(involution_from_seed(g * s).matrix(),
                         involution_from_seed(g).matrix(),
                         tau_alg));
  }
}

TEST_CASE("singular seeds are rejected", "[involution]") {
  REQUIRE_THROWS_AS(involution_from_seed({1, 2, 2, 4}), Error);
}

TEST_CASE("seed_from_involution round-trips", "[involution]") {
  InvolutionMatrix const z(0, 1, 1);
  REQUIRE(seed_from_involution(z, {1, 0}) == Matrix2::identity());

  std::mt19937_64                        rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto const            a = random_involution(rng);
    std::array<double, 2> v{u(rng), u(rng)};
    Matrix2               g;
    try {
      g = seed_from_involution(a, v);
    } catch (Error const&) {
      continue;  // v happened to be (nearly) an eigenvector
    }
    REQUIRE(approx_equal(involution_from_seed(g).matrix(), a.matrix(), 1e-8));
  }
}

TEST_CASE("eigenvectors are rejected as seed vectors", "[involution]") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto const a = random_involution(rng);
    REQUIRE_THROWS_AS(seed_from_involution(a, {-a.b(), a.a() - 1.0}), Error);
    REQUIRE_THROWS_AS(seed_from_involution(a, {-a.b(), a.a() + 1.0}), Error);
  }
  REQUIRE_THROWS_AS(seed_from_involution(InvolutionMatrix(0, 1, 1), {0, 0}), Error);
  InvolutionMatrix const diag(1, 0, 3);
  REQUIRE_THROWS_AS(seed_from_involution(diag, diag.eigenvector_plus()), Error);
  REQUIRE_THROWS_AS(seed_from_involution(diag, diag.eigenvector_minus()), Error);
}

TEST_CASE("the constraint a^2 + bc = 1 is enforced", "[involution]") {
  REQUIRE_THROWS_AS(InvolutionMatrix(0.5, 1, 1), Error);
  REQUIRE_NOTHROW(InvolutionMatrix(0.6, 0.8, 0.8));
}

TEST_CASE("spectral projectors of an involution", "[involution]") {
  auto const p = spectral_projectors(InvolutionMatrix(0, 1, 1));
  REQUIRE(p.z1 == Matrix2{0.5, 0.5, 0.5, 0.5});
  REQUIRE(p.z2 == Matrix2{0.5, -0.5, -0.5, 0.5});

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto const    a = random_involution(rng);
    auto const    s = spectral_projectors(a);
    Matrix2 const e = Matrix2::identity();
    REQUIRE(approx_equal(s.z1 - s.z2, a.matrix(), 1e-14 * std::max(1.0, norm_max(a.matrix()))));
    REQUIRE(approx_equal(s.z1 + s.z2, e, tau_alg));
    REQUIRE(approx_equal(s.z1 * s.z1, s.z1, 1e-8));
    REQUIRE(approx_equal(s.z2 * s.z2, s.z2, 1e-8));
    REQUIRE(approx_equal(s.z1 * s.z2, Matrix2::zero(), 1e-8));
    REQUIRE(approx_equal(s.z2 * s.z1, Matrix2::zero(), 1e-8));

    CMatrix2 const ib{{0, s.b.m00}, {0, s.b.m01}, {0, s.b.m10}, {0, s.b.m11}};
    CMatrix2 const series = exp_series(ib);
    CMatrix2 const closed = exp_i_log(s);
    CMatrix2 const target{a.a(), a.b(), a.c(), -a.a()};
    double const   scale  = std::max(1.0, norm_max(a.matrix()));
    REQUIRE(norm_max(series - target) < 1e-9 * scale * scale);
    REQUIRE(norm_max(closed - target) < 1e-9 * scale);
  }
}
