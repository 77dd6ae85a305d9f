#include "balance_nets/algebra/involution.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "balance_nets/error.hpp"

namespace balance_nets {

  InvolutionMatrix::InvolutionMatrix(double a, double b, double c, double tol)
      : _a(a), _b(b), _c(c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
      fail(ErrorCode::validation, "involution entries must be finite");
    }
    double const defect = a * a + b * c - 1.0;
    if (std::abs(defect) > tol) {
      fail(ErrorCode::validation,
           "a^2 + bc = 1 violated by " + std::to_string(defect));
    }
  }

  InvolutionMatrix InvolutionMatrix::from_matrix(Matrix2 const& m, double tol) {
    if (std::abs(m.m00 + m.m11) > tol) {
      fail(ErrorCode::validation, "an involution matrix must have zero trace");
    }
    return InvolutionMatrix(m.m00, m.m01, m.m10, tol);
  }

  std::array<double, 2> InvolutionMatrix::eigenvector_plus() const noexcept {
    if (_b == 0.0) {
      // a = +-1; the +1 eigenspace of [[a, 0], [c, -a]].
      return _a > 0 ? std::array<double, 2>{2.0 * _a, _c}
                    : std::array<double, 2>{0.0, 1.0};
    }
    return {-_b, _a - 1.0};
  }

  std::array<double, 2> InvolutionMatrix::eigenvector_minus() const noexcept {
    if (_b == 0.0) {
      return _a > 0 ? std::array<double, 2>{0.0, 1.0}
                    : std::array<double, 2>{2.0 * _a, _c};
    }
    return {-_b, _a + 1.0};
  }

  InvolutionMatrix involution_from_seed(Matrix2 const& g, double tol) {
    double const a = g.m00, b = g.m01, c = g.m10, d = g.m11;
    double const det = a * d - b * c;
    if (!(std::abs(det) > tol)) {
      fail(ErrorCode::singular, "seed matrix is singular");
    }
    // The constraint holds exactly in theory; allow for rounding relative to
    // the entry size.
    double const scale = std::max({a * a, b * b, c * c, d * d}) / std::abs(det);
    return InvolutionMatrix((b * d - a * c) / det,
                            (a * a - b * b) / det,
                            (d * d - c * c) / det,
                            tol * std::max(1.0, scale * scale));
  }

  Matrix2 seed_from_involution(InvolutionMatrix const&      a,
                               std::array<double, 2> const& v,
                               double                       tol) {
    double const norm2 = v[0] * v[0] + v[1] * v[1];
    if (!(norm2 > 0.0)) {
      fail(ErrorCode::singular, "seed vector is zero");
    }
    double const av0 = a.a() * v[0] + a.b() * v[1];
    double const av1 = a.c() * v[0] - a.a() * v[1];
    Matrix2 const g{v[0], av0, v[1], av1};
    double const scale = norm2 * std::max(1.0, norm_max(a.matrix()));
    if (!(std::abs(g.det()) > tol * scale)) {
      fail(ErrorCode::singular, "seed vector is an eigenvector of the involution");
    }
    return g;
  }

  SpectralProjectors spectral_projectors(InvolutionMatrix const& a) {
    Matrix2 const m = a.matrix();
    Matrix2 const e = Matrix2::identity();
    Matrix2 const z1 = 0.5 * (m + e);
    Matrix2 const z2 = -0.5 * (m - e);
    return {z1, z2, std::numbers::pi * z2};
  }

  CMatrix2 exp_i_log(SpectralProjectors const& p) {
    auto lift = [](Matrix2 const& m) {
      return CMatrix2{m.m00, m.m01, m.m10, m.m11};
    };
    std::complex<double> const phase = std::exp(std::complex<double>(0.0, std::numbers::pi));
    return lift(p.z1) + phase * lift(p.z2);
  }

}  // namespace balance_nets
