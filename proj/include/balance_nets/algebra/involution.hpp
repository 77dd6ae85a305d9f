#pragma once

#include <array>
#include <complex>

#include "balance_nets/algebra/matrix2.hpp"

namespace balance_nets {

  // Default tolerance for algebraic matrix identities in double precision.
  inline constexpr double tau_alg = 1e-9;

  // The involution [[a, b], [c, -a]] with a^2 + bc = 1, so that A^2 = E and
  // det A = -1.
  class InvolutionMatrix {
   public:
    // Throws Error(validation) when |a^2 + bc - 1| > tol or an entry is not
    // finite.
    InvolutionMatrix(double a, double b, double c, double tol = tau_alg);

    // Accepts a matrix with m11 = -m00 (within tol) satisfying the constraint.
    static InvolutionMatrix from_matrix(Matrix2 const& m, double tol = tau_alg);

    double a() const noexcept {
      return _a;
    }

    double b() const noexcept {
      return _b;
    }

    double c() const noexcept {
      return _c;
    }

    Matrix2 matrix() const noexcept {
      return {_a, _b, _c, -_a};
    }

    // Eigenvectors (-b, a - 1) for +1 and (-b, a + 1) for -1. When b = 0 the
    // coordinate axes are returned instead.
    std::array<double, 2> eigenvector_plus() const noexcept;
    std::array<double, 2> eigenvector_minus() const noexcept;

   private:
    double _a, _b, _c;
  };

  // A = G Z G^-1 with Z = [[0, 1], [1, 0]], from the closed-form entries.
  // Throws Error(singular) when |det G| <= tol.
  InvolutionMatrix involution_from_seed(Matrix2 const& g, double tol = tau_alg);

  // G = [v, A v] (columns), so that involution_from_seed(G) = A. Throws
  // Error(singular) when v is zero or an eigenvector of A.
  Matrix2 seed_from_involution(InvolutionMatrix const&      a,
                               std::array<double, 2> const& v,
                               double                       tol = tau_alg);

  struct SpectralProjectors {
    Matrix2 z1;  // (A + E) / 2, projector onto the +1 eigenspace
    Matrix2 z2;  // -(A - E) / 2, projector onto the -1 eigenspace
    Matrix2 b;   // pi * z2, a logarithm of A: exp(i b) = A
  };

  SpectralProjectors spectral_projectors(InvolutionMatrix const& a);

  // exp(i B) for B = pi Z2 evaluated through the projectors:
  // Z1 + exp(i pi) Z2, which equals A up to the imaginary rounding of exp(i pi).
  CMatrix2 exp_i_log(SpectralProjectors const& p);

}  // namespace balance_nets
