#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include "balance_nets/smoothfield/field.hpp"

namespace balance_nets {

  // The plane 2 a C1 + c C2 + b C3 = 0, i.e. A C = -C A for
  // C = [[C1, C2], [C3, -C1]].
  struct PlaneCoefficients {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    Matrix2 matrix() const noexcept {
      return {c1, c2, c3, -c1};
    }
  };

  enum class ConicKind { hyperbola, ellipse, lines };

  // The intersection of a^2 + bc = 1 with the plane, parameterized by t.
  // With C1 = 0 and C2 C3 != 0 the canonical forms are used:
  //   C2 C3 > 0: a = cosh t, b = k sinh t, c = -sinh t / k, k = sqrt(C2 / C3)
  //   C2 C3 < 0: a = cos t,  b = k sin t,  c =  sin t / k,  k = sqrt(-C2 / C3)
  // Otherwise the form is restricted to the plane and diagonalised.
  class PlaneSection {
   public:
    // Throws Error(invalid_input) for the zero plane and Error(domain) when
    // the plane misses the surface.
    explicit PlaneSection(PlaneCoefficients p);

    PlaneCoefficients const& plane() const noexcept {
      return _p;
    }

    ConicKind kind() const noexcept {
      return _kind;
    }

    bool canonical() const noexcept {
      return _canonical;
    }

    // 1 for an ellipse, 2 for a hyperbola or a pair of lines.
    std::size_t branches() const noexcept {
      return _kind == ConicKind::ellipse ? 1 : 2;
    }

    std::array<double, 3> point(double t, std::size_t branch = 0) const;
    InvolutionMatrix      at(double t, std::size_t branch = 0) const;

    // The point of the conic nearest to (a, b, c) in Euclidean distance.
    InvolutionMatrix nearest(std::array<double, 3> const& abc) const;

   private:
    PlaneCoefficients     _p;
    ConicKind             _kind      = ConicKind::ellipse;
    bool                  _canonical = false;
    double                _k         = 1.0;
    // Generic form: point = s e1 + r e2 with lambda1 s^2 + lambda2 r^2 = 1.
    std::array<double, 3> _e1{}, _e2{};
    double                _l1 = 0.0, _l2 = 0.0;
  };

  PlaneSection plane_section_solution(PlaneCoefficients const& p);

  // [[-cosh t + sinh t, (cosh t - sinh t) / L], [2 L sinh t, cosh t - sinh t]]
  InvolutionMatrix lform_first(double t, double L);
  // [[cosh t, sinh t / L], [-L sinh t, -cosh t]]
  InvolutionMatrix lform_second(double t, double L);

  // A field solving A A_y = C(y), C = [[0, C2(y)], [C3(y), 0]], built as
  // the canonical section at t(x, y) = int_0^y sign(C2) sqrt|C2 C3| dy + R(x).
  struct OdeField {
    InvolutionField                          field;
    std::function<double(Point)>             t;
    std::function<double(double)>            c2, c3;
    ConicKind                                kind;
  };

  // Throws Error(invalid_input) when C2 C3 vanishes or changes sign on
  // [0, 1], or when C2 / C3 is not constant, and Error(numerical) when the
  // quadrature fails.
  OdeField solve_ode_field(std::function<double(double)> c2,
                           std::function<double(double)> c3,
                           std::function<double(double)> r);

  struct OdeFieldCheck {
    double equation          = 0.0;  // max |A A_y - C(y)|
    double anticommutator    = 0.0;  // max |A C + C A|
    double fd_anticommutator = 0.0;  // max |A D + D A| with D = A A_y
  };

  // Central differences in y on a points x points interior grid.
  OdeFieldCheck check_ode_field(OdeField const& f, std::size_t points, double h);

  // Pointwise nearest-point projection of the field onto the plane's conic.
  InvolutionField project_to_plane(InvolutionField field, PlaneCoefficients const& p);

}  // namespace balance_nets
