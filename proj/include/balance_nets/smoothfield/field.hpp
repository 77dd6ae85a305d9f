#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "balance_nets/algebra/involution.hpp"
#include "balance_nets/algebra/matrix2.hpp"

namespace balance_nets {

  inline constexpr double tau_num = 1e-6;
  inline constexpr double tau_fld = 1e-9;

  struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(Point const&, Point const&) = default;
  };

  // Throws Error(domain) unless p lies in [0, 1] x [0, 1] (up to rounding).
  void check_domain(Point p);

  // s -> (x(s), y(s)) on [s0, s1].
  class ParameterizedCurve {
   public:
    using Map = std::function<Point(double)>;

    // Throws Error(invalid_input) when s1 <= s0 and Error(domain) when an
    // endpoint leaves the unit square.
    ParameterizedCurve(Map map, double s0, double s1);

    // Straight segment, s in [0, 1].
    static ParameterizedCurve segment(Point from, Point to);
    // Piecewise linear through the points, one unit of s per piece.
    static ParameterizedCurve polyline(std::vector<Point> points);

    Point at(double s) const;

    double s0() const noexcept {
      return _s0;
    }

    double s1() const noexcept {
      return _s1;
    }

    Point start() const {
      return at(_s0);
    }

    Point end() const {
      return at(_s1);
    }

    // The same geometric curve traversed backwards over [s0, s1].
    ParameterizedCurve reversed() const;

   private:
    Map    _map;
    double _s0, _s1;
  };

  // (x, y) -> A(f1, f2, f3) with f2 f3 = 1 - f1^2.
  class InvolutionField {
   public:
    using Triple = std::function<std::array<double, 3>(Point)>;

    explicit InvolutionField(Triple f, double tol = tau_fld);

    static InvolutionField constant(InvolutionMatrix const& a);
    // A(t) = [[cos t, sin t], [sin t, -cos t]] with t = angle(x, y).
    static InvolutionField rotation(std::function<double(Point)> angle);

    // Throws Error(domain) outside the unit square and Error(validation) when
    // the triple leaves the involution surface by more than tol.
    InvolutionMatrix at(Point p) const;

    Matrix2 matrix(Point p) const {
      return at(p).matrix();
    }

   private:
    Triple _f;
    double _tol;
  };

  // A(z) = [[sqrt(1 - |z|^2), z], [conj z, -sqrt(1 - |z|^2)]] for a complex
  // potential z(x, y) with |z| <= 1 (principal root).
  class ComplexInvolutionField {
   public:
    using Potential = std::function<std::complex<double>(Point)>;

    explicit ComplexInvolutionField(Potential z, double tol = tau_fld);

    // Throws Error(domain) when |z| > 1 + tol.
    CMatrix2 at(Point p) const;

    // |z| = 1 within tol: the diagonal vanishes there.
    bool on_boundary(Point p) const;

   private:
    Potential _z;
    double    _tol;
  };

  // P1: an odd number of factors; P2: an even number.
  enum class Parity { odd, even };

  // Ordered product A(c(m_1)) A(c(m_2)) ... A(c(m_n)) over the midpoints m_k
  // of n equal parameter steps, in the direction of travel. Throws
  // Error(invalid_input) when n < 2 or n does not have the requested parity.
  Matrix2  p_integral(InvolutionField const& field, ParameterizedCurve const& curve, std::size_t n, Parity parity);
  CMatrix2 p_integral(ComplexInvolutionField const& field,
                      ParameterizedCurve const&     curve,
                      std::size_t                   n,
                      Parity                        parity);

  struct PIntegralReport {
    Matrix2     value;
    double      det = 0.0;
    std::size_t refined_steps = 0;  // 2n for P2, 2n + 1 for P1
    Matrix2     refined;
    double      change = 0.0;  // max-abs distance between the two
    bool        parity_law = false;  // det within tau_num of +1 (P2) or -1 (P1)
  };

  PIntegralReport p_integral_report(InvolutionField const&    field,
                                    ParameterizedCurve const& curve,
                                    std::size_t               n,
                                    Parity                    parity);

  struct Residual {
    Matrix2 value;  // A A_xy + A_y A_x
    double  norm = 0.0;
  };

  // Central differences with step h. Throws Error(domain) unless the point
  // keeps a margin of h inside the unit square.
  Residual infinitesimal_residual(InvolutionField const& field, Point p, double h);

  // Residual norms at every point of a points x points interior grid kept h
  // away from the boundary, evaluated with batched matrix kernels.
  std::vector<double> residual_grid(InvolutionField const& field, std::size_t points, double h);

  // log(r_k / r_{k+1}) / log(h_k / h_{k+1}) for consecutive steps.
  std::vector<double> convergence_orders(std::span<double const> hs, std::span<double const> norms);

}  // namespace balance_nets
