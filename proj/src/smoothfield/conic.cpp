#include "balance_nets/smoothfield/conic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "balance_nets/error.hpp"

namespace balance_nets {

  namespace {
    using Vec3 = std::array<double, 3>;

    constexpr double eig_eps = 1e-12;

    double dot(Vec3 const& u, Vec3 const& v) {
      return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    }

    Vec3 scale(Vec3 v, double s) {
      return {v[0] * s, v[1] * s, v[2] * s};
    }

    Vec3 add(Vec3 const& u, Vec3 const& v) {
      return {u[0] + v[0], u[1] + v[1], u[2] + v[2]};
    }

    Vec3 normalized(Vec3 v) {
      return scale(v, 1.0 / std::sqrt(dot(v, v)));
    }

    Vec3 cross(Vec3 const& u, Vec3 const& v) {
      return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    }

    // Bilinear form of a^2 + bc on (a, b, c).
    double form(Vec3 const& u, Vec3 const& v) {
      return u[0] * v[0] + 0.5 * (u[1] * v[2] + u[2] * v[1]);
    }

    double dist2(Vec3 const& u, Vec3 const& v) {
      Vec3 const d{u[0] - v[0], u[1] - v[1], u[2] - v[2]};
      return dot(d, d);
    }

    InvolutionMatrix make(Vec3 const& p) {
      // Rounding grows with the size of the entries.
      double const size = std::max({1.0, p[0] * p[0], std::abs(p[1] * p[2])});
      return InvolutionMatrix(p[0], p[1], p[2], tau_alg * size);
    }
  }  // namespace

  PlaneSection::PlaneSection(PlaneCoefficients p) : _p(p) {
    if (p.c1 == 0.0 && p.c2 == 0.0 && p.c3 == 0.0) {
      fail(ErrorCode::invalid_input, "plane coefficients are all zero");
    }
    if (!std::isfinite(p.c1) || !std::isfinite(p.c2) || !std::isfinite(p.c3)) {
      fail(ErrorCode::invalid_input, "plane coefficients must be finite");
    }
    if (p.c1 == 0.0 && p.c2 != 0.0 && p.c3 != 0.0) {
      _canonical = true;
      _kind      = p.c2 * p.c3 > 0 ? ConicKind::hyperbola : ConicKind::ellipse;
      _k         = std::sqrt(std::abs(p.c2 / p.c3));
      return;
    }
    Vec3 const n = normalized({2 * p.c1, p.c3, p.c2});
    // Start the in-plane basis from the axis least aligned with the normal.
    std::size_t axis = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (std::abs(n[i]) < std::abs(n[axis])) {
        axis = i;
      }
    }
    Vec3 e{};
    e[axis]      = 1.0;
    Vec3 const u = normalized(add(e, scale(n, -dot(e, n))));
    Vec3 const v = cross(n, u);
    double const q11 = form(u, u), q12 = form(u, v), q22 = form(v, v);
    double const mid = 0.5 * (q11 + q22);
    double const rad = std::hypot(0.5 * (q11 - q22), q12);
    _l1              = mid + rad;
    _l2              = mid - rad;
    Vec3 d1          = std::abs(q12) > eig_eps ? add(scale(u, q12), scale(v, _l1 - q11))
                       : q11 >= q22            ? u
                                               : v;
    _e1 = normalized(d1);
    _e2 = cross(n, _e1);
    if (_l1 <= eig_eps) {
      fail(ErrorCode::domain, "the plane does not meet a^2 + bc = 1");
    }
    if (_l2 > eig_eps) {
      _kind = ConicKind::ellipse;
    } else if (_l2 < -eig_eps) {
      _kind = ConicKind::hyperbola;
    } else {
      _kind = ConicKind::lines;
    }
  }

  std::array<double, 3> PlaneSection::point(double t, std::size_t branch) const {
    if (branch >= branches()) {
      fail(ErrorCode::invalid_input, "conic branch out of range");
    }
    double const sign = branch == 0 ? 1.0 : -1.0;
    if (_canonical) {
      if (_kind == ConicKind::hyperbola) {
        return scale({std::cosh(t), _k * std::sinh(t), -std::sinh(t) / _k}, sign);
      }
      return {std::cos(t), _k * std::sin(t), std::sin(t) / _k};
    }
    switch (_kind) {
      case ConicKind::ellipse:
        return add(scale(_e1, std::cos(t) / std::sqrt(_l1)), scale(_e2, std::sin(t) / std::sqrt(_l2)));
      case ConicKind::hyperbola:
        return add(scale(_e1, sign * std::cosh(t) / std::sqrt(_l1)), scale(_e2, std::sinh(t) / std::sqrt(-_l2)));
      case ConicKind::lines:
        return add(scale(_e1, sign / std::sqrt(_l1)), scale(_e2, t));
    }
    return {};
  }

  InvolutionMatrix PlaneSection::at(double t, std::size_t branch) const {
    return make(point(t, branch));
  }

  InvolutionMatrix PlaneSection::nearest(std::array<double, 3> const& q) const {
    Vec3   best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < branches(); ++b) {
      auto f = [&](double t) { return dist2(point(t, b), q); };
      if (!_canonical && _kind == ConicKind::lines) {
        // The line s e1 + t e2 has unit direction e2.
        double const t = dot(q, _e2);
        if (f(t) < best_d) {
          best_d = f(t);
          best   = point(t, b);
        }
        continue;
      }
      double lo = 0.0, hi = 2 * std::numbers::pi;
      std::size_t samples = 720;
      if (_kind == ConicKind::hyperbola) {
        double const reach = std::sqrt(dot(q, q)) + std::sqrt(f(0.0)) + 1.0;
        double const grow =
            _canonical ? 1.0 : std::sqrt(std::max(std::abs(_l1), std::abs(_l2)));
        hi      = std::acosh(std::max(1.0, reach * grow)) + 1.0;
        lo      = -hi;
        samples = 2000;
      }
      double const step = (hi - lo) / static_cast<double>(samples);
      std::size_t  arg  = 0;
      for (std::size_t k = 1; k <= samples; ++k) {
        if (f(lo + k * step) < f(lo + arg * step)) {
          arg = k;
        }
      }
      double const t0  = lo + (static_cast<double>(arg) - 1.0) * step;
      double const t1  = lo + (static_cast<double>(arg) + 1.0) * step;
      auto const   res = boost::math::tools::brent_find_minima(f, t0, t1, std::numeric_limits<double>::digits);
      if (res.second < best_d) {
        best_d = res.second;
        best   = point(res.first, b);
      }
    }
    return make(best);
  }

  PlaneSection plane_section_solution(PlaneCoefficients const& p) {
    return PlaneSection(p);
  }

  InvolutionMatrix lform_first(double t, double L) {
    if (L == 0.0) {
      fail(ErrorCode::invalid_input, "L must be nonzero");
    }
    double const ch = std::cosh(t), sh = std::sinh(t);
    return make({sh - ch, (ch - sh) / L, 2 * L * sh});
  }

  InvolutionMatrix lform_second(double t, double L) {
    if (L == 0.0) {
      fail(ErrorCode::invalid_input, "L must be nonzero");
    }
    return make({std::cosh(t), std::sinh(t) / L, -L * std::sinh(t)});
  }

  OdeField solve_ode_field(std::function<double(double)> c2,
                           std::function<double(double)> c3,
                           std::function<double(double)> r) {
    constexpr std::size_t samples = 257;
    double const          ratio   = c2(0.0) / c3(0.0);
    double const          sign    = c2(0.0) * c3(0.0);
    for (std::size_t k = 0; k < samples; ++k) {
      double const y = static_cast<double>(k) / (samples - 1);
      double const p = c2(y) * c3(y);
      if (!std::isfinite(p) || p == 0.0 || (p > 0) != (sign > 0)) {
        fail(ErrorCode::invalid_input, "C2 C3 must keep one sign and not vanish on [0, 1]");
      }
      if (std::abs(c2(y) / c3(y) - ratio) > 1e-9 * std::abs(ratio)) {
        fail(ErrorCode::invalid_input, "C2 / C3 must be constant on [0, 1]");
      }
    }
    PlaneSection const section({0.0, c2(0.0), c3(0.0)});
    auto rate = [c2, c3](double y) {
      return std::copysign(std::sqrt(std::abs(c2(y) * c3(y))), c2(y));
    };
    auto t = [rate, r](Point p) {
      double integral = 0.0;
      if (p.y != 0.0) {
        double error = 0.0;
        integral     = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(rate, 0.0, p.y, 15, 1e-13,
                                                                                    &error);
        if (!std::isfinite(integral) || error > 1e-9 * std::max(1.0, std::abs(integral))) {
          fail(ErrorCode::numerical, "quadrature of sqrt(C2 C3) did not converge");
        }
      }
      return integral + r(p.x);
    };
    InvolutionField field([section, t](Point p) {
      auto const m = section.at(t(p));
      return std::array{m.a(), m.b(), m.c()};
    });
    return {std::move(field), t, std::move(c2), std::move(c3), section.kind()};
  }

  OdeFieldCheck check_ode_field(OdeField const& f, std::size_t points, double h) {
    if (points == 0 || !(h > 0.0) || 2 * h >= 1.0) {
      fail(ErrorCode::invalid_input, "check grid needs points >= 1 and 0 < h < 1/2");
    }
    OdeFieldCheck out;
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t j = 0; j < points; ++j) {
        double const x = (static_cast<double>(i) + 0.5) / static_cast<double>(points);
        double const y = h + (static_cast<double>(j) + 0.5) * (1.0 - 2 * h) / static_cast<double>(points);
        Matrix2 const a  = f.field.matrix({x, y});
        Matrix2 const ay = (f.field.matrix({x, y + h}) - f.field.matrix({x, y - h})) * (0.5 / h);
        Matrix2 const c{0.0, f.c2(y), f.c3(y), 0.0};
        Matrix2 const d = a * ay;
        out.equation          = std::max(out.equation, norm_max(d - c));
        out.anticommutator    = std::max(out.anticommutator, norm_max(a * c + c * a));
        out.fd_anticommutator = std::max(out.fd_anticommutator, norm_max(a * d + d * a));
      }
    }
    return out;
  }

  InvolutionField project_to_plane(InvolutionField field, PlaneCoefficients const& p) {
    PlaneSection const section(p);
    return InvolutionField([field = std::move(field), section](Point q) {
      auto const m = field.at(q);
      auto const n = section.nearest({m.a(), m.b(), m.c()});
      return std::array{n.a(), n.b(), n.c()};
    });
  }

}  // namespace balance_nets
