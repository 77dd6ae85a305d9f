#include "balance_nets/smoothfield/field.hpp"

#include <cmath>
#include <string>

#include "balance_nets/error.hpp"
#include "balance_nets/simd/kernels.hpp"

namespace balance_nets {

  namespace {
    constexpr double domain_slack = 1e-12;

    void check_steps(std::size_t n, Parity parity) {
      if (n < 2) {
        fail(ErrorCode::invalid_input, "a P-integral needs at least 2 steps");
      }
      if ((n % 2 == 0) != (parity == Parity::even)) {
        fail(ErrorCode::invalid_input,
             std::string(parity == Parity::even ? "P2" : "P1") + " integral needs an " +
                 (parity == Parity::even ? "even" : "odd") + " step count, got " + std::to_string(n));
      }
    }

    // Structure-of-arrays buffer of 2x2 matrices.
    struct Mat2Buffer {
      std::vector<double> m00, m01, m10, m11;

      explicit Mat2Buffer(std::size_t n) : m00(n), m01(n), m10(n), m11(n) {}

      void set(std::size_t k, Matrix2 const& m) {
        m00[k] = m.m00;
        m01[k] = m.m01;
        m10[k] = m.m10;
        m11[k] = m.m11;
      }

      Matrix2 get(std::size_t k) const {
        return {m00[k], m01[k], m10[k], m11[k]};
      }

      simd::Mat2View view() const {
        return {m00, m01, m10, m11};
      }

      simd::Mat2MutView mut() {
        return {m00, m01, m10, m11};
      }
    };

    double midpoint(ParameterizedCurve const& curve, std::size_t n, std::size_t k) {
      double const ds = (curve.s1() - curve.s0()) / static_cast<double>(n);
      return curve.s0() + (static_cast<double>(k) + 0.5) * ds;
    }
  }  // namespace

  void check_domain(Point p) {
    auto inside = [](double v) { return v >= -domain_slack && v <= 1.0 + domain_slack; };
    if (!inside(p.x) || !inside(p.y) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::domain,
           "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is outside the unit square");
    }
  }

  ParameterizedCurve::ParameterizedCurve(Map map, double s0, double s1)
      : _map(std::move(map)), _s0(s0), _s1(s1) {
    if (!(s1 > s0)) {
      fail(ErrorCode::invalid_input, "curve parameter interval is empty");
    }
    check_domain(_map(s0));
    check_domain(_map(s1));
  }

  ParameterizedCurve ParameterizedCurve::segment(Point from, Point to) {
    return ParameterizedCurve(
        [from, to](double s) { return Point{from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)}; },
        0.0, 1.0);
  }

  ParameterizedCurve ParameterizedCurve::polyline(std::vector<Point> points) {
    if (points.size() < 2) {
      fail(ErrorCode::invalid_input, "a polyline needs at least two points");
    }
    for (auto const& p : points) {
      check_domain(p);
    }
    double const pieces = static_cast<double>(points.size() - 1);
    return ParameterizedCurve(
        [pts = std::move(points)](double s) {
          auto const k = static_cast<std::size_t>(
              std::clamp(std::floor(s), 0.0, static_cast<double>(pts.size() - 2)));
          double const u = s - static_cast<double>(k);
          return Point{pts[k].x + u * (pts[k + 1].x - pts[k].x), pts[k].y + u * (pts[k + 1].y - pts[k].y)};
        },
        0.0, pieces);
  }

  Point ParameterizedCurve::at(double s) const {
    return _map(s);
  }

  ParameterizedCurve ParameterizedCurve::reversed() const {
    return ParameterizedCurve([map = _map, s0 = _s0, s1 = _s1](double s) { return map(s0 + s1 - s); },
                              _s0, _s1);
  }

  InvolutionField::InvolutionField(Triple f, double tol) : _f(std::move(f)), _tol(tol) {
    if (!_f) {
      fail(ErrorCode::invalid_input, "field needs an evaluator");
    }
  }

  InvolutionField InvolutionField::constant(InvolutionMatrix const& a) {
    return InvolutionField([abc = std::array{a.a(), a.b(), a.c()}](Point) { return abc; });
  }

  InvolutionField InvolutionField::rotation(std::function<double(Point)> angle) {
    return InvolutionField([angle = std::move(angle)](Point p) {
      double const t = angle(p);
      return std::array{std::cos(t), std::sin(t), std::sin(t)};
    });
  }

  InvolutionMatrix InvolutionField::at(Point p) const {
    check_domain(p);
    auto const [a, b, c] = _f(p);
    return InvolutionMatrix(a, b, c, _tol);
  }

  ComplexInvolutionField::ComplexInvolutionField(Potential z, double tol) : _z(std::move(z)), _tol(tol) {
    if (!_z) {
      fail(ErrorCode::invalid_input, "field needs a potential");
    }
  }

  CMatrix2 ComplexInvolutionField::at(Point p) const {
    check_domain(p);
    std::complex<double> const z  = _z(p);
    double const               zz = std::norm(z);
    if (zz > (1.0 + _tol) * (1.0 + _tol)) {
      fail(ErrorCode::domain, "complex potential has |z| > 1");
    }
    double const a = std::sqrt(std::max(0.0, 1.0 - zz));
    return {a, z, std::conj(z), -a};
  }

  bool ComplexInvolutionField::on_boundary(Point p) const {
    return std::abs(std::abs(_z(p)) - 1.0) <= _tol;
  }

  Matrix2 p_integral(InvolutionField const& field, ParameterizedCurve const& curve, std::size_t n, Parity parity) {
    check_steps(n, parity);
    Mat2Buffer buf(n);
    for (std::size_t k = 0; k < n; ++k) {
      buf.set(k, field.matrix(curve.at(midpoint(curve, n, k))));
    }
    auto const m = simd::mat2_ordered_product(buf.view());
    return {m[0], m[1], m[2], m[3]};
  }

  CMatrix2 p_integral(ComplexInvolutionField const& field,
                      ParameterizedCurve const&     curve,
                      std::size_t                   n,
                      Parity                        parity) {
    check_steps(n, parity);
    CMatrix2 out = CMatrix2::identity();
    for (std::size_t k = 0; k < n; ++k) {
      out = out * field.at(curve.at(midpoint(curve, n, k)));
    }
    return out;
  }

  PIntegralReport p_integral_report(InvolutionField const&    field,
                                    ParameterizedCurve const& curve,
                                    std::size_t               n,
                                    Parity                    parity) {
    PIntegralReport rep;
    rep.value         = p_integral(field, curve, n, parity);
    rep.det           = rep.value.det();
    rep.refined_steps = parity == Parity::even ? 2 * n : 2 * n + 1;
    rep.refined       = p_integral(field, curve, rep.refined_steps, parity);
    rep.change        = norm_max(rep.refined - rep.value);
    double const want = parity == Parity::even ? 1.0 : -1.0;
    rep.parity_law    = std::abs(rep.det - want) <= tau_num && std::abs(rep.refined.det() - want) <= tau_num;
    return rep;
  }

  namespace {
    struct Stencil {
      Matrix2 a, ax, ay, axy;
    };

    Stencil stencil(InvolutionField const& field, Point p, double h) {
      if (!(h > 0.0) || p.x - h < -domain_slack || p.x + h > 1.0 + domain_slack || p.y - h < -domain_slack ||
          p.y + h > 1.0 + domain_slack) {
        fail(ErrorCode::domain, "residual stencil leaves the unit square");
      }
      auto A = [&](double dx, double dy) { return field.matrix({p.x + dx, p.y + dy}); };
      Stencil s;
      s.a   = A(0, 0);
      s.ax  = (A(h, 0) - A(-h, 0)) * (0.5 / h);
      s.ay  = (A(0, h) - A(0, -h)) * (0.5 / h);
      s.axy = (A(h, h) - A(h, -h) - A(-h, h) + A(-h, -h)) * (0.25 / (h * h));
      return s;
    }
  }  // namespace

  Residual infinitesimal_residual(InvolutionField const& field, Point p, double h) {
    Stencil const s = stencil(field, p, h);
    Residual      r;
    r.value = s.a * s.axy + s.ay * s.ax;
    r.norm  = norm_max(r.value);
    return r;
  }

  std::vector<double> residual_grid(InvolutionField const& field, std::size_t points, double h) {
    if (points == 0 || !(h > 0.0) || 2 * h >= 1.0) {
      fail(ErrorCode::invalid_input, "residual grid needs points >= 1 and 0 < h < 1/2");
    }
    std::size_t const N = points * points;
    Mat2Buffer        a(N), ax(N), ay(N), axy(N), out(N);
    double const      span = 1.0 - 2.0 * h;
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t j = 0; j < points; ++j) {
        Point const p{h + (static_cast<double>(i) + 0.5) * span / static_cast<double>(points),
                      h + (static_cast<double>(j) + 0.5) * span / static_cast<double>(points)};
        Stencil const s = stencil(field, p, h);
        std::size_t const k = i * points + j;
        a.set(k, s.a);
        ax.set(k, s.ax);
        ay.set(k, s.ay);
        axy.set(k, s.axy);
      }
    }
    simd::mat2_mul_add_batch(a.view(), axy.view(), ay.view(), ax.view(), out.mut());
    std::vector<double> norms(N);
    for (std::size_t k = 0; k < N; ++k) {
      norms[k] = norm_max(out.get(k));
    }
    return norms;
  }

  std::vector<double> convergence_orders(std::span<double const> hs, std::span<double const> norms) {
    if (hs.size() != norms.size()) {
      fail(ErrorCode::invalid_input, "step and norm lists differ in length");
    }
    std::vector<double> orders;
    for (std::size_t k = 0; k + 1 < hs.size(); ++k) {
      orders.push_back(std::log(norms[k] / norms[k + 1]) / std::log(hs[k] / hs[k + 1]));
    }
    return orders;
  }

}  // namespace balance_nets
