#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "balance_nets/error.hpp"
#include "balance_nets/smoothfield/conic.hpp"
#include "balance_nets/smoothfield/discretize.hpp"
#include "balance_nets/smoothfield/field.hpp"
#include "test_support.hpp"

using namespace balance_nets;
using namespace balance_nets::testing;

namespace {
  Matrix2 const E = Matrix2::identity();

  Matrix2 rotation_reflection(double t) {
    return {std::cos(t), std::sin(t), std::sin(t), -std::cos(t)};
  }

  // Product over midpoints written out directly, without the batch kernel.
  Matrix2 naive_integral(InvolutionField const& f, ParameterizedCurve const& c, std::size_t n) {
    Matrix2      m  = E;
    double const ds = (c.s1() - c.s0()) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) m = m * f.matrix(c.at(c.s0() + (static_cast<double>(k) + 0.5) * ds));
    return m;
  }

  double on_surface(InvolutionMatrix const& m) {
    return std::abs(m.a() * m.a() + m.b() * m.c() - 1.0);
  }

  double on_plane(InvolutionMatrix const& m, PlaneCoefficients const& p) {
    return std::abs(2 * m.a() * p.c1 + m.c() * p.c2 + m.b() * p.c3);
  }

  // The x-only field of the numerical example: A(t) with t = x.
  InvolutionField angle_field() {
    return InvolutionField::rotation([](Point p) { return p.x; });
  }

  ParameterizedCurve sine_path() {
    return ParameterizedCurve([](double s) { return Point{std::sin(s), 0.0}; }, 0.0, std::numbers::pi / 2);
  }

  ParameterizedCurve power_path(int m) {
    return ParameterizedCurve([m](double s) { return Point{std::pow(s, m), 0.0}; }, 0.0, 1.0);
  }

  // A potential field that is not linear in (x, y).
  OdeField curved_field() {
    return solve_ode_field([](double y) { return 1.0 + y; }, [](double y) { return 1.0 + y; },
                           [](double x) { return x * x; });
  }

  InvolutionField skew_field() {
    return InvolutionField([](Point p) {
      double const a = p.x * p.y;
      double const b = std::sqrt(1 - a * a);
      return std::array{a, b, b};
    });
  }
}  // namespace

TEST_CASE("curves and fields", "[smoothfield]") {
  auto const seg = ParameterizedCurve::segment({0.1, 0.2}, {0.5, 0.9});
  REQUIRE(seg.at(0.5).x == Approx(0.3));
  REQUIRE(seg.at(0.5).y == Approx(0.55));
  REQUIRE(seg.reversed().at(0.0).x == Approx(0.5));
  REQUIRE(seg.reversed().at(0.0).y == Approx(0.9));
  auto const poly = ParameterizedCurve::polyline({{0, 0}, {1, 0}, {1, 1}});
  REQUIRE(poly.s1() == 2.0);
  REQUIRE(poly.at(1.5) == Point{1.0, 0.5});
  REQUIRE_THROWS_AS(ParameterizedCurve::segment({0, 0}, {1.5, 0}), Error);
  REQUIRE_THROWS_AS(ParameterizedCurve([](double) { return Point{}; }, 1.0, 1.0), Error);

  InvolutionField const bad([](Point) { return std::array{0.5, 1.0, 1.0}; });
  REQUIRE_THROWS_AS(bad.at({0.5, 0.5}), Error);
  REQUIRE_THROWS_AS(angle_field().at({1.2, 0.5}), Error);
  REQUIRE(angle_field().matrix({0.3, 0.7}) == rotation_reflection(0.3));
}

TEST_CASE("P-integrals of constant fields", "[smoothfield]") {
  InvolutionMatrix const a(0.6, 0.8, 0.8);
  auto const             f    = InvolutionField::constant(a);
  auto const             loop = ParameterizedCurve::polyline({{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.7}, {0.2, 0.2}});
  REQUIRE(approx_equal(p_integral(f, loop, 2, Parity::even), E, 1e-15));
  REQUIRE(approx_equal(p_integral(f, loop, 3, Parity::odd), a.matrix(), 1e-15));
  REQUIRE_THROWS_AS(p_integral(f, loop, 3, Parity::even), Error);
  REQUIRE_THROWS_AS(p_integral(f, loop, 4, Parity::odd), Error);
  REQUIRE_THROWS_AS(p_integral(f, loop, 1, Parity::odd), Error);
}

TEST_CASE("P-integral matches the unbatched product", "[smoothfield]") {
  auto const f = curved_field();
  auto const c = ParameterizedCurve::segment({0.05, 0.1}, {0.9, 0.8});
  for (std::size_t n : {2UL, 3UL, 64UL, 257UL}) {
    Parity const parity = n % 2 == 0 ? Parity::even : Parity::odd;
    auto const   want   = naive_integral(f.field, c, n);
    REQUIRE(approx_equal(p_integral(f.field, c, n, parity), want, 1e-10 * std::max(1.0, norm_max(want))));
  }
}

TEST_CASE("closed loop over two parameterizations", "[smoothfield]") {
  auto const f = angle_field();
  for (int m : {2, 3}) {
    double previous = 1.0;
    for (std::size_t n : {256UL, 512UL, 1024UL}) {
      Matrix2 const loop = p_integral(f, sine_path(), n, Parity::even) *
                           p_integral(f, power_path(m).reversed(), n, Parity::even);
      double const err = norm_max(loop - E);
      REQUIRE(err < previous);
      previous = err;
      if (n == 1024) REQUIRE(err < tau_num);
    }
  }
  // A(s) A(t) is the rotation by s - t, so the P2 integral is the rotation by
  // the alternating sum of the sampled angles.
  std::size_t const n   = 1024;
  auto const        c   = power_path(3);
  double            sum = 0.0;
  for (std::size_t k = 0; k < n; k += 2) {
    sum += std::pow((k + 0.5) / n, 3) - std::pow((k + 1.5) / n, 3);
  }
  Matrix2 const rot{std::cos(sum), -std::sin(sum), std::sin(sum), std::cos(sum)};
  REQUIRE(approx_equal(p_integral(f, c, n, Parity::even), rot, 1e-12));

  for (std::size_t steps : {3UL, 4UL, 1025UL, 1024UL}) {
    Parity const parity = steps % 2 == 0 ? Parity::even : Parity::odd;
    auto const   rep    = p_integral_report(f, sine_path(), steps, parity);
    REQUIRE(rep.parity_law);
    REQUIRE(rep.refined_steps % 2 == steps % 2);
  }
}

TEST_CASE("complex potential fields", "[smoothfield]") {
  ComplexInvolutionField const f([](Point p) { return std::polar(0.5 + 0.5 * p.y, 3.0 * p.x); });
  for (double x : {0.0, 0.3, 1.0}) {
    for (double y : {0.0, 0.6}) {
      CMatrix2 const a = f.at({x, y});
      REQUIRE(norm_max(a * a - CMatrix2::identity()) < 1e-15);
      REQUIRE(std::abs(a.det() + 1.0) < 1e-15);
    }
  }
  REQUIRE(f.on_boundary({0.4, 1.0}));
  REQUIRE_FALSE(f.on_boundary({0.4, 0.5}));
  REQUIRE(f.at({0.4, 1.0}).m00 == 0.0);
  ComplexInvolutionField const outside([](Point) { return std::complex<double>(1.1, 0.0); });
  REQUIRE_THROWS_AS(outside.at({0.5, 0.5}), Error);

  auto const loop = ParameterizedCurve::polyline({{0.1, 0.1}, {0.9, 0.2}, {0.1, 0.1}});
  ComplexInvolutionField const constant([](Point) { return std::complex<double>(0.3, 0.4); });
  REQUIRE(norm_max(p_integral(constant, loop, 2, Parity::even) - CMatrix2::identity()) < 1e-15);
  REQUIRE(std::abs(p_integral(f, loop, 9, Parity::odd).det() + 1.0) < 1e-12);
}

TEST_CASE("infinitesimal residual", "[smoothfield]") {
  auto const constant = InvolutionField::constant(InvolutionMatrix(0.6, 0.8, 0.8));
  REQUIRE(infinitesimal_residual(constant, {0.5, 0.5}, 1e-2).norm == 0.0);

  std::vector<double> const hs{1e-2, 5e-3, 2.5e-3};
  auto const                field = curved_field().field;
  for (Point p : {Point{0.5, 0.5}, Point{0.3, 0.7}}) {
    std::vector<double> norms;
    for (double h : hs) norms.push_back(infinitesimal_residual(field, p, h).norm);
    for (std::size_t k = 0; k < hs.size(); ++k) REQUIRE(norms[k] < 10 * hs[k] * hs[k]);
    for (double order : convergence_orders(hs, norms)) {
      REQUIRE(order > 1.8);
      REQUIRE(order < 2.2);
    }
  }

  for (double h : hs) REQUIRE(infinitesimal_residual(skew_field(), {0.5, 0.5}, h).norm > 1e-3);
  REQUIRE_THROWS_AS(infinitesimal_residual(field, {0.005, 0.5}, 1e-2), Error);

  auto const grid = residual_grid(skew_field(), 4, 1e-3);
  REQUIRE(grid.size() == 16);
  double const span = 1.0 - 2e-3;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      Point const p{1e-3 + (i + 0.5) * span / 4, 1e-3 + (j + 0.5) * span / 4};
      REQUIRE(grid[i * 4 + j] == Approx(infinitesimal_residual(skew_field(), p, 1e-3).norm).epsilon(1e-12));
    }
  }
}

TEST_CASE("canonical plane sections", "[smoothfield]") {
  PlaneSection const hyp({0.0, 1.0, 1.0});
  REQUIRE(hyp.kind() == ConicKind::hyperbola);
  REQUIRE(hyp.canonical());
  for (double t : {-1.5, 0.0, 0.4, 2.0}) {
    Matrix2 const want{std::cosh(t), std::sinh(t), -std::sinh(t), -std::cosh(t)};
    auto const    m = hyp.at(t);
    REQUIRE(approx_equal(m.matrix(), want, 1e-15));
    REQUIRE(on_surface(m) < tau_alg * std::cosh(t) * std::cosh(t));
    REQUIRE(on_plane(m, hyp.plane()) < tau_alg);
  }
  PlaneSection const ell({0.0, 1.0, -1.0});
  REQUIRE(ell.kind() == ConicKind::ellipse);
  for (double t = 0; t < 6.3; t += 0.1) {
    REQUIRE(on_surface(ell.at(t)) < tau_alg);
    REQUIRE(on_plane(ell.at(t), ell.plane()) < tau_alg);
    REQUIRE(approx_equal(ell.at(t).matrix(), rotation_reflection(t), 1e-15));
  }
  PlaneSection const lines({0.0, 0.0, 1.0});
  REQUIRE(lines.kind() == ConicKind::lines);
  REQUIRE(std::abs(std::abs(lines.at(0.7).a()) - 1.0) < tau_alg);
  REQUIRE_THROWS_AS(PlaneSection({0.0, 0.0, 0.0}), Error);
}

TEST_CASE("random plane sections satisfy both equations", "[smoothfield]") {
  std::mt19937_64                        rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    PlaneCoefficients const p{trial % 5 == 0 ? 0.0 : u(rng), u(rng), u(rng)};
    PlaneSection const      s(p);
    for (std::size_t b = 0; b < s.branches(); ++b) {
      for (double t = -2.0; t <= 2.0; t += 0.25) {
        auto const   m     = s.at(t, b);
        double const scale = std::max({1.0, m.a() * m.a(), std::abs(m.b() * m.c())});
        REQUIRE(on_surface(m) < tau_alg * scale);
        double const size = std::max({1.0, std::abs(m.a()), std::abs(m.b()), std::abs(m.c())});
        REQUIRE(on_plane(m, p) < tau_alg * size * std::max({1.0, std::abs(p.c1), std::abs(p.c2), std::abs(p.c3)}));
      }
    }
  }
}

TEST_CASE("displayed L-forms", "[smoothfield]") {
  for (double L : {0.5, 1.0, -2.0}) {
    for (double t : {-1.0, 0.0, 0.8}) {
      auto const f1 = lform_first(t, L);
      auto const f2 = lform_second(t, L);
      REQUIRE(approx_equal(f1.matrix() * f1.matrix(), E, 1e-12));
      REQUIRE(approx_equal(f2.matrix() * f2.matrix(), E, 1e-12));
      REQUIRE(on_plane(f1, {1.0, 0.0, 2 * L}) < 1e-12);
      REQUIRE(on_plane(f2, {0.0, 1.0, L * L}) < 1e-12);
    }
  }
  REQUIRE_THROWS_AS(lform_first(0.1, 0.0), Error);
}

TEST_CASE("fields from the reduced equation", "[smoothfield]") {
  auto one  = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  auto const base = solve_ode_field(one, one, zero);
  REQUIRE(base.kind == ConicKind::hyperbola);
  REQUIRE(base.t({0.3, 0.6}) == Approx(0.6).epsilon(1e-14));
  auto const check = check_ode_field(base, 10, 1e-4);
  REQUIRE(check.equation < 1e-6);
  REQUIRE(check.anticommutator < 1e-12);

  auto const shifted = solve_ode_field(one, one, [](double x) { return x; });
  REQUIRE(check_ode_field(shifted, 20, 1e-4).anticommutator < tau_num);
  REQUIRE(check_ode_field(shifted, 20, 1e-4).fd_anticommutator < tau_num);

  auto const flat = solve_ode_field(one, one, [](double) { return 0.25; });
  for (double y : {0.1, 0.5, 0.9}) REQUIRE(flat.field.matrix({0.1, y}) == flat.field.matrix({0.8, y}));

  auto const ell = solve_ode_field([](double y) { return 2.0 + y; }, [](double y) { return -(2.0 + y) / 4.0; },
                                   [](double x) { return std::sin(x); });
  REQUIRE(ell.kind == ConicKind::ellipse);
  REQUIRE(check_ode_field(ell, 10, 1e-4).equation < 1e-6);

  REQUIRE_THROWS_AS(solve_ode_field([](double y) { return y - 0.5; }, one, zero), Error);
  REQUIRE_THROWS_AS(solve_ode_field([](double y) { return 1.0 + y; }, one, zero), Error);
}

TEST_CASE("P2 integrals of solved fields ignore the parameterization", "[smoothfield]") {
  auto const   f = curved_field();
  Point const  a{0.1, 0.2}, b{0.8, 0.9};
  auto const   lin = ParameterizedCurve::segment(a, b);
  auto const   sq  = ParameterizedCurve(
      [a, b](double s) { return Point{a.x + s * s * (b.x - a.x), a.y + s * s * (b.y - a.y)}; }, 0.0, 1.0);
  REQUIRE(approx_equal(p_integral(f.field, lin, 1024, Parity::even), p_integral(f.field, sq, 1024, Parity::even),
                       tau_num));

  auto const loop = ParameterizedCurve::polyline({{0.1, 0.1}, {0.9, 0.3}, {0.4, 0.9}, {0.1, 0.1}});
  // Along one family of commuting reflections the loop closes to rounding.
  for (std::size_t n : {6UL, 96UL, 1536UL}) {
    REQUIRE(norm_max(p_integral(f.field, loop, n, Parity::even) - E) < 1e-12);
  }
}

TEST_CASE("projection onto a plane section", "[smoothfield]") {
  PlaneCoefficients const p{0.0, 1.0, 1.0};
  PlaneSection const      s(p);
  auto const              on = s.at(0.7);
  auto const              same = s.nearest({on.a(), on.b(), on.c()});
  REQUIRE(approx_equal(same.matrix(), on.matrix(), tau_num));

  double const b    = std::sqrt(0.75);
  auto const   proj = s.nearest({0.5, b, b});
  REQUIRE(on_surface(proj) < tau_alg);
  REQUIRE(on_plane(proj, p) < tau_alg);
  auto dist = [&](double a0, double b0, double c0) {
    return std::hypot(a0 - 0.5, b0 - b, c0 - b);
  };
  double best = 1e9;
  for (double t = -5; t <= 5; t += 1e-4) {
    best = std::min(best, dist(std::cosh(t), std::sinh(t), -std::sinh(t)));
    best = std::min(best, dist(-std::cosh(t), -std::sinh(t), std::sinh(t)));
  }
  REQUIRE(dist(proj.a(), proj.b(), proj.c()) <= best + 1e-9);

  std::mt19937_64                        rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double const            k1 = u(rng), k2 = u(rng), k3 = u(rng);
    InvolutionField const   raw([=](Point q) {
      double const a  = 0.6 * std::sin(k1 * q.x + k2 * q.y);
      double const bb = std::exp(k3 * q.x * q.y);
      return std::array{a, bb, (1 - a * a) / bb};
    });
    PlaneCoefficients const plane{u(rng), u(rng), u(rng)};
    auto const              projected = project_to_plane(raw, plane);
    auto const              section   = PlaneSection(plane);
    for (double x : {0.0, 0.5, 1.0}) {
      for (double y : {0.2, 0.9}) {
        auto const   m     = projected.at({x, y});
        double const scale = std::max({1.0, m.a() * m.a(), std::abs(m.b() * m.c())});
        REQUIRE(on_surface(m) < tau_alg * scale);
        REQUIRE(on_plane(m, plane) < tau_alg * scale * 4);
        auto const again = section.nearest({m.a(), m.b(), m.c()});
        REQUIRE(approx_equal(again.matrix(), m.matrix(), tau_num));
      }
    }
  }
}

TEST_CASE("parity tags on graphs", "[smoothfield]") {
  auto const triangle = RelationGraph::complete(3);
  auto const valid    = valid_tag_assignments(triangle);
  REQUIRE(valid.size() == 4);
  std::size_t all_even = 0, two_odd = 0;
  for (auto const& tags : valid) {
    std::size_t odd = 0;
    for (auto const& [_, t] : tags) odd += t == Parity::odd;
    all_even += odd == 0;
    two_odd += odd == 2;
  }
  REQUIRE(all_even == 1);
  REQUIRE(two_odd == 3);
  REQUIRE(valid_tag_assignments(RelationGraph::cycle(4)).size() == 8);
  REQUIRE(valid_tag_assignments(RelationGraph::complete(4)).size() == 8);
}

TEST_CASE("discretization onto graphs", "[smoothfield]") {
  InvolutionMatrix const a(0.6, 0.8, 0.8);
  auto const             tri = shared(RelationGraph::complete(3));
  Embedding const        emb{{{0.2, 0.2}, {0.8, 0.3}, {0.5, 0.8}}, {}};
  DiscretizeOptions      opts;
  opts.even_steps = 2;
  opts.odd_steps  = 3;
  opts.tags       = {{{0, 1}, Parity::odd}, {{0, 2}, Parity::odd}};
  auto const d    = discretize(InvolutionField::constant(a), tri, emb, opts);
  REQUIRE(approx_equal(d.marking.at(0, 1), a.matrix(), 1e-15));
  REQUIRE(approx_equal(d.marking.at(2, 0), a.matrix(), 1e-15));
  REQUIRE(approx_equal(d.marking.at(1, 2), E, 1e-15));
  REQUIRE(approx_equal(d.marking.at(0, 1) * d.marking.at(1, 2) * d.marking.at(2, 0), E, 1e-15));
  REQUIRE(d.potential.potential);
  REQUIRE(d.relation_signs[*tri->edge_index(0, 1)] == -1);
  REQUIRE(d.relation_signs[*tri->edge_index(1, 2)] == 1);

  opts.tags = {{{0, 1}, Parity::odd}};
  REQUIRE_THROWS_AS(discretize(InvolutionField::constant(a), tri, emb, opts), Error);
  REQUIRE_THROWS_AS(discretize(skew_field(), tri, emb), Error);

  // K4 on grid corners over the cos/sin solution with a nonlinear R(x).
  auto const field = solve_ode_field([](double) { return 1.0; }, [](double) { return -1.0; },
                                     [](double x) { return x * x; });
  auto const k4 = shared(RelationGraph::complete(4));
  Embedding const grid{{{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}}, {}};
  for (auto const& tags : valid_tag_assignments(*k4)) {
    DiscretizeOptions o;
    o.tags       = tags;
    o.workers    = 3;
    auto const m = discretize(field.field, k4, grid, o);
    REQUIRE(m.potential.potential);
    // Every simple cycle through node 0.
    std::vector<std::vector<std::size_t>> cycles{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3},
                                                 {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}};
    for (auto const& c : cycles) {
      Matrix2 prod = E;
      for (std::size_t k = 0; k < c.size(); ++k) prod = prod * m.marking.at(c[k], c[(k + 1) % c.size()]);
      REQUIRE(norm_max(prod - E) < tau_num);
    }
  }
  REQUIRE_THROWS_AS(discretize(field.field, k4, emb), Error);
}
