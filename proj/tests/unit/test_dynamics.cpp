#include <catch2/catch.hpp>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "balance_nets/dynamics/core.hpp"
#include "balance_nets/dynamics/markov.hpp"
#include "balance_nets/error.hpp"
#include "balance_nets/potential/fields.hpp"
#include "balance_nets/potential/potential.hpp"
#include "test_support.hpp"

using namespace balance_nets;
using namespace balance_nets::testing;

namespace {
  struct Triangle {
    std::shared_ptr<ReactionGroup const> G = sign_group();
    GroupElement                         e = G->identity();
    GroupElement                         g = *G->find("g");

    Marking ex1() const { return gamma3({e, g, e}, G); }  // g12 = g23 = e, g31 = g
    Marking ex2() const { return gamma3({g, g, e}, G); }  // g12 = g13 = g, g23 = e
    Marking ex3() const { return gamma3({g, g, g}, G); }  // all g
  };

  // p(x -> y) by summing over all neighbour-choice tuples.
  double brute_probability(Marking const& r, ChoiceDistribution const& q,
                           SystemState const& x, SystemState const& y) {
    auto const&       graph = r.graph();
    std::size_t const n     = graph.node_count();
    double            total = 0.0;
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
      double w  = 1.0;
      bool   ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        auto const nb  = graph.neighbors(i);
        double     sum = 0.0;
        for (double v : q.weights[i]) sum += v;
        w *= q.weights[i][pick[i]] / sum;
        std::size_t const j = nb[pick[i]];
        ok = ok && r.group().apply(r.at(i, j), x[j]) == y[i];
      }
      if (ok) total += w;
      std::size_t i = n;
      while (i > 0 && ++pick[i - 1] == graph.degree(i - 1)) pick[--i] = 0;
      if (i == 0) break;
    }
    return total;
  }

  std::vector<Marking> symmetric_triangle_markings(Triangle const& t) {
    std::vector<Marking> out;
    for (int mask = 0; mask < 8; ++mask) {
      out.push_back(gamma3({mask & 1 ? t.g : t.e, mask & 2 ? t.g : t.e, mask & 4 ? t.g : t.e}, t.G));
    }
    return out;
  }
}  // namespace

TEST_CASE("the update map F", "[dynamics]") {
  Triangle const t;
  auto const     r = t.ex1();
  // F(x) = {x2, -x3} x {x1, x3} x {x2, -x1}
  for (std::size_t code = 0; code < 8; ++code) {
    SystemState const x{code >> 2 & 1U, code >> 1 & 1U, code & 1U};
    auto flip = [](std::size_t v) { return 1 - v; };
    std::set<SystemState> want;
    for (auto a : {x[1], flip(x[2])})
      for (auto b : {x[0], x[2]})
        for (auto c : {x[1], flip(x[0])}) want.insert({a, b, c});
    auto const got = apply_F(r, x);
    REQUIRE(std::set<SystemState>(got.begin(), got.end()) == want);
    REQUIRE(got.size() == want.size());
  }
  // (x, -x, x) -> (-x, x, -x)
  REQUIRE(apply_F(r, {0, 1, 0}) == std::vector<SystemState>{{1, 0, 1}});

  auto const ident = Marking::constant(k_graph(4), t.G, t.e);
  REQUIRE(apply_F(ident, {1, 1, 1, 1}) == std::vector<SystemState>{{1, 1, 1, 1}});
}

TEST_CASE("Markov matrix entries match a brute-force sum over choices", "[dynamics]") {
  Triangle const t;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (auto const& r : symmetric_triangle_markings(t)) {
    ChoiceDistribution q;
    for (std::size_t i = 0; i < 3; ++i) q.weights.push_back({u(rng), u(rng)});
    auto const p = build_markov(r, q);
    REQUIRE(p.size() == 8);
    for (std::size_t x = 0; x < 8; ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < 8; ++y) {
        double const want = brute_probability(r, q, p.space.decode(x), p.space.decode(y));
        REQUIRE(p.prob(x, y) == Approx(want).margin(1e-15));
        sum += p.prob(x, y);
      }
      REQUIRE(std::abs(sum - 1.0) < tau_dyn);
    }
  }
  // From (+, -, -) under ex. (1), (x2, x1, x2) needs choices 2, 1 and either
  // neighbour at node 3, whose two options coincide.
  ChoiceDistribution q{{{0.3, 0.7}, {0.6, 0.4}, {0.2, 0.8}}};
  auto const         p = build_markov(t.ex1(), q);
  REQUIRE(p.prob(p.space.index({0, 1, 1}), p.space.index({1, 0, 1})) == Approx(0.3 * 0.6));
}

TEST_CASE("Markov matrix agrees with simulation of the choice process", "[dynamics]") {
  auto const      S3 = std::make_shared<ReactionGroup const>(ReactionGroup::cyclic(3));
  std::mt19937_64 rng(2);
  auto const      graph = shared(RelationGraph::cycle(4));
  auto const      r     = random_marking(rng, graph, S3);
  ChoiceDistribution q{{{1, 2}, {3, 1}, {1, 1}, {2, 5}}};
  auto const         p = build_markov(r, q);
  REQUIRE(p.size() == 81);
  std::size_t const samples = 100000;
  for (std::size_t x : {0UL, 17UL, 40UL, 80UL}) {
    SystemState const          xs = p.space.decode(x);
    std::map<std::size_t, double> freq;
    for (std::size_t s = 0; s < samples; ++s) {
      SystemState y(4);
      for (std::size_t i = 0; i < 4; ++i) {
        std::discrete_distribution<std::size_t> pick(q.weights[i].begin(), q.weights[i].end());
        std::size_t const j = graph->neighbors(i)[pick(rng)];
        y[i] = S3->apply(r.at(i, j), xs[j]);
      }
      freq[p.space.index(y)] += 1.0 / samples;
    }
    for (std::size_t y = 0; y < p.size(); ++y) {
      double const pr    = p.prob(x, y);
      double const sigma = std::sqrt(pr * (1 - pr) / samples);
      REQUIRE(std::abs(freq[y] - pr) <= 3 * sigma + 1e-9);
    }
  }
}

TEST_CASE("exact mode and weight scaling", "[dynamics]") {
  Triangle const t;
  auto const     exact = build_markov(t.ex2(), {.exact = true});
  auto const     plain = build_markov(t.ex2());
  REQUIRE(exact.exact());
  REQUIRE(exact.denominator == 8);
  for (std::size_t x = 0; x < exact.size(); ++x) {
    std::uint64_t total = 0;
    for (std::size_t k = exact.row_ptr[x]; k < exact.row_ptr[x + 1]; ++k) {
      total += exact.numerators[k];
      REQUIRE(exact.probs[k] == plain.probs[k]);
    }
    REQUIRE(total == exact.denominator);
  }
  ChoiceDistribution scaled{{{5, 5}, {2, 2}, {7, 7}}};
  auto const         p2 = build_markov(t.ex2(), scaled);
  REQUIRE(p2.probs == plain.probs);
  REQUIRE_THROWS_AS(build_markov(t.ex2(), ChoiceDistribution{{{1, 2}, {1, 1}, {1, 1}}}, {.exact = true}),
                    Error);
  REQUIRE_THROWS_AS(build_markov(t.ex2(), {.bound_states = 4}), Error);
  auto const threaded = build_markov(t.ex1(), {.workers = 3});
  REQUIRE(threaded.probs == build_markov(t.ex1()).probs);
  REQUIRE(threaded.cols == build_markov(t.ex1()).cols);
}

TEST_CASE("two-node identity chain", "[dynamics]") {
  Triangle const t;
  auto const     r = Marking::constant(k_graph(2), t.G, t.e);
  auto const     p = build_markov(r);
  REQUIRE(p.size() == 4);
  for (std::size_t x = 0; x < 4; ++x) {
    auto const xs = p.space.decode(x);
    REQUIRE(p.prob(x, p.space.index({xs[1], xs[0]})) == 1.0);
  }
  auto const cs = analyze_classes(p);
  REQUIRE(cs.recurrent.size() == 3);
  REQUIRE(cs.periods == std::vector<std::size_t>{1, 2, 1});
}

TEST_CASE("stationary counts and limits of the triangle examples", "[dynamics]") {
  Triangle const t;
  auto const     p1 = build_markov(t.ex1());
  REQUIRE(stationary_count(p1) == 1);
  REQUIRE_FALSE(limit_exists(p1));
  auto const p2 = build_markov(t.ex2());
  REQUIRE(stationary_count(p2) == 2);
  REQUIRE(limit_exists(p2));
  auto const p3 = build_markov(t.ex3());
  REQUIRE(stationary_count(p3) == 1);
  REQUIRE_FALSE(limit_exists(p3));

  for (auto const& r : symmetric_triangle_markings(t)) {
    auto const p = build_markov(r);
    bool const pot = is_potential(r).potential;
    REQUIRE(limit_exists(p) == pot);
    REQUIRE((stationary_count(p) == 2) == pot);
  }
}

TEST_CASE("class analysis against a reachability oracle", "[dynamics]") {
  auto const      G = std::make_shared<ReactionGroup const>(ReactionGroup::symmetric(3));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto const graph = shared(random_connected_graph(rng, 4));
    auto const p     = build_markov(random_marking(rng, graph, G), {.bound_states = 4096});
    std::size_t const N = p.size();
    // Transitive closure by repeated BFS.
    std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
    for (std::size_t s = 0; s < N; ++s) {
      std::vector<std::size_t> todo{s};
      reach[s][s] = true;
      while (!todo.empty()) {
        std::size_t v = todo.back();
        todo.pop_back();
        for (std::size_t w : p.row_cols(v)) {
          if (!reach[s][w]) {
            reach[s][w] = true;
            todo.push_back(w);
          }
        }
      }
    }
    // x is recurrent iff everything reachable from x reaches back.
    std::size_t recurrent_states = 0;
    auto const  cs               = analyze_classes(p);
    for (std::size_t x = 0; x < N; ++x) {
      bool rec = true;
      for (std::size_t y = 0; y < N && rec; ++y) rec = !reach[x][y] || reach[y][x];
      REQUIRE(cs.class_of[x].has_value() == rec);
      recurrent_states += rec;
    }
    std::size_t listed = 0;
    for (auto const& c : cs.recurrent) listed += c.size();
    REQUIRE(listed == recurrent_states);
  }
}

TEST_CASE("core sets", "[dynamics]") {
  Triangle const t;
  auto const     c2 = core_set(t.ex2());
  REQUIRE(c2.states == std::vector<std::size_t>{3, 4});  // (x, -x, -x)
  REQUIRE(c2.closed);
  REQUIRE(c2.matches_closed_form);

  auto const c3 = core_set(t.ex3());
  REQUIRE(c3.states == std::vector<std::size_t>{0, 7});  // (x, x, x)
  REQUIRE(c3.matches_closed_form);

  auto const cycle = core_set(Marking::constant(shared(RelationGraph::cycle(4)), t.G, t.e));
  REQUIRE(cycle.bipartite);
  REQUIRE(cycle.states.size() == 4);
  REQUIRE(cycle.matches_closed_form);

  auto const      S3 = std::make_shared<ReactionGroup const>(ReactionGroup::symmetric(3));
  std::mt19937_64 rng(4);
  for (auto graph : {shared(RelationGraph::cycle(4)), shared(RelationGraph::complete(4)),
                     shared(RelationGraph::from_undirected(4, {{0, 1}, {0, 2}, {0, 3}}))}) {
    auto const core = core_set(random_potential_marking(rng, graph, S3));
    REQUIRE(core.a1);
    REQUIRE(core.a2);
    REQUIRE(core.closed);
    REQUIRE(core.matches_closed_form);
  }
}

TEST_CASE("essential states", "[dynamics]") {
  Triangle const t;
  auto const     p = build_markov(t.ex2());
  auto const     w0 = core_set(t.ex2()).states;
  REQUIRE(essential_check(p, w0));

  MarkovModel corrupt = p;
  // Redirect the first W0 row to a state outside W0.
  corrupt.cols[corrupt.row_ptr[w0[0]]] = 0;
  REQUIRE_FALSE(essential_check(corrupt, w0));

  for (auto const& f : generate_potential_fields(4)) {
    auto const core = core_set(f);
    auto const pf   = build_markov(f);
    REQUIRE(essential_check(pf, core.states));
    REQUIRE(stationary_count(pf) == core.states.size());
    for (std::size_t x : core.states) {
      REQUIRE(apply_F(f, pf.space.decode(x)) == std::vector<SystemState>{pf.space.decode(x)});
    }
  }
}

TEST_CASE("Theorem B on core states", "[dynamics]") {
  Triangle const t;
  auto const     rep = theoremB_verify(t.ex2());
  REQUIRE(rep.applicable);
  REQUIRE(rep.b == t.e);
  REQUIRE(rep.solves_equation);
  REQUIRE(rep.second_step);
  REQUIRE(rep.count_matches);
  REQUIRE(rep.predicted_count == 2);

  auto const all_g = theoremB_verify(t.ex3());
  REQUIRE(all_g.applicable);
  REQUIRE(all_g.b == t.g);
  REQUIRE(all_g.solves_equation);
  REQUIRE(all_g.predicted_count == 1);
  REQUIRE(all_g.count_matches);

  auto const bip = theoremB_verify(Marking::constant(shared(RelationGraph::cycle(4)), t.G, t.e));
  REQUIRE(bip.bipartite);
  REQUIRE(bip.vw == std::pair{t.e, t.e});
  REQUIRE(bip.solves_equation);
  REQUIRE(bip.pair_solutions.front() == std::pair{t.e, t.e});
  REQUIRE(bip.predicted_count == 3);
  REQUIRE(bip.stationary_count == 3);

  auto const S3 = std::make_shared<ReactionGroup const>(ReactionGroup::symmetric(3));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto const r = gamma3_solution_family(S3, random_element(rng, *S3), random_element(rng, *S3),
                                          random_element(rng, *S3));
    auto const rep2 = theoremB_verify(r);
    if (!rep2.applicable) continue;
    REQUIRE(rep2.dynamics_in_group);
    REQUIRE(rep2.solves_equation);
    REQUIRE(rep2.second_step);
  }
}

TEST_CASE("maximum nonergodicity scan on the triangle", "[dynamics]") {
  Triangle const t;
  auto const     scan = max_nonergodicity_scan(k_graph(3), t.G, MarkingSpace::symmetric);
  REQUIRE(scan.evaluated == 8);
  REQUIRE(scan.max_count == 2);
  REQUIRE(scan.argmax.size() == 4);
  for (auto const& m : scan.argmax) {
    REQUIRE(is_potential(m).potential);
  }
  REQUIRE_THROWS_AS(max_nonergodicity_scan(k_graph(3), t.G, MarkingSpace::all, {}, 10), Error);
}
