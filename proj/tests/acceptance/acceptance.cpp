// Acceptance suite: one PASS/FAIL line per criterion, each with a runtime
// limit. Exits nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "balance_nets/cli/reports.hpp"
#include "balance_nets/dynamics/core.hpp"
#include "balance_nets/potential/fields.hpp"
#include "balance_nets/potential/potential.hpp"
#include "balance_nets/semigroup/ideals.hpp"
#include "balance_nets/smoothfield/conic.hpp"
#include "balance_nets/smoothfield/discretize.hpp"

using namespace balance_nets;

namespace {

  std::string const data_dir = BALANCE_NETS_TEST_DATA;

  // Collects failed expectations of one criterion.
  struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, std::string const& what) {
      if (!ok) {
        failures.push_back(what);
      }
    }
  };

  using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

  std::shared_ptr<ReactionGroup const> sign_group() {
    return std::make_shared<ReactionGroup const>(ReactionGroup::sign_flip());
  }

  std::shared_ptr<RelationGraph const> complete(std::size_t n) {
    return std::make_shared<RelationGraph const>(RelationGraph::complete(n));
  }

  // Symmetric sign marking of K_n; bit k of mask marks the k-th pair i < j
  // with g.
  Marking symmetric_marking(std::size_t                          n,
                            std::uint32_t                        mask,
                            std::shared_ptr<ReactionGroup const> G) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> bit;
    for (std::size_t i = 0, k = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        bit[{i, j}] = k++;
      }
    }
    GroupElement const e = G->identity(), g = *G->find("g");
    return Marking::from_function(complete(n), G, [&](std::size_t i, std::size_t j) {
      return (mask >> bit[{std::min(i, j), std::max(i, j)}]) & 1U ? g : e;
    });
  }

  // On complete graphs over an abelian group the triangles generate every
  // cycle, so a symmetric sign marking is potential iff each triangle has an
  // even number of g marks.
  bool triangles_balanced(Marking const& r) {
    std::size_t const n = r.graph().node_count();
    auto const        g = *r.group().find("g");
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) {
          int const odd = (r.at(a, b) == g) + (r.at(b, c) == g) + (r.at(a, c) == g);
          if (odd % 2 != 0) {
            return false;
          }
        }
      }
    }
    return true;
  }

  std::set<std::vector<std::string>> label_states(io::Json const& list) {
    std::set<std::vector<std::string>> out;
    for (auto const& s : list) {
      out.insert(s.get<std::vector<std::string>>());
    }
    return out;
  }

  std::set<std::vector<std::string>> const balanced_triangle_states{{"+1", "-1", "-1"},
                                                                    {"-1", "+1", "+1"}};

  ////////////////////////////////////////////////////////////////////////

  void criterion_1(Check& c) {
    auto const report = cli::run_full_analysis(data_dir + "/gamma3_ex2.json", cli::RunConfig{});
    c.expect(report["stationary_count"] == 2, "stationary_count == 2");
    c.expect(report["limit_exists"] == true, "limit exists");
    c.expect(label_states(report["witnesses"]["W0"]) == balanced_triangle_states, "W0 = {(x, -x, -x)}");
  }

  void criterion_2(Check& c) {
    for (char const* name : {"gamma3_ex1.json", "gamma3_ex3.json"}) {
      auto const report = cli::run_full_analysis(data_dir + "/" + name, cli::RunConfig{});
      c.expect(report["potential"] == false, std::string(name) + ": not potential");
      c.expect(report["stationary_count"] == 1, std::string(name) + ": stationary_count == 1");
      c.expect(report["limit_exists"] == false, std::string(name) + ": oscillates");
    }
  }

  void criterion_3(Check& c) {
    auto const G = sign_group();
    std::vector<Marking> potential;
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
      auto const r    = symmetric_marking(3, mask, G);
      auto const p    = build_markov(r);
      bool const pot  = triangles_balanced(r);
      bool const pot2 = is_potential(r).potential;
      c.expect(pot == pot2, "potential oracle agrees, mask " + std::to_string(mask));
      c.expect(limit_exists(p) == pot, "limit <=> potential, mask " + std::to_string(mask));
      c.expect((stationary_count(p) == 2) == pot, "max count <=> potential, mask " + std::to_string(mask));
      if (pot) {
        potential.push_back(r);
      }
    }
    auto const scan = max_nonergodicity_scan(complete(3), G, MarkingSpace::symmetric);
    c.expect(scan.evaluated == 8, "8 markings scanned");
    c.expect(scan.max_count == 2, "maximum stationary count 2");
    c.expect(scan.argmax.size() == 4 && potential.size() == 4, "4 maximisers");
    for (auto const& r : potential) {
      bool const found = std::any_of(scan.argmax.begin(), scan.argmax.end(), [&](Marking const& m) {
        return m.values() == r.values();
      });
      c.expect(found, "potential marking is a maximiser");
    }
  }

  // Isomorph-free connected graphs by minimum edge bitmask over relabelings.
  std::vector<std::uint32_t> connected_graph_classes(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        pairs.emplace_back(i, j);
      }
    }
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t>              perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::vector<std::size_t>> bit_of(n, std::vector<std::size_t>(n));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      bit_of[pairs[k].first][pairs[k].second] = bit_of[pairs[k].second][pairs[k].first] = k;
    }
    auto const connected = [&](std::uint32_t mask) {
      std::vector<bool>       seen(n, false);
      std::vector<std::size_t> stack{0};
      seen[0] = true;
      while (!stack.empty()) {
        std::size_t const v = stack.back();
        stack.pop_back();
        for (std::size_t w = 0; w < n; ++w) {
          if (w != v && !seen[w] && ((mask >> bit_of[v][w]) & 1U)) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
      return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    };
    std::set<std::uint32_t> classes;
    for (std::uint32_t mask = 0; mask < (1U << pairs.size()); ++mask) {
      if (!connected(mask)) {
        continue;
      }
      std::uint32_t best = mask;
      for (auto const& p : perms) {
        std::uint32_t image = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          if ((mask >> k) & 1U) {
            image |= 1U << bit_of[p[pairs[k].first]][p[pairs[k].second]];
          }
        }
        best = std::min(best, image);
      }
      classes.insert(best);
    }
    return {classes.begin(), classes.end()};
  }

  RelationGraph graph_of(std::size_t n, std::uint32_t mask) {
    Pairs edges;
    for (std::size_t i = 0, k = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        if ((mask >> k) & 1U) {
          edges.emplace_back(i, j);
        }
      }
    }
    return RelationGraph::from_undirected(n, edges);
  }

  // Side of each node in a BFS 2-colouring, or empty when an odd cycle exists.
  std::vector<int> two_colouring(RelationGraph const& graph) {
    std::vector<int>        side(graph.node_count(), -1);
    std::queue<std::size_t> queue;
    side[0] = 0;
    queue.push(0);
    while (!queue.empty()) {
      std::size_t const v = queue.front();
      queue.pop();
      for (std::size_t w : graph.neighbors(v)) {
        if (side[w] < 0) {
          side[w] = 1 - side[v];
          queue.push(w);
        } else if (side[w] == side[v]) {
          return {};
        }
      }
    }
    return side;
  }

  void criterion_4(Check& c) {
    std::array<std::size_t, 7> const expected_classes{0, 0, 1, 2, 6, 21, 112};
    for (std::size_t n = 2; n <= 6; ++n) {
      auto const classes = connected_graph_classes(n);
      c.expect(classes.size() == expected_classes[n],
               "n = " + std::to_string(n) + ": " + std::to_string(classes.size()) + " graph classes");
      for (auto mask : classes) {
        auto const        graph = graph_of(n, mask);
        auto const        side  = two_colouring(graph);
        auto const        en    = enumerate_ideals(graph);
        std::string const tag   = "n = " + std::to_string(n) + " mask " + std::to_string(mask);
        if (side.empty()) {
          c.expect(en.ideals.size() == n, tag + ": n ideals");
          std::set<std::size_t> columns;
          for (auto const& ideal : en.ideals) {
            bool const constant = ideal.elements.size() == 1
                                  && ideal.elements[0] == ControlWord::constant(n, ideal.elements[0].column(0));
            c.expect(constant, tag + ": ideal is {I_k}");
            columns.insert(ideal.elements[0].column(0));
          }
          c.expect(columns.size() == n, tag + ": every I_k appears");
          continue;
        }
        std::size_t const a1 = std::count(side.begin(), side.end(), 0);
        c.expect(en.ideals.size() == a1 * (n - a1), tag + ": |A1||A2| ideals");
        std::set<std::pair<std::size_t, std::size_t>> images;
        for (auto const& ideal : en.ideals) {
          c.expect(ideal.elements.size() == 2, tag + ": ideal is {S, S-}");
          if (ideal.elements.size() != 2) {
            continue;
          }
          // S sends the first part to a and the second to b; S- swaps them.
          auto const&       s = ideal.elements[0];
          auto const&       t = ideal.elements[1];
          std::size_t const u = std::find(side.begin(), side.end(), 0) - side.begin();
          std::size_t const v = std::find(side.begin(), side.end(), 1) - side.begin();
          std::size_t const a = s.column(u), b = s.column(v);
          bool ok = side[a] != side[b];
          for (std::size_t x = 0; x < n; ++x) {
            ok = ok && s.column(x) == (side[x] == 0 ? a : b) && t.column(x) == (side[x] == 0 ? b : a);
          }
          c.expect(ok, tag + ": S(i, j) / S-(i, j) pattern");
          images.insert({side[a] == 0 ? a : b, side[a] == 0 ? b : a});
        }
        c.expect(images.size() == a1 * (n - a1), tag + ": one ideal per pair (i, j)");
      }
    }
  }

  void criterion_5(Check& c) {
    auto const G = sign_group();
    for (std::size_t n : {3UL, 4UL}) {
      std::size_t potential = 0;
      auto const  en        = enumerate_ideals(*complete(n));
      for (std::uint32_t mask = 0; mask < (1U << (n * (n - 1) / 2)); ++mask) {
        auto const r = symmetric_marking(n, mask, G);
        if (!triangles_balanced(r)) {
          continue;
        }
        ++potential;
        auto const finals = final_states(en, ReactionMatrix::from_marking(r));
        c.expect(finals.size() == stationary_count(build_markov(r)),
                 "K" + std::to_string(n) + " mask " + std::to_string(mask) + ": |final states| = stationary count");
      }
      c.expect(potential == (n == 3 ? 4U : 8U), "K" + std::to_string(n) + " potential marking count");
    }
    // (I_1 * Rg) Z for the balanced triangle, evaluated state by state.
    auto const net = io::load_network(data_dir + "/gamma3_ex2.json");
    auto const op  = star_product(ControlWord::constant(3, 0), ReactionMatrix::from_marking(net.marking));
    io::Json   images = io::Json::array();
    StateSpace const space(3, 2);
    for (std::size_t k = 0; k < space.size(); ++k) {
      images.push_back(cli::state_json(net.marking.group(), op.apply(space.decode(k))));
    }
    c.expect(label_states(images) == balanced_triangle_states, "(I_1 * Rg) Z = {(+1,-1,-1), (-1,+1,+1)}");
  }

  void criterion_6(Check& c) {
    std::mt19937_64 rng(2024);
    auto const      S3 = std::make_shared<ReactionGroup const>(ReactionGroup::symmetric(3));
    std::vector<Marking> fixtures{io::load_network(data_dir + "/gamma3_ex2.json").marking,
                                  io::load_network(data_dir + "/k4_balanced.json").marking};
    // An S3 potential on K4: g_ij = u_i^-1 u_j.
    std::vector<GroupElement> u;
    for (std::size_t v = 0; v < 4; ++v) {
      u.push_back(S3->element(rng() % S3->size()));
    }
    fixtures.push_back(Marking::from_function(complete(4), S3, [&](std::size_t i, std::size_t j) {
      return S3->compose(S3->inverse(u[i]), u[j]);
    }));
    for (auto const& r : fixtures) {
      auto const rg       = ReactionMatrix::from_marking(r);
      auto const controls = control_matrices(r.graph());
      auto const word     = [&] {
        std::vector<ControlWord> f;
        for (std::size_t k = 0, len = 1 + rng() % 4; k < len; ++k) {
          f.push_back(controls[rng() % controls.size()]);
        }
        return word_product(f);
      };
      std::size_t failures = 0;
      for (int trial = 0; trial < 1000; ++trial) {
        auto const w1 = word(), w2 = word();
        if (star_product(w1 * w2, rg) != star_product(w1, rg) * star_product(w2, rg)) {
          ++failures;
        }
      }
      c.expect(failures == 0, "no homomorphism failures on a potential fixture");
    }
    auto const bad     = io::load_network(data_dir + "/gamma3_ex3.json").marking;
    auto const bad_rg  = ReactionMatrix::from_marking(bad);
    auto const failure = find_homomorphism_failure(bad.graph(), bad_rg, 1);
    c.expect(failure.has_value(), "a failure is found for the non-potential triangle");
    if (failure) {
      auto const w1 = word_product(failure->first), w2 = word_product(failure->second);
      c.expect(star_product(w1 * w2, bad_rg) != star_product(w1, bad_rg) * star_product(w2, bad_rg),
               "the reported pair is a genuine failure");
    }
  }

  void criterion_7(Check& c) {
    auto const G = sign_group();
    for (std::size_t n : {3UL, 4UL}) {
      std::set<std::vector<GroupElement>> brute;
      for (std::uint32_t mask = 0; mask < (1U << (n * (n - 1) / 2)); ++mask) {
        auto const r = symmetric_marking(n, mask, G);
        if (triangles_balanced(r)) {
          brute.insert(r.values());
        }
      }
      std::set<std::vector<std::uint32_t>> want, got;
      for (auto const& v : brute) {
        std::vector<std::uint32_t> idx;
        for (auto g : v) idx.push_back(g.index);
        want.insert(idx);
      }
      auto const fields = generate_potential_fields(n);
      for (auto const& f : fields) {
        std::vector<std::uint32_t> idx;
        for (auto g : f.values()) idx.push_back(g.index);
        got.insert(idx);
      }
      c.expect(fields.size() == (n == 3 ? 4U : 8U), "K" + std::to_string(n) + ": field count");
      c.expect(got == want, "K" + std::to_string(n) + ": generated set equals the brute-force set");
      // g on every edge at node 1, e elsewhere; and g on odd index distance.
      auto const has = [&](auto pattern) {
        return std::any_of(fields.begin(), fields.end(), [&](Marking const& f) {
          for (auto const& e : f.graph().edges()) {
            if (f.value(*f.graph().edge_index(e.from, e.to)).index != pattern(e.from, e.to)) {
              return false;
            }
          }
          return true;
        });
      };
      c.expect(has([](std::size_t i, std::size_t j) -> std::uint32_t { return i == 0 || j == 0; }),
               "K" + std::to_string(n) + ": first-row pattern present");
      c.expect(has([](std::size_t i, std::size_t j) -> std::uint32_t { return (i > j ? i - j : j - i) % 2; }),
               "K" + std::to_string(n) + ": stripe pattern present");
    }
  }

  void criterion_8(Check& c) {
    auto const field = InvolutionField::rotation([](Point p) { return p.x; });
    ParameterizedCurve const sine([](double s) { return Point{std::sin(s), 0.0}; }, 0.0, std::numbers::pi / 2);
    Matrix2 const            E = Matrix2::identity();
    for (int m : {2, 3}) {
      ParameterizedCurve const power([m](double s) { return Point{std::pow(s, m), 0.0}; }, 0.0, 1.0);
      double previous = INFINITY;
      for (std::size_t n : {256UL, 512UL, 1024UL}) {
        auto const   there = p_integral_report(field, sine, n, Parity::even);
        auto const   back  = p_integral_report(field, power.reversed(), n, Parity::even);
        double const err   = norm_max(there.value * back.value - E);
        c.expect(there.parity_law && back.parity_law, "P2 determinants are +1");
        c.expect(err < previous, "m = " + std::to_string(m) + ": error shrinks under doubling");
        previous = err;
        if (n == 1024) {
          c.expect(err < 1e-6, "m = " + std::to_string(m) + ": loop within 1e-6 of E at n = 1024");
        }
        auto const odd = p_integral_report(field, sine, n + 1, Parity::odd);
        c.expect(odd.parity_law && std::abs(odd.det + 1.0) < 1e-12, "P1 determinant is -1");
      }
    }
  }

  void criterion_9(Check& c) {
    std::array<double, 3> const hs{1e-2, 5e-3, 2.5e-3};
    auto const one_plus_y = [](double y) { return 1.0 + y; };
    auto const x_squared  = [](double x) { return x * x; };
    std::vector<OdeField> const canonical{
        solve_ode_field(one_plus_y, one_plus_y, x_squared),
        solve_ode_field(one_plus_y, [](double y) { return -(1.0 + y); }, x_squared)};
    for (auto const& f : canonical) {
      std::vector<double> norms;
      for (double h : hs) {
        auto const grid = residual_grid(f.field, 6, h);
        norms.push_back(*std::max_element(grid.begin(), grid.end()));
      }
      for (double order : convergence_orders(hs, norms)) {
        c.expect(order >= 1.8 && order <= 2.2, "order " + std::to_string(order) + " in [1.8, 2.2]");
      }
      std::vector<double> scaled;
      for (std::size_t k = 0; k < hs.size(); ++k) {
        scaled.push_back(norms[k] / (hs[k] * hs[k]));
      }
      c.expect(*std::max_element(scaled.begin(), scaled.end()) < 1.5 * *std::min_element(scaled.begin(), scaled.end()),
               "residual / h^2 is bounded");
    }
    InvolutionField const skew([](Point p) {
      double const a = p.x * p.y;
      double const b = std::sqrt(1.0 - a * a);
      return std::array{a, b, b};
    });
    std::vector<double> norms;
    for (double h : hs) {
      norms.push_back(infinitesimal_residual(skew, {0.5, 0.5}, h).norm);
      c.expect(norms.back() >= 1e-3, "non-potential residual >= 1e-3");
    }
    auto const [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    c.expect(*hi - *lo <= 0.05 * *hi, "non-potential residual does not shrink with h");
  }

  void criterion_10(Check& c) {
    // Triangle: only all-P2 and two-P1-one-P2 assignments close every cycle.
    auto const           triangle = RelationGraph::complete(3);
    std::map<int, int>   by_odd;
    for (auto const& tags : valid_tag_assignments(triangle)) {
      int const odd = std::count_if(tags.begin(), tags.end(), [](auto const& t) { return t.second == Parity::odd; });
      ++by_odd[odd];
    }
    c.expect(by_odd == std::map<int, int>{{0, 1}, {2, 3}}, "triangle tag patterns: none odd, or two odd");

    auto const field = solve_ode_field([](double y) { return 1.0 + y; }, [](double y) { return -(1.0 + y); },
                                       [](double x) { return x * x; })
                           .field;
    auto const K4 = complete(4);
    Embedding  embedding;
    embedding.nodes = {{0.1, 0.1}, {0.9, 0.15}, {0.85, 0.9}, {0.15, 0.8}};
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<std::size_t>              perm{1, 2, 3};
    for (std::size_t a = 1; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        cycles.push_back({0, a, b, 0});
      }
    }
    cycles.push_back({1, 2, 3, 1});
    do {
      if (perm[0] < perm[2]) {
        cycles.push_back({0, perm[0], perm[1], perm[2], 0});
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    c.expect(cycles.size() == 7, "K4 has 7 simple cycles");
    auto const assignments = valid_tag_assignments(*K4);
    c.expect(assignments.size() == 8, "K4 has 8 valid tag assignments");
    DiscretizeOptions options;
    options.workers = 4;
    for (auto const& tags : assignments) {
      options.tags = tags;
      auto const d = discretize(field, K4, embedding, options);
      for (auto const& cycle : cycles) {
        auto const err = norm_max(product_integral(d.marking, path_through(cycle)) - Matrix2::identity());
        c.expect(err <= 1e-6, "cycle product within 1e-6 of E");
      }
      c.expect(d.potential.potential, "discretized marking is potential");
    }
  }

  struct Criterion {
    int                        id;
    char const*                title;
    double                     limit_seconds;
    std::function<void(Check&)> run;
  };

}  // namespace

int main() {
  std::vector<Criterion> const criteria{
      {1, "balanced triangle: two stationary measures, limit exists, W0 = {(x,-x,-x)}", 1.0, criterion_1},
      {2, "non-potential triangles: one stationary measure, oscillation", 1.0, criterion_2},
      {3, "triangle over {e,g}: limit <=> potential <=> maximal count; argmax = potentials", 5.0, criterion_3},
      {4, "ideal counts and generator forms on all connected graphs n <= 6", 120.0, criterion_4},
      {5, "|final states| = stationary count on K3/K4 potentials; (I_1*Rg)Z", 30.0, criterion_5},
      {6, "rho is a homomorphism on potential fixtures; failure for a non-potential one", 10.0, criterion_6},
      {7, "generated potential fields equal the brute-force sets for N = 3, 4", 5.0, criterion_7},
      {8, "closed P2 loop returns E within 1e-6; determinant parity law", 10.0, criterion_8},
      {9, "residual order ~2 for canonical fields; O(1) for a non-potential field", 10.0, criterion_9},
      {10, "K4 discretization is potential for every valid tag set; triangle tag rule", 30.0, criterion_10},
  };
  int failed = 0;
  for (auto const& cr : criteria) {
    Check      check;
    auto const start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (std::exception const& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double const elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > cr.limit_seconds) {
      check.failures.push_back("runtime limit exceeded");
    }
    bool const ok = check.failures.empty();
    failed += !ok;
    std::printf("%s criterion %2d: %s (%.3f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.title,
                elapsed, cr.limit_seconds);
    for (std::size_t k = 0; k < check.failures.size() && k < 5; ++k) {
      std::printf("      %s\n", check.failures[k].c_str());
    }
  }
  return failed == 0 ? 0 : 1;
}
