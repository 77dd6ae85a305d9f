#include "balance_nets/semigroup/ideals.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <unordered_map>

#include "balance_nets/error.hpp"
#include "balance_nets/parallel.hpp"

namespace balance_nets {

  namespace {
    using Witness = std::vector<std::size_t>;

    std::uint64_t key_of(ControlWord const& w) {
      std::uint64_t k = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        k |= static_cast<std::uint64_t>(w.column(i)) << (4 * i);
      }
      return k;
    }

    std::size_t expected_count(RelationGraph const& graph, bool& bipartite) {
      auto const parts = bipartition(graph);
      bipartite        = parts.has_value();
      return parts ? parts->first.size() * parts->second.size() : graph.node_count();
    }

    // All w m for w in gens, via the batch kernel.
    std::vector<simd::Transf16> left_products(std::vector<simd::Transf16> const& gens,
                                              ControlWord const&                 m) {
      std::vector<simd::Transf16> out(gens.size());
      simd::compose_fixed_table(m.transf(), gens, out);
      return out;
    }

    // All m c for c in gens.
    std::vector<simd::Transf16> right_products(std::vector<simd::Transf16> const& gens,
                                               ControlWord const&                 m) {
      std::vector<simd::Transf16> out(gens.size());
      simd::compose_fixed_index(gens, m.transf(), out);
      return out;
    }

    // Index of the control matrix with the given row choices (column per row).
    std::size_t control_index(RelationGraph const& graph, std::vector<std::size_t> const& cols) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < graph.node_count(); ++i) {
        auto const nb  = graph.neighbors(i);
        auto const pos = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), cols[i]) - nb.begin());
        idx            = idx * graph.degree(i) + pos;
      }
      return idx;
    }

    // Control matrices sending p and q to one common node, applied in order.
    std::optional<Witness> collapse(RelationGraph const& graph, std::size_t p, std::size_t q) {
      std::size_t const n    = graph.node_count();
      auto              code = [n](std::size_t a, std::size_t b) { return std::min(a, b) * n + std::max(a, b); };
      // Per unordered pair: the ordered pair as discovered and its parent code.
      std::vector<std::optional<std::pair<std::size_t, std::size_t>>> pair(n * n);
      std::vector<std::size_t>                                        parent(n * n, n * n);
      std::deque<std::size_t>                                         todo{code(p, q)};
      pair[code(p, q)] = std::pair{p, q};
      while (!todo.empty()) {
        std::size_t const c      = todo.front();
        auto const [a, b]        = *pair[c];
        todo.pop_front();
        for (std::size_t a2 : graph.neighbors(a)) {
          for (std::size_t b2 : graph.neighbors(b)) {
            std::size_t const d = code(a2, b2);
            if (pair[d]) {
              continue;
            }
            pair[d]   = std::pair{a2, b2};
            parent[d] = c;
            if (a2 != b2) {
              todo.push_back(d);
              continue;
            }
            Witness w;
            for (std::size_t v = d; parent[v] != n * n; v = parent[v]) {
              auto const [x, y]   = *pair[parent[v]];
              auto const [x2, y2] = *pair[v];
              std::vector<std::size_t> cols(n);
              for (std::size_t i = 0; i < n; ++i) {
                cols[i] = graph.neighbors(i)[0];
              }
              cols[x] = x2;
              cols[y] = y2;
              w.push_back(control_index(graph, cols));
            }
            std::reverse(w.begin(), w.end());
            return w;
          }
        }
      }
      return std::nullopt;
    }

    std::vector<std::size_t> image(ControlWord const& w) {
      std::vector<std::size_t> img;
      for (std::size_t i = 0; i < w.size(); ++i) {
        img.push_back(w.column(i));
      }
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      return img;
    }

    IdealEnumeration structural(RelationGraph const&            graph,
                                std::vector<ControlWord> const& gens) {
      std::vector<simd::Transf16> gt;
      for (auto const& g : gens) {
        gt.push_back(g.transf());
      }
      std::size_t const n = graph.node_count();

      // A minimum-rank word: collapse pairs of its image until none collapses.
      ControlWord m = gens[0];
      Witness     mw{0};
      for (bool shrunk = true; shrunk;) {
        shrunk         = false;
        auto const img = image(m);
        for (std::size_t a = 0; a < img.size() && !shrunk; ++a) {
          for (std::size_t b = a + 1; b < img.size() && !shrunk; ++b) {
            if (auto const u = collapse(graph, img[a], img[b])) {
              for (std::size_t c : *u) {
                m = m * gens[c];
                mw.push_back(c);
              }
              shrunk = true;
            }
          }
        }
      }

      // Its left closure is a minimal left ideal.
      std::map<ControlWord, Witness> first{{m, mw}};
      std::deque<ControlWord>        todo{m};
      while (!todo.empty()) {
        ControlWord const x = todo.front();
        todo.pop_front();
        auto const prods = left_products(gt, x);
        for (std::size_t k = 0; k < prods.size(); ++k) {
          ControlWord const y = ControlWord::from_transf(prods[k], n);
          if (!first.contains(y)) {
            Witness w{k};
            w.insert(w.end(), first[x].begin(), first[x].end());
            first.emplace(y, std::move(w));
            todo.push_back(y);
          }
        }
      }

      // Right translates L c reach every other minimal left ideal.
      std::map<ControlWord, Witness> witness = first;
      std::vector<LeftIdeal>         found;
      auto add = [&](std::vector<ControlWord> members) {
        LeftIdeal ideal;
        ideal.elements = std::move(members);
        ideal.witness  = witness.at(ideal.elements.front());
        found.push_back(std::move(ideal));
      };
      std::vector<ControlWord> l0;
      for (auto const& [w, _] : first) {
        l0.push_back(w);
      }
      add(std::move(l0));
      for (std::size_t next = 0; next < found.size(); ++next) {
        std::vector<std::set<ControlWord>> translates(gens.size());
        for (auto const& x : found[next].elements) {
          auto const prods = right_products(gt, x);
          for (std::size_t c = 0; c < prods.size(); ++c) {
            ControlWord const y = ControlWord::from_transf(prods[c], n);
            translates[c].insert(y);
            if (!witness.contains(y)) {
              Witness w = witness.at(x);
              w.push_back(c);
              witness.emplace(y, std::move(w));
            }
          }
        }
        for (auto const& members : translates) {
          bool const known = std::ranges::any_of(
              found, [&](LeftIdeal const& f) { return f.elements.front() == *members.begin(); });
          if (!known) {
            add({members.begin(), members.end()});
          }
        }
      }
      IdealEnumeration out;
      out.ideals = std::move(found);
      return out;
    }

    IdealEnumeration exhaustive(RelationGraph const&            graph,
                                std::vector<ControlWord> const& gens,
                                std::size_t                     bound_words) {
      std::vector<simd::Transf16> gt;
      for (auto const& g : gens) {
        gt.push_back(g.transf());
      }
      std::size_t const                          n = graph.node_count();
      std::vector<ControlWord>                   words;
      std::vector<Witness>                       witness;
      std::unordered_map<std::uint64_t, std::size_t> index;
      auto visit = [&](ControlWord const& w, Witness wit) {
        auto const [it, fresh] = index.emplace(key_of(w), words.size());
        if (fresh) {
          if (words.size() >= bound_words) {
            fail(ErrorCode::bound_exceeded,
                 "word semigroup exceeds " + std::to_string(bound_words) + " elements");
          }
          words.push_back(w);
          witness.push_back(std::move(wit));
        }
        return it->second;
      };
      for (std::size_t k = 0; k < gens.size(); ++k) {
        visit(gens[k], {k});
      }
      std::vector<std::vector<std::size_t>> succ;
      for (std::size_t v = 0; v < words.size(); ++v) {
        auto const                prods = left_products(gt, words[v]);
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < prods.size(); ++k) {
          Witness w{k};
          w.insert(w.end(), witness[v].begin(), witness[v].end());
          out.push_back(visit(ControlWord::from_transf(prods[k], n), std::move(w)));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        succ.push_back(std::move(out));
      }

      // Closed strongly connected classes of the left Cayley graph (Tarjan).
      std::size_t const          N = words.size();
      std::vector<std::size_t>   low(N), num(N, 0), comp(N, N);
      std::vector<bool>          on(N, false);
      std::vector<std::size_t>   stack;
      std::vector<std::vector<std::size_t>> sccs;
      std::size_t                counter = 0;
      for (std::size_t root = 0; root < N; ++root) {
        if (num[root] != 0) {
          continue;
        }
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        num[root] = low[root] = ++counter;
        stack.push_back(root);
        on[root] = true;
        while (!call.empty()) {
          auto& [v, e] = call.back();
          if (e < succ[v].size()) {
            std::size_t const w = succ[v][e++];
            if (num[w] == 0) {
              num[w] = low[w] = ++counter;
              stack.push_back(w);
              on[w] = true;
              call.emplace_back(w, 0);
            } else if (on[w]) {
              low[v] = std::min(low[v], num[w]);
            }
            continue;
          }
          std::size_t const done = v;
          call.pop_back();
          if (!call.empty()) {
            low[call.back().first] = std::min(low[call.back().first], low[done]);
          }
          if (low[done] == num[done]) {
            std::vector<std::size_t> c;
            for (std::size_t w = N; w != done;) {
              w = stack.back();
              stack.pop_back();
              on[w]   = false;
              comp[w] = sccs.size();
              c.push_back(w);
            }
            sccs.push_back(std::move(c));
          }
        }
      }
      IdealEnumeration out;
      out.words = N;
      for (std::size_t c = 0; c < sccs.size(); ++c) {
        bool closed = true;
        for (std::size_t v : sccs[c]) {
          for (std::size_t w : succ[v]) {
            closed = closed && comp[w] == c;
          }
        }
        if (!closed) {
          continue;
        }
        LeftIdeal ideal;
        for (std::size_t v : sccs[c]) {
          ideal.elements.push_back(words[v]);
        }
        std::sort(ideal.elements.begin(), ideal.elements.end());
        ideal.witness = witness[index.at(key_of(ideal.elements.front()))];
        out.ideals.push_back(std::move(ideal));
      }
      return out;
    }
  }  // namespace

  bool LeftIdeal::contains(ControlWord const& w) const {
    return std::binary_search(elements.begin(), elements.end(), w);
  }

  std::optional<std::size_t> LeftIdeal::constant_column() const {
    if (elements.size() == 1 && elements.front().rank() == 1) {
      return elements.front().column(0);
    }
    return std::nullopt;
  }

  std::optional<std::size_t> IdealEnumeration::find(ControlWord const& w) const {
    for (std::size_t k = 0; k < ideals.size(); ++k) {
      if (ideals[k].contains(w)) {
        return k;
      }
    }
    return std::nullopt;
  }

  IdealEnumeration enumerate_ideals(RelationGraph const& graph, IdealOptions const& options) {
    if (graph.node_count() > std::min(options.bound_nodes, max_word_size)) {
      fail(ErrorCode::bound_exceeded,
           "ideal enumeration is limited to " + std::to_string(options.bound_nodes) + " nodes");
    }
    auto const       gens = control_matrices(graph);
    IdealEnumeration out  = options.method == IdealMethod::structural
                                ? structural(graph, gens)
                                : exhaustive(graph, gens, options.bound_words);
    std::sort(out.ideals.begin(), out.ideals.end(),
              [](LeftIdeal const& a, LeftIdeal const& b) { return a.elements.front() < b.elements.front(); });
    out.expected = expected_count(graph, out.bipartite);
    return out;
  }

  ConstructiveChain constructive_chain(RelationGraph const& graph, std::size_t i) {
    std::size_t const n = graph.node_count();
    if (i >= n) {
      fail(ErrorCode::invalid_input, "chain start is not a node");
    }
    ConstructiveChain chain{{}, {}, ControlWord::identity(n)};
    std::set<std::size_t> a{i};
    if (bipartition(graph)) {
      a.insert(graph.neighbors(i)[0]);
    }
    chain.layers.push_back(a);
    while (a.size() < n) {
      std::set<std::size_t> next;
      for (std::size_t v : a) {
        next.insert(graph.neighbors(v).begin(), graph.neighbors(v).end());
      }
      a = std::move(next);
      chain.layers.push_back(a);
      if (chain.layers.size() > 2 * n + 2) {
        fail(ErrorCode::validation, "neighbourhood layers do not cover the graph");
      }
    }
    std::size_t const m = chain.layers.size() - 1;
    for (std::size_t k = 1; k <= m; ++k) {
      auto const&              from = chain.layers[m - k + 1];
      auto const&              to   = chain.layers[m - k];
      std::vector<std::size_t> cols(n);
      for (std::size_t v = 0; v < n; ++v) {
        auto const nb = graph.neighbors(v);
        cols[v]       = nb[0];
        if (from.contains(v)) {
          cols[v] = *std::ranges::find_if(nb, [&](std::size_t u) { return to.contains(u); });
        }
      }
      chain.factors.emplace_back(cols);
    }
    chain.product = chain.factors.empty() ? ControlWord::identity(n) : word_product(chain.factors);
    return chain;
  }

  Trajectory random_trajectory(RelationGraph const&              graph,
                               IdealEnumeration const&           ideals,
                               std::size_t                       steps,
                               std::uint64_t                     seed,
                               std::optional<ControlWord> const& start) {
    std::mt19937_64 rng(seed);
    std::size_t const n = graph.node_count();
    auto draw = [&] {
      std::vector<std::size_t> choice(n);
      for (std::size_t v = 0; v < n; ++v) {
        choice[v] = std::uniform_int_distribution<std::size_t>(0, graph.degree(v) - 1)(rng);
      }
      return control_matrix(graph, choice);
    };
    Trajectory t;
    t.words.push_back(start ? *start : draw());
    for (std::size_t s = 0;; ++s) {
      if (auto const k = ideals.find(t.words.back())) {
        t.absorbed_at = t.words.size() - 1;
        t.ideal       = k;
        return t;
      }
      if (s == steps) {
        return t;
      }
      t.words.push_back(draw() * t.words.back());
    }
  }

  AbsorptionStats absorption_statistics(RelationGraph const&    graph,
                                        IdealEnumeration const& ideals,
                                        std::size_t             steps,
                                        std::size_t             runs,
                                        std::uint64_t           seed,
                                        std::size_t             workers) {
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> result(runs);
    parallel_for(runs, workers, [&](std::size_t i) {
      auto const t = random_trajectory(graph, ideals, steps, seed + i);
      if (t.ideal) {
        result[i] = std::pair{*t.ideal, *t.absorbed_at};
      }
    });
    AbsorptionStats stats;
    stats.runs = runs;
    stats.per_ideal.assign(ideals.ideals.size(), 0);
    for (auto const& r : result) {
      if (r) {
        ++stats.absorbed;
        ++stats.per_ideal[r->first];
        stats.absorption_steps.push_back(r->second);
      }
    }
    return stats;
  }

  std::vector<SystemState> final_states(IdealEnumeration const&         ideals,
                                        ReactionMatrix const&           rg,
                                        std::vector<SystemState> const& z) {
    std::vector<SystemState> inputs = z;
    if (inputs.empty()) {
      StateSpace const space(rg.size(), rg.group().states().size());
      for (std::size_t k = 0; k < space.size(); ++k) {
        inputs.push_back(space.decode(k));
      }
    }
    std::set<SystemState> w;
    for (auto const& ideal : ideals.ideals) {
      for (auto const& m : ideal.elements) {
        auto const op = star_product(m, rg);
        for (auto const& x : inputs) {
          w.insert(op.apply(x));
        }
      }
    }
    return {w.begin(), w.end()};
  }

}  // namespace balance_nets
