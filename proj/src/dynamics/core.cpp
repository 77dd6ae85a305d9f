#include "balance_nets/dynamics/core.hpp"

#include <algorithm>
#include <map>

#include "balance_nets/error.hpp"
#include "balance_nets/network/two_step.hpp"
#include "balance_nets/potential/potential.hpp"

namespace balance_nets {

  namespace {
    // Closed-form core states, indexed by t or t * |E| + r.
    struct ClosedForm {
      std::vector<std::size_t> roots;
      std::vector<std::size_t> states;
      std::vector<std::size_t> side;  // component per node
    };

    std::optional<ClosedForm> closed_form(Marking const& r, StateSpace const& space) {
      auto const star = star_potential(star_marking(r));
      if (!star.potential) {
        return std::nullopt;
      }
      auto const&       G = r.group();
      std::size_t const n = r.graph().node_count();
      std::size_t const m = G.states().size();
      ClosedForm        cf;
      for (std::size_t v = 0; v < n; ++v) {
        if (std::find(cf.roots.begin(), cf.roots.end(), star.root[v]) == cf.roots.end()) {
          cf.roots.push_back(star.root[v]);
        }
      }
      for (std::size_t v = 0; v < n; ++v) {
        cf.side.push_back(static_cast<std::size_t>(
            std::find(cf.roots.begin(), cf.roots.end(), star.root[v]) - cf.roots.begin()));
      }
      // R*(L*_{j, root}) = u*(j)^-1 once R* is potential.
      std::vector<GroupElement> to_root;
      for (std::size_t v = 0; v < n; ++v) {
        to_root.push_back(G.inverse(star.u[v]));
      }
      std::size_t const params = cf.roots.size() == 1 ? m : m * m;
      for (std::size_t k = 0; k < params; ++k) {
        std::size_t const t = cf.roots.size() == 1 ? k : k / m;
        std::size_t const s = cf.roots.size() == 1 ? k : k % m;
        SystemState       x(n);
        for (std::size_t v = 0; v < n; ++v) {
          x[v] = G.apply(to_root[v], cf.side[v] == 0 ? t : s);
        }
        cf.states.push_back(space.index(x));
      }
      return cf;
    }

    // The unique successor of a core state.
    std::size_t successor(Marking const& r, StateSpace const& space, std::size_t x) {
      auto const img = apply_F(r, space.decode(x));
      if (img.size() != 1) {
        fail(ErrorCode::validation, "core state has more than one successor");
      }
      return space.index(img.front());
    }
  }  // namespace

  CoreSet core_set(Marking const& r, std::size_t bound_states) {
    StateSpace const space(r.graph().node_count(), r.group().states().size(), bound_states);
    CoreSet          core;
    core.bipartite = bipartition(r.graph()).has_value();
    core.a1        = check_A1(r);
    core.a2        = check_A2(r).has_value();
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (image_size(r, space.decode(x)) == 1) {
        core.states.push_back(x);
      }
    }
    core.closed = true;
    for (std::size_t x : core.states) {
      std::size_t const y = successor(r, space, x);
      if (!std::binary_search(core.states.begin(), core.states.end(), y)) {
        core.closed = false;
      }
    }
    if (auto cf = closed_form(r, space)) {
      std::vector<std::size_t> sorted = cf->states;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      core.matches_closed_form = sorted == core.states;
      core.closed_form         = std::move(cf->states);
    }
    return core;
  }

  TheoremBReport theoremB_verify(Marking const& r, MarkovOptions const& options) {
    TheoremBReport rep;
    auto const&    G = r.group();
    auto const     a = check_A2(r);
    rep.bipartite    = bipartition(r.graph()).has_value();
    StateSpace const space(r.graph().node_count(), G.states().size(), options.bound_states);
    auto const       cf = closed_form(r, space);
    if (!a || !cf) {
      return rep;
    }
    rep.applicable     = true;
    rep.characteristic = *a;
    rep.roots          = cf->roots;
    std::size_t const m = G.states().size();

    // Locate F(z(.)) among the closed-form states.
    std::map<std::size_t, std::size_t> param_of;
    for (std::size_t k = 0; k < cf->states.size(); ++k) {
      param_of.emplace(cf->states[k], k);
    }
    std::vector<std::size_t> next(cf->states.size());
    for (std::size_t k = 0; k < cf->states.size(); ++k) {
      auto const img = apply_F(r, space.decode(cf->states[k]));
      auto const it  = img.size() == 1 ? param_of.find(space.index(img.front())) : param_of.end();
      if (it == param_of.end()) {
        return rep;  // W0 not closed: the dynamics are not of the stated form
      }
      next[k] = it->second;
    }

    if (!rep.bipartite) {
      GroupElement const ai = (*a)[cf->roots[0]];
      rep.solutions         = solve_characteristic(G, ai);
      auto const b          = G.find(std::span<std::size_t const>(next));
      if (b) {
        rep.b                 = *b;
        rep.dynamics_in_group = true;
        rep.solves_equation   = G.compose(*b, *b) == ai;
        rep.predicted_count   = orbit_count(G, *b);
      }
      rep.second_step = true;
      for (std::size_t t = 0; t < m; ++t) {
        rep.second_step = rep.second_step && next[next[t]] == G.apply(ai, t);
      }
    } else {
      GroupElement const ai = (*a)[cf->roots[0]];
      GroupElement const aj = (*a)[cf->roots[1]];
      rep.pair_solutions    = solve_characteristic_pair(G, ai, aj);
      // next(t, r) must be (v r, w t).
      std::vector<std::size_t> v(m), w(m);
      bool                     separable = true;
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t s = 0; s < m; ++s) {
          std::size_t const k = next[t * m + s];
          std::size_t const t2 = k / m, s2 = k % m;
          if (t == 0) {
            v[s] = t2;
          } else if (v[s] != t2) {
            separable = false;
          }
          if (s == 0) {
            w[t] = s2;
          } else if (w[t] != s2) {
            separable = false;
          }
        }
      }
      auto const gv = separable ? G.find(std::span<std::size_t const>(v)) : std::nullopt;
      auto const gw = separable ? G.find(std::span<std::size_t const>(w)) : std::nullopt;
      if (gv && gw) {
        rep.vw                = std::pair{*gv, *gw};
        rep.dynamics_in_group = true;
        rep.solves_equation   = G.compose(*gv, *gw) == ai && G.compose(*gw, *gv) == aj;
        rep.predicted_count   = pair_orbit_count(G, *gv, *gw);
      }
      rep.second_step = true;
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t s = 0; s < m; ++s) {
          std::size_t const k2 = next[next[t * m + s]];
          rep.second_step = rep.second_step && k2 == G.apply(ai, t) * m + G.apply(aj, s);
        }
      }
    }
    rep.stationary_count = stationary_count(build_markov(r, options));
    rep.count_matches    = rep.dynamics_in_group && rep.predicted_count == rep.stationary_count;
    return rep;
  }

  NonergodicityScan max_nonergodicity_scan(std::shared_ptr<RelationGraph const> graph,
                                           std::shared_ptr<ReactionGroup const> group,
                                           MarkingSpace                         space,
                                           MarkovOptions const&                 options,
                                           std::size_t                          max_markings) {
    // Free slots: undirected pairs (first edge of each) or every edge.
    std::vector<std::size_t> slot_of(graph->edge_count());
    std::size_t              slots = 0;
    for (std::size_t e = 0; e < graph->edge_count(); ++e) {
      if (space == MarkingSpace::all || graph->edge(e).from < graph->edge(e).to) {
        slot_of[e] = slots++;
      }
    }
    if (space == MarkingSpace::symmetric) {
      for (std::size_t e = 0; e < graph->edge_count(); ++e) {
        if (graph->edge(e).from > graph->edge(e).to) {
          slot_of[e] = slot_of[graph->reverse(e)];
        }
      }
    }
    std::size_t const base  = group->size();
    std::size_t       total = 1;
    for (std::size_t s = 0; s < slots; ++s) {
      if (total > max_markings / base) {
        fail(ErrorCode::bound_exceeded,
             "marking space " + std::to_string(base) + "^" + std::to_string(slots)
                 + " exceeds the scan bound " + std::to_string(max_markings));
      }
      total *= base;
    }

    NonergodicityScan scan;
    std::vector<std::size_t> digit(slots, 0);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t s = 0; s < slots; ++s, c /= base) {
        digit[s] = c % base;
      }
      std::vector<GroupElement> values;
      for (std::size_t e = 0; e < graph->edge_count(); ++e) {
        values.push_back(group->element(digit[slot_of[e]]));
      }
      Marking           m(graph, group, std::move(values));
      std::size_t const count = stationary_count(build_markov(m, options));
      scan.counts.push_back(count);
      if (count > scan.max_count) {
        scan.max_count = count;
        scan.argmax.clear();
      }
      if (count == scan.max_count) {
        scan.argmax.push_back(std::move(m));
      }
    }
    scan.evaluated = total;
    return scan;
  }

}  // namespace balance_nets
