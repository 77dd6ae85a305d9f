#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "balance_nets/dynamics/markov.hpp"

namespace balance_nets {

  // W0 = {x : |F(x)| = 1}, found by scanning W, and its closed form.
  struct CoreSet {
    std::vector<std::size_t> states;  // indices into the state space, ascending
    bool                     closed = false;  // F(W0) ⊆ W0
    bool                     bipartite = false;
    bool                     a1 = false;
    bool                     a2 = false;
    // z(t) = (R*(L*_{j,i}) t)_j, or z(t, r) on bipartite graphs, indexed by
    // t (or t * |E| + r). Present when A1 holds.
    std::optional<std::vector<std::size_t>> closed_form;
    // The scan equals the closed-form set.
    bool matches_closed_form = false;
  };

  CoreSet core_set(Marking const& r, std::size_t bound_states = default_bound_states);

  // Theorem B on W0: F(z(x)) = z(b x) with b b = a_i, or on bipartite graphs
  // F(z(t, r)) = z(v r, w t) with v w = a_i, w v = a_j.
  struct TheoremBReport {
    bool applicable = false;  // A1, A2 and the closed form are available
    bool bipartite  = false;
    // Root nodes of the closed form: i (and j on bipartite graphs).
    std::vector<std::size_t> roots;
    std::vector<GroupElement> characteristic;  // a_i per node
    // The observed dynamics on W0 as group elements, when they are ones.
    std::optional<GroupElement>                        b;
    std::optional<std::pair<GroupElement, GroupElement>> vw;
    bool dynamics_in_group = false;  // the observed maps are group elements
    bool solves_equation   = false;  // b b = a_i, or v w = a_i and w v = a_j
    bool second_step       = false;  // F^2(z(x)) = z(a_i x) (bipartite: both halves)
    // All solutions of the characteristic equations, most orbits first.
    std::vector<GroupElement>                             solutions;
    std::vector<std::pair<GroupElement, GroupElement>>    pair_solutions;
    std::size_t predicted_count  = 0;  // orbits of b, or of (t, r) -> (v r, w t)
    std::size_t stationary_count = 0;  // from the Markov chain
    bool        count_matches    = false;
  };

  TheoremBReport theoremB_verify(Marking const& r, MarkovOptions const& options = {});

  enum class MarkingSpace { symmetric, all };

  struct NonergodicityScan {
    std::size_t              evaluated = 0;
    std::size_t              max_count = 0;
    std::vector<std::size_t> counts;   // per enumerated marking
    std::vector<Marking>     argmax;   // in enumeration order
  };

  // Enumerates every marking of the graph over the group (symmetric ones or
  // all), computes stationary_count for each and returns the maximisers.
  // Markings are enumerated with edge 0 (or undirected pair 0) least
  // significant. Throws Error(bound_exceeded) beyond `max_markings`.
  NonergodicityScan max_nonergodicity_scan(std::shared_ptr<RelationGraph const> graph,
                                           std::shared_ptr<ReactionGroup const> group,
                                           MarkingSpace                         space,
                                           MarkovOptions const&                 options = {},
                                           std::size_t max_markings = 1U << 16);

}  // namespace balance_nets
