#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "balance_nets/network/marking.hpp"

namespace balance_nets {

  // Edge (from, to) of the two-step graph through the mediator `via`:
  // (from, via) and (via, to) are edges of the underlying graph.
  struct StarEdge {
    std::size_t from = 0;
    std::size_t to   = 0;
    std::size_t via  = 0;

    friend auto operator<=>(StarEdge const&, StarEdge const&) = default;
  };

  using StarPath = std::vector<StarEdge>;

  // The multigraph Γ*: one edge (i, j) per mediator k. Includes the loops
  // (i, i) through every neighbour k. Edges are sorted by (from, to, via).
  class TwoStepGraph {
   public:
    explicit TwoStepGraph(RelationGraph const& graph);

    std::size_t node_count() const noexcept {
      return _component.size();
    }

    std::span<StarEdge const> edges() const noexcept {
      return _edges;
    }

    std::optional<std::size_t> edge_index(StarEdge const& e) const;

    std::size_t component_of(std::size_t node) const {
      return _component.at(node);
    }

    std::size_t component_count() const noexcept {
      return _components.size();
    }

    // Node lists of the connected components, ordered by smallest node.
    std::vector<std::vector<std::size_t>> const& components() const noexcept {
      return _components;
    }

   private:
    std::vector<StarEdge>                 _edges;
    std::vector<std::size_t>              _component;
    std::vector<std::vector<std::size_t>> _components;
  };

  // The induced marking a_ij(k) = g_ki^-1 g_kj on Γ*.
  struct StarMarking {
    TwoStepGraph                         graph;
    std::shared_ptr<ReactionGroup const> group;
    std::vector<GroupElement>            values;  // indexed like graph.edges()

    GroupElement value(StarEdge const& e) const;
  };

  StarMarking star_marking(Marking const& r);

  // Throws Error(invalid_input) when the path leaves Γ* or is not contiguous.
  void check_star_path(TwoStepGraph const& graph, StarPath const& path);

  // The complete graph on the same nodes with every added edge (i, j) marked
  // by the product along a shortest path i -> j (first found by BFS in
  // neighbour order). Throws Error(not_potential) when r is not potential.
  Marking complete_extension(Marking const& r);

}  // namespace balance_nets
