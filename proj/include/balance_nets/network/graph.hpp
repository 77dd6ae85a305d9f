#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace balance_nets {

  struct DirectedEdge {
    std::size_t from = 0;
    std::size_t to   = 0;

    friend auto operator<=>(DirectedEdge const&, DirectedEdge const&) = default;
  };

  // A directed, symmetric, loop-free, connected graph on nodes 0..n-1. Edges
  // are kept sorted by (from, to); edge indices refer to that order.
  class RelationGraph {
   public:
    // Throws Error(validation) naming the offending edge or node when the
    // edge set has a loop, a duplicate, a missing reverse, or the graph is
    // disconnected or has fewer than two nodes.
    RelationGraph(std::vector<std::string> labels, std::vector<DirectedEdge> edges);

    // Nodes labelled "1".."n".
    static std::vector<std::string> default_labels(std::size_t n);
    static RelationGraph complete(std::size_t n);
    static RelationGraph cycle(std::size_t n);
    // Undirected edge list, each pair added in both directions.
    static RelationGraph from_undirected(std::size_t n,
                                         std::vector<std::pair<std::size_t, std::size_t>> const& pairs);

    std::size_t node_count() const noexcept {
      return _labels.size();
    }

    std::size_t edge_count() const noexcept {
      return _edges.size();
    }

    std::string const& label(std::size_t node) const {
      return _labels.at(node);
    }

    std::vector<std::string> const& labels() const noexcept {
      return _labels;
    }

    std::optional<std::size_t> node_of(std::string const& label) const;

    std::span<DirectedEdge const> edges() const noexcept {
      return _edges;
    }

    DirectedEdge const& edge(std::size_t e) const {
      return _edges.at(e);
    }

    // Out-neighbours of `node` in ascending order.
    std::span<std::size_t const> neighbors(std::size_t node) const;

    std::size_t degree(std::size_t node) const {
      return neighbors(node).size();
    }

    std::optional<std::size_t> edge_index(std::size_t from, std::size_t to) const;

    bool has_edge(std::size_t from, std::size_t to) const {
      return edge_index(from, to).has_value();
    }

    // Index of the edge (to, from) for edge e = (from, to).
    std::size_t reverse(std::size_t e) const {
      return _reverse.at(e);
    }

    bool is_complete() const noexcept {
      return _edges.size() == node_count() * (node_count() - 1);
    }

    friend bool operator==(RelationGraph const& a, RelationGraph const& b) {
      return a._labels == b._labels && a._edges == b._edges;
    }

   private:
    std::vector<std::string>  _labels;
    std::vector<DirectedEdge> _edges;
    std::vector<std::size_t>  _offsets;  // CSR offsets into _targets
    std::vector<std::size_t>  _targets;
    std::vector<std::size_t>  _reverse;
  };

  // An ordered edge sequence in which each head is the next tail.
  using Path = std::vector<DirectedEdge>;

  // The path visiting the given nodes in order.
  Path path_through(std::vector<std::size_t> const& nodes);

  // Throws Error(invalid_input) when consecutive edges do not meet or an edge
  // is not in the graph.
  void check_path(RelationGraph const& graph, Path const& path);

  bool is_closed(Path const& path) noexcept;

  struct Bipartition {
    std::vector<std::size_t>  first;   // part containing node 0
    std::vector<std::size_t>  second;
    std::vector<std::uint8_t> side;    // side[node] in {0, 1}
  };

  // The 2-colouring of a connected graph when it is bipartite.
  std::optional<Bipartition> bipartition(RelationGraph const& graph);

}  // namespace balance_nets
