#include "balance_nets/network/two_step.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "balance_nets/potential/potential.hpp"

namespace balance_nets {

  TwoStepGraph::TwoStepGraph(RelationGraph const& graph) {
    std::size_t const n = graph.node_count();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k : graph.neighbors(i)) {
        for (std::size_t j : graph.neighbors(k)) {
          _edges.push_back({i, j, k});
        }
      }
    }
    std::sort(_edges.begin(), _edges.end());

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x         = parent[x];
      }
      return x;
    };
    for (auto const& e : _edges) {
      std::size_t const a = find(e.from), b = find(e.to);
      if (a != b) {
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
    _component.resize(n);
    std::vector<std::size_t> id_of_root(n, n);
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t const r = find(v);
      if (id_of_root[r] == n) {
        id_of_root[r] = _components.size();
        _components.emplace_back();
      }
      _component[v] = id_of_root[r];
      _components[_component[v]].push_back(v);
    }
  }

  std::optional<std::size_t> TwoStepGraph::edge_index(StarEdge const& e) const {
    auto it = std::lower_bound(_edges.begin(), _edges.end(), e);
    if (it == _edges.end() || *it != e) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - _edges.begin());
  }

  GroupElement StarMarking::value(StarEdge const& e) const {
    auto k = graph.edge_index(e);
    if (!k) {
      fail(ErrorCode::invalid_input, "not an edge of the two-step graph");
    }
    return values[*k];
  }

  StarMarking star_marking(Marking const& r) {
    auto const&   group = r.group();
    TwoStepGraph  g(r.graph());
    std::vector<GroupElement> values;
    values.reserve(g.edges().size());
    for (auto const& e : g.edges()) {
      values.push_back(
          group.compose(group.inverse(r.at(e.via, e.from)), r.at(e.via, e.to)));
    }
    return {std::move(g), r.group_ptr(), std::move(values)};
  }

  void check_star_path(TwoStepGraph const& graph, StarPath const& path) {
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (!graph.edge_index(path[k])) {
        fail(ErrorCode::invalid_input,
             "star path step " + std::to_string(k)
                 + " is not an edge of the two-step graph");
      }
      if (k > 0 && path[k - 1].to != path[k].from) {
        fail(ErrorCode::invalid_input,
             "star path is not contiguous at step " + std::to_string(k));
      }
    }
  }

  Marking complete_extension(Marking const& r) {
    if (!is_potential(r).potential) {
      fail(ErrorCode::not_potential,
           "complete extension requires a potential marking");
    }
    auto const&       graph = r.graph();
    auto const&       group = r.group();
    std::size_t const n     = graph.node_count();
    if (graph.is_complete()) {
      return r;
    }
    // reach[i][j] = product along the BFS-tree path from i to j.
    std::vector<std::vector<GroupElement>> reach(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<bool> seen(n, false);
      reach[i].assign(n, group.identity());
      std::queue<std::size_t> todo;
      seen[i] = true;
      todo.push(i);
      while (!todo.empty()) {
        std::size_t const v = todo.front();
        todo.pop();
        for (std::size_t w : graph.neighbors(v)) {
          if (!seen[w]) {
            seen[w]     = true;
            reach[i][w] = group.compose(reach[i][v], r.at(v, w));
            todo.push(w);
          }
        }
      }
    }
    auto full = std::make_shared<RelationGraph const>([&] {
      std::vector<DirectedEdge> edges;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j) {
            edges.push_back({i, j});
          }
        }
      }
      return RelationGraph(graph.labels(), std::move(edges));
    }());
    return Marking::from_function(
        full, r.group_ptr(), [&](std::size_t i, std::size_t j) {
          return graph.has_edge(i, j) ? r.at(i, j) : reach[i][j];
        });
  }

}  // namespace balance_nets
