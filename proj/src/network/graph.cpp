#include "balance_nets/network/graph.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "balance_nets/error.hpp"

namespace balance_nets {

  namespace {
    std::string edge_text(std::vector<std::string> const& labels, DirectedEdge e) {
      return "(" + labels[e.from] + ", " + labels[e.to] + ")";
    }
  }  // namespace

  RelationGraph::RelationGraph(std::vector<std::string> labels,
                               std::vector<DirectedEdge> edges)
      : _labels(std::move(labels)), _edges(std::move(edges)) {
    std::size_t const n = _labels.size();
    if (n < 2) {
      fail(ErrorCode::validation, "a graph of relations needs at least two nodes");
    }
    {
      std::unordered_set<std::string> seen;
      for (auto const& l : _labels) {
        if (!seen.insert(l).second) {
          fail(ErrorCode::validation, "duplicate node label \"" + l + "\"");
        }
      }
    }
    for (auto const& e : _edges) {
      if (e.from >= n || e.to >= n) {
        fail(ErrorCode::validation, "edge endpoint out of range");
      }
      if (e.from == e.to) {
        fail(ErrorCode::validation, "loop at node " + _labels[e.from]);
      }
    }
    std::sort(_edges.begin(), _edges.end());
    for (std::size_t k = 1; k < _edges.size(); ++k) {
      if (_edges[k] == _edges[k - 1]) {
        fail(ErrorCode::validation,
             "duplicate edge " + edge_text(_labels, _edges[k]));
      }
    }

    _offsets.assign(n + 1, 0);
    for (auto const& e : _edges) {
      ++_offsets[e.from + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      _offsets[i + 1] += _offsets[i];
    }
    _targets.reserve(_edges.size());
    for (auto const& e : _edges) {
      _targets.push_back(e.to);
    }

    _reverse.resize(_edges.size());
    for (std::size_t k = 0; k < _edges.size(); ++k) {
      auto r = edge_index(_edges[k].to, _edges[k].from);
      if (!r) {
        fail(ErrorCode::validation,
             "edge " + edge_text(_labels, _edges[k]) + " has no reverse edge "
                 + edge_text(_labels, {_edges[k].to, _edges[k].from}));
      }
      _reverse[k] = *r;
    }

    std::vector<bool>       seen(n, false);
    std::queue<std::size_t> todo;
    seen[0] = true;
    todo.push(0);
    std::size_t reached = 1;
    while (!todo.empty()) {
      std::size_t const v = todo.front();
      todo.pop();
      for (std::size_t w : neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          todo.push(w);
        }
      }
    }
    if (reached != n) {
      auto it = std::find(seen.begin(), seen.end(), false);
      fail(ErrorCode::validation,
           "graph is not connected: node " + _labels[it - seen.begin()]
               + " is unreachable from " + _labels[0]);
    }
  }

  std::vector<std::string> RelationGraph::default_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= n; ++i) {
      labels.push_back(std::to_string(i));
    }
    return labels;
  }

  RelationGraph RelationGraph::complete(std::size_t n) {
    std::vector<DirectedEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) {
          edges.push_back({i, j});
        }
      }
    }
    return RelationGraph(default_labels(n), std::move(edges));
  }

  RelationGraph RelationGraph::cycle(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      pairs.emplace_back(i, (i + 1) % n);
    }
    return from_undirected(n, pairs);
  }

  RelationGraph RelationGraph::from_undirected(
      std::size_t                                             n,
      std::vector<std::pair<std::size_t, std::size_t>> const& pairs) {
    std::vector<DirectedEdge> edges;
    for (auto [i, j] : pairs) {
      edges.push_back({i, j});
      edges.push_back({j, i});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return RelationGraph(default_labels(n), std::move(edges));
  }

  std::optional<std::size_t> RelationGraph::node_of(std::string const& label) const {
    auto it = std::find(_labels.begin(), _labels.end(), label);
    if (it == _labels.end()) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - _labels.begin());
  }

  std::span<std::size_t const> RelationGraph::neighbors(std::size_t node) const {
    if (node >= node_count()) {
      fail(ErrorCode::invalid_input, "node index out of range");
    }
    return {_targets.data() + _offsets[node], _offsets[node + 1] - _offsets[node]};
  }

  std::optional<std::size_t> RelationGraph::edge_index(std::size_t from,
                                                       std::size_t to) const {
    if (from >= node_count()) {
      return std::nullopt;
    }
    auto const first = _targets.begin() + _offsets[from];
    auto const last  = _targets.begin() + _offsets[from + 1];
    auto it          = std::lower_bound(first, last, to);
    if (it == last || *it != to) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - _targets.begin());
  }

  Path path_through(std::vector<std::size_t> const& nodes) {
    Path p;
    for (std::size_t k = 1; k < nodes.size(); ++k) {
      p.push_back({nodes[k - 1], nodes[k]});
    }
    return p;
  }

  void check_path(RelationGraph const& graph, Path const& path) {
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (!graph.has_edge(path[k].from, path[k].to)) {
        fail(ErrorCode::invalid_input,
             "path step " + std::to_string(k) + " is not an edge of the graph");
      }
      if (k > 0 && path[k - 1].to != path[k].from) {
        fail(ErrorCode::invalid_input,
             "path is not contiguous at step " + std::to_string(k));
      }
    }
  }

  bool is_closed(Path const& path) noexcept {
    return path.empty() || path.front().from == path.back().to;
  }

  std::optional<Bipartition> bipartition(RelationGraph const& graph) {
    std::size_t const         n = graph.node_count();
    std::vector<std::uint8_t> side(n, 2);
    std::queue<std::size_t>   todo;
    side[0] = 0;
    todo.push(0);
    while (!todo.empty()) {
      std::size_t const v = todo.front();
      todo.pop();
      for (std::size_t w : graph.neighbors(v)) {
        if (side[w] == 2) {
          side[w] = static_cast<std::uint8_t>(1 - side[v]);
          todo.push(w);
        } else if (side[w] == side[v]) {
          return std::nullopt;
        }
      }
    }
    Bipartition result;
    for (std::size_t v = 0; v < n; ++v) {
      (side[v] == 0 ? result.first : result.second).push_back(v);
    }
    result.side = std::move(side);
    return result;
  }

}  // namespace balance_nets
