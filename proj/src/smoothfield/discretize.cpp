#include "balance_nets/smoothfield/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "balance_nets/error.hpp"
#include "balance_nets/parallel.hpp"

namespace balance_nets {

  namespace {
    std::vector<UndirectedEdge> undirected_edges(RelationGraph const& graph) {
      std::vector<UndirectedEdge> out;
      for (auto const& e : graph.edges()) {
        if (e.from < e.to) {
          out.emplace_back(e.from, e.to);
        }
      }
      return out;
    }

    Parity tag_of(ParityTags const& tags, std::size_t i, std::size_t j) {
      auto const it = tags.find({std::min(i, j), std::max(i, j)});
      return it == tags.end() ? Parity::even : it->second;
    }

    bool near(Point a, Point b) {
      return std::hypot(a.x - b.x, a.y - b.y) <= 1e-9;
    }
  }  // namespace

  ParameterizedCurve Embedding::curve(std::size_t i, std::size_t j) const {
    if (i >= nodes.size() || j >= nodes.size() || i == j) {
      fail(ErrorCode::invalid_input, "embedding has no such edge");
    }
    auto const it = curves.find({std::min(i, j), std::max(i, j)});
    if (it == curves.end()) {
      return ParameterizedCurve::segment(nodes[i], nodes[j]);
    }
    return i < j ? it->second : it->second.reversed();
  }

  bool valid_parity_tags(RelationGraph const& graph, ParityTags const& tags) {
    std::size_t const             n = graph.node_count();
    std::vector<std::optional<int>> color(n);
    color[0] = 0;
    std::deque<std::size_t> todo{0};
    while (!todo.empty()) {
      std::size_t const v = todo.front();
      todo.pop_front();
      for (std::size_t w : graph.neighbors(v)) {
        int const want = *color[v] ^ (tag_of(tags, v, w) == Parity::odd ? 1 : 0);
        if (!color[w]) {
          color[w] = want;
          todo.push_back(w);
        } else if (*color[w] != want) {
          return false;
        }
      }
    }
    return true;
  }

  std::vector<ParityTags> valid_tag_assignments(RelationGraph const& graph) {
    auto const edges = undirected_edges(graph);
    if (edges.size() > 20) {
      fail(ErrorCode::bound_exceeded, "tag enumeration is limited to 20 edges");
    }
    std::vector<ParityTags> out;
    for (std::uint32_t mask = 0; mask < (1U << edges.size()); ++mask) {
      ParityTags tags;
      for (std::size_t k = 0; k < edges.size(); ++k) {
        tags[edges[k]] = (mask >> k) & 1U ? Parity::odd : Parity::even;
      }
      if (valid_parity_tags(graph, tags)) {
        out.push_back(std::move(tags));
      }
    }
    return out;
  }

  Discretization discretize(InvolutionField const&               field,
                            std::shared_ptr<RelationGraph const> graph,
                            Embedding const&                     embedding,
                            DiscretizeOptions const&             options) {
    std::size_t const n = graph->node_count();
    if (embedding.nodes.size() != n) {
      fail(ErrorCode::invalid_input, "embedding has " + std::to_string(embedding.nodes.size()) +
                                         " nodes, graph has " + std::to_string(n));
    }
    for (auto const& p : embedding.nodes) {
      check_domain(p);
    }
    for (auto const& [e, c] : embedding.curves) {
      if (e.first >= e.second || !graph->has_edge(e.first, e.second)) {
        fail(ErrorCode::invalid_input, "embedding curve for a pair that is not an edge");
      }
      if (!near(c.start(), embedding.nodes[e.first]) || !near(c.end(), embedding.nodes[e.second])) {
        fail(ErrorCode::invalid_input, "embedding curve does not join its nodes");
      }
    }
    for (auto const& [e, _] : options.tags) {
      if (e.first >= e.second || !graph->has_edge(e.first, e.second)) {
        fail(ErrorCode::invalid_input, "parity tag for a pair that is not an edge");
      }
    }
    if (!valid_parity_tags(*graph, options.tags)) {
      fail(ErrorCode::invalid_input, "some cycle carries an odd number of P1 edges");
    }
    if (options.check_field) {
      auto const   norms = residual_grid(field, 3, options.residual_h);
      double const worst = *std::max_element(norms.begin(), norms.end());
      if (worst > options.residual_limit) {
        fail(ErrorCode::not_potential,
             "field residual " + std::to_string(worst) + " exceeds " + std::to_string(options.residual_limit));
      }
    }
    auto const          edges = graph->edges();
    std::vector<Matrix2> marks(edges.size());
    parallel_for(edges.size(), options.workers, [&](std::size_t k) {
      auto const   e      = edges[k];
      Parity const parity = tag_of(options.tags, e.from, e.to);
      marks[k]            = p_integral(field, embedding.curve(e.from, e.to),
                                       parity == Parity::even ? options.even_steps : options.odd_steps, parity);
    });
    Discretization out{MatrixMarking(graph, std::move(marks)), {}, {}};
    for (auto const& m : out.marking.values()) {
      out.relation_signs.push_back(m.det() > 0 ? 1 : -1);
    }
    out.potential = is_potential(out.marking, options.potential_tol);
    return out;
  }

}  // namespace balance_nets
