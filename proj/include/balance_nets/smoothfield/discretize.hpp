#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "balance_nets/network/marking.hpp"
#include "balance_nets/potential/potential.hpp"
#include "balance_nets/smoothfield/field.hpp"

namespace balance_nets {

  struct EdgeQuadratureRule {
    Parity      parity = Parity::even;
    std::size_t steps  = 1024;
  };

  using UndirectedEdge = std::pair<std::size_t, std::size_t>;  // first < second

  // Node positions in the unit square and optional curves per undirected
  // edge, oriented from the smaller to the larger node. Edges without a
  // curve use the straight segment between their nodes.
  struct Embedding {
    std::vector<Point>                           nodes;
    std::map<UndirectedEdge, ParameterizedCurve> curves;

    // The curve from node i to node j.
    ParameterizedCurve curve(std::size_t i, std::size_t j) const;
  };

  // Tags are per undirected edge; missing edges use the default parity.
  using ParityTags = std::map<UndirectedEdge, Parity>;

  // Every cycle holds an even number of P1 edges exactly when the P1 edges
  // form a cut.
  bool valid_parity_tags(RelationGraph const& graph, ParityTags const& tags);

  // All valid tag assignments, listed over graph undirected edges in
  // ascending order. Throws Error(bound_exceeded) beyond 20 edges.
  std::vector<ParityTags> valid_tag_assignments(RelationGraph const& graph);

  struct DiscretizeOptions {
    std::size_t even_steps     = 1024;
    std::size_t odd_steps      = 1025;
    ParityTags  tags;                   // absent edges are P2
    bool        check_field    = true;  // residual screen before integrating
    double      residual_h     = 1e-3;
    double      residual_limit = 1e-4;
    double      potential_tol  = tau_num;
    std::size_t workers        = 1;
  };

  struct Discretization {
    MatrixMarking        marking;
    std::vector<int>     relation_signs;  // sign of det per directed edge
    MatrixPotentialCheck potential;
  };

  // Throws Error(invalid_input) when the tags put an odd number of P1 edges
  // on some cycle or the embedding does not fit the graph, and
  // Error(not_potential) when the residual screen fails.
  Discretization discretize(InvolutionField const&               field,
                            std::shared_ptr<RelationGraph const> graph,
                            Embedding const&                     embedding,
                            DiscretizeOptions const&             options = {});

}  // namespace balance_nets
