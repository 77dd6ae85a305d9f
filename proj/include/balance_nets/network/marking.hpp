#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "balance_nets/algebra/group.hpp"
#include "balance_nets/algebra/matrix2.hpp"
#include "balance_nets/error.hpp"
#include "balance_nets/network/graph.hpp"

namespace balance_nets {

  // One value per directed edge of a graph, indexed like graph.edges().
  template <typename Value>
  class BasicMarking {
   public:
    using value_type = Value;

    BasicMarking(std::shared_ptr<RelationGraph const> graph, std::vector<Value> values)
        : _graph(std::move(graph)), _values(std::move(values)) {
      if (!_graph) {
        fail(ErrorCode::invalid_input, "marking needs a graph");
      }
      if (_values.size() != _graph->edge_count()) {
        fail(ErrorCode::validation,
             "marking has " + std::to_string(_values.size()) + " values for "
                 + std::to_string(_graph->edge_count()) + " edges");
      }
    }

    RelationGraph const& graph() const noexcept {
      return *_graph;
    }

    std::shared_ptr<RelationGraph const> const& graph_ptr() const noexcept {
      return _graph;
    }

    std::vector<Value> const& values() const noexcept {
      return _values;
    }

    Value const& value(std::size_t edge) const {
      return _values.at(edge);
    }

    // The mark g_ij of edge (i, j); throws Error(invalid_input) when absent.
    Value const& at(std::size_t i, std::size_t j) const {
      auto e = _graph->edge_index(i, j);
      if (!e) {
        fail(ErrorCode::invalid_input,
             "(" + std::to_string(i) + ", " + std::to_string(j)
                 + ") is not an edge");
      }
      return _values[*e];
    }

   private:
    std::shared_ptr<RelationGraph const> _graph;
    std::vector<Value>                   _values;
  };

  using MatrixMarking = BasicMarking<Matrix2>;

  // A marking R = {g_ij} by elements of one reaction group.
  class Marking : public BasicMarking<GroupElement> {
   public:
    Marking(std::shared_ptr<RelationGraph const> graph,
            std::shared_ptr<ReactionGroup const> group,
            std::vector<GroupElement>            values);

    // Marks every edge (i, j) with mark(i, j).
    static Marking from_function(
        std::shared_ptr<RelationGraph const>                        graph,
        std::shared_ptr<ReactionGroup const>                        group,
        std::function<GroupElement(std::size_t, std::size_t)> const& mark);

    static Marking constant(std::shared_ptr<RelationGraph const> graph,
                            std::shared_ptr<ReactionGroup const> group,
                            GroupElement                         g);

    ReactionGroup const& group() const noexcept {
      return *_group;
    }

    std::shared_ptr<ReactionGroup const> const& group_ptr() const noexcept {
      return _group;
    }

    // g_ij == g_ji on every edge.
    bool is_symmetric() const;

    friend bool operator==(Marking const& a, Marking const& b) {
      return a.graph() == b.graph() && a.group().id() == b.group().id()
             && a.values() == b.values();
    }

   private:
    std::shared_ptr<ReactionGroup const> _group;
  };

}  // namespace balance_nets
