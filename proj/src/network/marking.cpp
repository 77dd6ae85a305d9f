#include "balance_nets/network/marking.hpp"

namespace balance_nets {

  Marking::Marking(std::shared_ptr<RelationGraph const> graph,
                   std::shared_ptr<ReactionGroup const> group,
                   std::vector<GroupElement>            values)
      : BasicMarking<GroupElement>(std::move(graph), std::move(values)),
        _group(std::move(group)) {
    if (!_group) {
      fail(ErrorCode::invalid_input, "marking needs a reaction group");
    }
    for (auto const& g : this->values()) {
      if (!_group->contains(g)) {
        fail(ErrorCode::mismatched_group,
             "marking value is not an element of the reaction group");
      }
    }
  }

  Marking Marking::from_function(
      std::shared_ptr<RelationGraph const>                        graph,
      std::shared_ptr<ReactionGroup const>                        group,
      std::function<GroupElement(std::size_t, std::size_t)> const& mark) {
    std::vector<GroupElement> values;
    values.reserve(graph->edge_count());
    for (auto const& e : graph->edges()) {
      values.push_back(mark(e.from, e.to));
    }
    return Marking(std::move(graph), std::move(group), std::move(values));
  }

  Marking Marking::constant(std::shared_ptr<RelationGraph const> graph,
                            std::shared_ptr<ReactionGroup const> group,
                            GroupElement                         g) {
    std::vector<GroupElement> values(graph->edge_count(), g);
    return Marking(std::move(graph), std::move(group), std::move(values));
  }

  bool Marking::is_symmetric() const {
    for (std::size_t e = 0; e < graph().edge_count(); ++e) {
      if (value(e) != value(graph().reverse(e))) {
        return false;
      }
    }
    return true;
  }

}  // namespace balance_nets
