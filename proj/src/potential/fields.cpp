#include "balance_nets/potential/fields.hpp"

#include <queue>

namespace balance_nets {

  PotentialFieldGenerator::PotentialFieldGenerator(
      std::size_t                          n,
      std::shared_ptr<ReactionGroup const> group,
      GroupElement                         g)
      : _n(n), _group(std::move(group)), _g(g) {
    if (n < 3 || n > 20) {
      fail(ErrorCode::invalid_input, "field generation needs 3 <= N <= 20");
    }
    if (!_group || !_group->contains(g)) {
      fail(ErrorCode::mismatched_group, "g is not an element of the group");
    }
    if (_group->compose(g, g) != _group->identity()) {
      fail(ErrorCode::invalid_input, "g must be an involution");
    }
    _graph = std::make_shared<RelationGraph const>(RelationGraph::complete(n));
  }

  std::optional<Marking> PotentialFieldGenerator::next() {
    if (_next >= size()) {
      return std::nullopt;
    }
    std::uint64_t const       mask = _next++;
    auto const&               group = *_group;
    std::vector<GroupElement> row(_n, group.identity());
    for (std::size_t m = 1; m < _n; ++m) {
      if ((mask >> (m - 1)) & 1U) {
        row[m] = _g;
      }
    }
    return Marking::from_function(_graph, _group, [&](std::size_t i, std::size_t j) {
      if (i == 0) {
        return row[j];
      }
      if (j == 0) {
        return row[i];
      }
      return group.compose(row[i], row[j]);
    });
  }

  std::vector<Marking> generate_potential_fields(std::size_t n) {
    auto                    group = std::make_shared<ReactionGroup const>(ReactionGroup::sign_flip());
    PotentialFieldGenerator gen(n, group, *group->find("g"));
    std::vector<Marking>    out;
    while (auto m = gen.next()) {
      out.push_back(std::move(*m));
    }
    return out;
  }

  std::vector<Marking> generate_potential_fields_recurrence(std::size_t n) {
    if (n < 3 || n > 20) {
      fail(ErrorCode::invalid_input, "field generation needs 3 <= N <= 20");
    }
    auto group = std::make_shared<ReactionGroup const>(ReactionGroup::sign_flip());
    auto graph = std::make_shared<RelationGraph const>(RelationGraph::complete(n));
    GroupElement const e = group->identity();
    GroupElement const g = *group->find("g");

    std::vector<Marking> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
      std::vector<std::vector<GroupElement>> mark(n, std::vector<GroupElement>(n, e));
      for (std::size_t m = 1; m < n; ++m) {
        mark[0][m] = ((mask >> (m - 1)) & 1U) ? g : e;
      }
      // Step m fills column m from the rows above it.
      for (std::size_t m = 2; m < n; ++m) {
        for (std::size_t j = 1; j < m; ++j) {
          mark[j][m] = group->compose(mark[j - 1][j], mark[j - 1][m]);
        }
      }
      out.push_back(Marking::from_function(graph, group, [&](std::size_t i, std::size_t j) {
        return i < j ? mark[i][j] : mark[j][i];
      }));
    }
    return out;
  }

  Marking gamma3_solution_family(std::shared_ptr<ReactionGroup const> group,
                                 GroupElement                         x1,
                                 GroupElement                         x2,
                                 GroupElement                         x3) {
    auto const& G  = *group;
    auto        mul = [&](std::initializer_list<GroupElement> xs) {
      return G.product(std::vector<GroupElement>(xs));
    };
    GroupElement const y3 = G.inverse(x3);
    GroupElement const g12 = x1;
    GroupElement const g31 = x2;
    GroupElement const g32 = x3;
    GroupElement const g21 = mul({y3, x2, x1, y3, x2});
    GroupElement const g13 = mul({x1, y3, x2, x1, y3});
    GroupElement const g23 = mul({y3, x2, x1, y3, x2, x1, y3});
    GroupElement const table[3][3] = {{G.identity(), g12, g13},
                                      {g21, G.identity(), g23},
                                      {g31, g32, G.identity()}};
    auto graph = std::make_shared<RelationGraph const>(RelationGraph::complete(3));
    return Marking::from_function(graph, std::move(group),
                                  [&](std::size_t i, std::size_t j) { return table[i][j]; });
  }

  std::optional<BalancePartition> balance_from_signs(RelationGraph const& graph,
                                                     std::vector<int>     sign) {
    if (sign.size() != graph.edge_count()) {
      fail(ErrorCode::invalid_input, "one sign per edge is required");
    }
    for (std::size_t e = 0; e < sign.size(); ++e) {
      if (sign[e] != 1 && sign[e] != -1) {
        fail(ErrorCode::invalid_input, "edge signs must be +1 or -1");
      }
      if (sign[e] != sign[graph.reverse(e)]) {
        return std::nullopt;
      }
    }
    std::size_t const         n = graph.node_count();
    std::vector<std::uint8_t> side(n, 2);
    std::queue<std::size_t>   todo;
    side[0] = 0;
    todo.push(0);
    while (!todo.empty()) {
      std::size_t const v = todo.front();
      todo.pop();
      for (std::size_t w : graph.neighbors(v)) {
        int const          s    = sign[*graph.edge_index(v, w)];
        std::uint8_t const want = s > 0 ? side[v] : static_cast<std::uint8_t>(1 - side[v]);
        if (side[w] == 2) {
          side[w] = want;
          todo.push(w);
        } else if (side[w] != want) {
          return std::nullopt;
        }
      }
    }
    BalancePartition out;
    for (std::size_t v = 0; v < n; ++v) {
      (side[v] == 0 ? out.first : out.second).push_back(v);
    }
    out.side = std::move(side);
    out.sign = std::move(sign);
    return out;
  }

  SignRule identity_sign_rule(ReactionGroup const& group) {
    GroupElement const e = group.identity();
    return [e](GroupElement g) { return g == e ? 1 : -1; };
  }

  std::optional<BalancePartition> balance_partition(Marking const& r,
                                                    SignRule const& sign) {
    std::vector<int> s;
    for (auto const& g : r.values()) {
      s.push_back(sign(g));
    }
    return balance_from_signs(r.graph(), std::move(s));
  }

  std::optional<BalancePartition> balance_partition(Marking const& r) {
    return balance_partition(r, identity_sign_rule(r.group()));
  }

  std::optional<BalancePartition> balance_partition(MatrixMarking const& r) {
    std::vector<int> s;
    for (auto const& m : r.values()) {
      double const d = m.det();
      if (d == 0.0) {
        fail(ErrorCode::singular, "edge mark with zero determinant has no sign");
      }
      s.push_back(d > 0 ? 1 : -1);
    }
    return balance_from_signs(r.graph(), std::move(s));
  }

}  // namespace balance_nets
