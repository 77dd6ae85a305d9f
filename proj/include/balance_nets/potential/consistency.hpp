#pragma once

// Spanning-forest consistency check for edge-labelled directed graphs whose
// labels live in a group-like algebra. A labelling is consistent when every
// closed walk multiplies to the identity; this is decided exactly with a
// potential u built along a BFS forest and one check per edge.

#include <cstddef>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "balance_nets/algebra/group.hpp"
#include "balance_nets/algebra/matrix2.hpp"

namespace balance_nets {

  struct GroupOps {
    using value_type = GroupElement;

    ReactionGroup const* group;

    GroupElement identity() const {
      return group->identity();
    }

    GroupElement mul(GroupElement a, GroupElement b) const {
      return group->compose(a, b);
    }

    bool equal(GroupElement a, GroupElement b) const {
      return a == b;
    }
  };

  struct MatrixOps {
    using value_type = Matrix2;

    double tol;

    Matrix2 identity() const {
      return Matrix2::identity();
    }

    Matrix2 mul(Matrix2 const& a, Matrix2 const& b) const {
      return a * b;
    }

    bool equal(Matrix2 const& a, Matrix2 const& b) const {
      return approx_equal(a, b, tol);
    }
  };

  template <typename V>
  struct LabelledEdge {
    std::size_t from;
    std::size_t to;
    V           value;
  };

  template <typename V>
  struct ConsistencyResult {
    bool consistent = true;
    // Per node: the root of its tree and the product from that root.
    std::vector<std::size_t> root;
    std::vector<V>           potential;
    // On failure: a closed walk as edge indices, and its product.
    std::vector<std::size_t> witness;
    V                        witness_product{};
  };

  // Every edge must have at least one reverse edge for the witness walk to
  // close; the graphs this is used on are symmetric.
  template <typename Ops>
  ConsistencyResult<typename Ops::value_type>
  check_consistency(Ops const&                                              ops,
                    std::size_t                                             node_count,
                    std::vector<LabelledEdge<typename Ops::value_type>> const& edges) {
    using V = typename Ops::value_type;
    ConsistencyResult<V> result;

    auto product_of = [&](std::vector<std::size_t> const& walk) {
      V acc = ops.identity();
      for (std::size_t e : walk) {
        acc = ops.mul(acc, edges[e].value);
      }
      return acc;
    };
    auto fail_with = [&](std::vector<std::size_t> walk) {
      result.consistent      = false;
      result.witness_product = product_of(walk);
      result.witness         = std::move(walk);
      return result;
    };

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> between;
    std::vector<std::vector<std::size_t>> out(node_count);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      between[{edges[e].from, edges[e].to}].push_back(e);
      out[edges[e].from].push_back(e);
    }

    // Loops and 2-cycles first. Once they all multiply to the identity,
    // every reverse edge carries the inverse label and the tree walk below
    // has the product u(j) g u(k)^-1.
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto const& [from, to, value] = edges[e];
      if (from == to) {
        if (!ops.equal(value, ops.identity())) {
          return fail_with({e});
        }
        continue;
      }
      auto it = between.find({to, from});
      if (it == between.end()) {
        continue;
      }
      for (std::size_t r : it->second) {
        if (!ops.equal(ops.mul(value, edges[r].value), ops.identity())) {
          return fail_with({e, r});
        }
      }
    }

    std::vector<std::size_t> parent(node_count, edges.size());
    result.root.assign(node_count, node_count);
    result.potential.assign(node_count, ops.identity());
    for (std::size_t start = 0; start < node_count; ++start) {
      if (result.root[start] != node_count) {
        continue;
      }
      result.root[start] = start;
      std::queue<std::size_t> todo;
      todo.push(start);
      while (!todo.empty()) {
        std::size_t const v = todo.front();
        todo.pop();
        for (std::size_t e : out[v]) {
          std::size_t const w = edges[e].to;
          if (result.root[w] == node_count) {
            result.root[w]      = start;
            result.potential[w] = ops.mul(result.potential[v], edges[e].value);
            parent[w]           = e;
            todo.push(w);
          }
        }
      }
    }

    auto path_from_root = [&](std::size_t v) {
      std::vector<std::size_t> p;
      while (parent[v] != edges.size()) {
        p.push_back(parent[v]);
        v = edges[parent[v]].from;
      }
      return std::vector<std::size_t>(p.rbegin(), p.rend());
    };

    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto const& [from, to, value] = edges[e];
      if (ops.equal(ops.mul(result.potential[from], value), result.potential[to])) {
        continue;
      }
      std::vector<std::size_t> walk = path_from_root(from);
      walk.push_back(e);
      auto back = path_from_root(to);
      for (auto it = back.rbegin(); it != back.rend(); ++it) {
        auto const& t = edges[*it];
        walk.push_back(between.at({t.to, t.from}).front());
      }
      return fail_with(std::move(walk));
    }
    return result;
  }

}  // namespace balance_nets
