#include "balance_nets/potential/potential.hpp"

#include "balance_nets/potential/consistency.hpp"

namespace balance_nets {

  namespace {
    template <typename Ops, typename Mark>
    auto edge_list(Mark const& r) {
      std::vector<LabelledEdge<typename Ops::value_type>> edges;
      auto const& g = r.graph();
      edges.reserve(g.edge_count());
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        edges.push_back({g.edge(e).from, g.edge(e).to, r.value(e)});
      }
      return edges;
    }

    Path to_path(RelationGraph const& g, std::vector<std::size_t> const& walk) {
      Path p;
      for (std::size_t e : walk) {
        p.push_back(g.edge(e));
      }
      return p;
    }
  }  // namespace

  GroupElement product_integral(Marking const& r, Path const& path) {
    check_path(r.graph(), path);
    auto const&  group = r.group();
    GroupElement acc   = group.identity();
    for (auto const& step : path) {
      acc = group.compose(acc, r.at(step.from, step.to));
    }
    return acc;
  }

  Matrix2 product_integral(MatrixMarking const& r, Path const& path) {
    check_path(r.graph(), path);
    Matrix2 acc = Matrix2::identity();
    for (auto const& step : path) {
      acc = acc * r.at(step.from, step.to);
    }
    return acc;
  }

  GroupElement product_integral_star(StarMarking const& r, StarPath const& path) {
    check_star_path(r.graph, path);
    GroupElement acc = r.group->identity();
    for (auto const& step : path) {
      acc = r.group->compose(acc, r.value(step));
    }
    return acc;
  }

  PotentialCheck is_potential(Marking const& r) {
    GroupOps const ops{&r.group()};
    auto const     res = check_consistency(ops, r.graph().node_count(), edge_list<GroupOps>(r));
    PotentialCheck out;
    out.potential = res.consistent;
    if (res.consistent) {
      out.function = PotentialFunction{0, res.potential};
    } else {
      out.witness         = to_path(r.graph(), res.witness);
      out.witness_product = res.witness_product;
    }
    return out;
  }

  MatrixPotentialCheck is_potential(MatrixMarking const& r, double tol) {
    MatrixOps const ops{tol};
    auto const res = check_consistency(ops, r.graph().node_count(), edge_list<MatrixOps>(r));
    MatrixPotentialCheck out;
    out.potential = res.consistent;
    if (res.consistent) {
      out.u = res.potential;
    } else {
      out.witness         = to_path(r.graph(), res.witness);
      out.witness_product = res.witness_product;
    }
    return out;
  }

  StarPotentialCheck star_potential(StarMarking const& r) {
    std::vector<LabelledEdge<GroupElement>> edges;
    auto const                              star_edges = r.graph.edges();
    edges.reserve(star_edges.size());
    for (std::size_t e = 0; e < star_edges.size(); ++e) {
      edges.push_back({star_edges[e].from, star_edges[e].to, r.values[e]});
    }
    GroupOps const ops{r.group.get()};
    auto const     res = check_consistency(ops, r.graph.node_count(), edges);
    StarPotentialCheck out;
    out.potential = res.consistent;
    if (res.consistent) {
      out.root = res.root;
      out.u    = res.potential;
    } else {
      for (std::size_t e : res.witness) {
        out.witness.push_back(star_edges[e]);
      }
      out.witness_product = res.witness_product;
    }
    return out;
  }

  bool check_A1(Marking const& r) {
    return star_potential(star_marking(r)).potential;
  }

  std::optional<std::vector<GroupElement>> check_A2(Marking const& r) {
    auto const&               graph = r.graph();
    auto const&               group = r.group();
    std::vector<GroupElement> a;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
      std::optional<GroupElement> ai;
      for (std::size_t j : graph.neighbors(i)) {
        GroupElement const v = group.compose(r.at(i, j), r.at(j, i));
        if (ai && *ai != v) {
          return std::nullopt;
        }
        ai = v;
      }
      a.push_back(*ai);
    }
    return a;
  }

}  // namespace balance_nets
