#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "balance_nets/network/marking.hpp"
#include "balance_nets/network/two_step.hpp"

namespace balance_nets {

  // u(k) = product along any path from `root` to k; u(root) = e.
  struct PotentialFunction {
    std::size_t               root = 0;
    std::vector<GroupElement> u;
  };

  struct PotentialCheck {
    bool                             potential = true;
    std::optional<PotentialFunction> function;          // when potential
    Path                             witness;           // closed, when not
    std::optional<GroupElement>      witness_product;   // != e, when not
  };

  struct MatrixPotentialCheck {
    bool                 potential = true;
    std::vector<Matrix2> u;        // when potential
    Path                 witness;  // closed, when not
    Matrix2              witness_product = Matrix2::identity();
  };

  // Left-to-right product g_{i1 i2} g_{i2 i3} ... along the path; e when
  // empty. Throws Error(invalid_input) for a non-contiguous path.
  GroupElement product_integral(Marking const& r, Path const& path);
  Matrix2      product_integral(MatrixMarking const& r, Path const& path);
  GroupElement product_integral_star(StarMarking const& r, StarPath const& path);

  // Every closed path multiplies to e. Decided with a BFS spanning tree from
  // node 0 and one check per edge.
  PotentialCheck is_potential(Marking const& r);

  // As above with products compared to E in the max-abs norm within tol.
  MatrixPotentialCheck is_potential(MatrixMarking const& r, double tol);

  struct StarPotentialCheck {
    bool                      potential = true;
    std::vector<std::size_t>  root;  // per node: smallest node of its component
    std::vector<GroupElement> u;     // product of a star path root -> node
    StarPath                  witness;
    std::optional<GroupElement> witness_product;
  };

  // Potentiality of R* on every component of Γ* (condition A1).
  StarPotentialCheck star_potential(StarMarking const& r);

  bool check_A1(Marking const& r);

  // a_i = g_ij g_ji for each node when it does not depend on the neighbour j
  // (condition A2).
  std::optional<std::vector<GroupElement>> check_A2(Marking const& r);

}  // namespace balance_nets
