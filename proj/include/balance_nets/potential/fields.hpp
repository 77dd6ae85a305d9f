#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "balance_nets/network/marking.hpp"

namespace balance_nets {

  // Streams the potential symmetric markings of K_N by {e, g} for an
  // involution g: the first-row marks g(1, m), m = 2..N, are free and every
  // other mark is forced, g(j, m) = g(1, j) g(1, m). Emits 2^(N-1) markings,
  // ordered by the binary number whose bit m-2 selects g(1, m) = g.
  class PotentialFieldGenerator {
   public:
    // Throws Error(invalid_input) for N < 3 or N > 20, and when g is not an
    // involution of `group`.
    PotentialFieldGenerator(std::size_t                          n,
                            std::shared_ptr<ReactionGroup const> group,
                            GroupElement                         g);

    std::optional<Marking> next();

    void reset() noexcept {
      _next = 0;
    }

    std::uint64_t size() const noexcept {
      return std::uint64_t{1} << (_n - 1);
    }

   private:
    std::size_t                          _n;
    std::shared_ptr<ReactionGroup const> _group;
    std::shared_ptr<RelationGraph const> _graph;
    GroupElement                         _g;
    std::uint64_t                        _next = 0;
  };

  // All fields of the stream over the sign-flip group.
  std::vector<Marking> generate_potential_fields(std::size_t n);

  // The same fields built with the step recurrence
  // g(j, m) = g(j-1, j) g(j-1, m), j = 2..m-1, in stream order.
  std::vector<Marking> generate_potential_fields_recurrence(std::size_t n);

  // The marking of K_3 solving the main system of potential equations with
  // free parameters g12 = x1, g31 = x2, g32 = x3.
  Marking gamma3_solution_family(std::shared_ptr<ReactionGroup const> group,
                                 GroupElement                         x1,
                                 GroupElement                         x2,
                                 GroupElement                         x3);

  struct BalancePartition {
    std::vector<std::size_t>  first;   // contains node 0
    std::vector<std::size_t>  second;  // possibly empty
    std::vector<std::uint8_t> side;    // side[node] in {0, 1}
    std::vector<int>          sign;    // per edge, +1 or -1
  };

  // Two blocks with positive edges inside blocks and negative edges across,
  // when such a split exists. `sign` holds +1 / -1 per edge of `graph`.
  std::optional<BalancePartition> balance_from_signs(RelationGraph const& graph,
                                                     std::vector<int>     sign);

  using SignRule = std::function<int(GroupElement)>;

  // e -> +1, every other element -> -1.
  SignRule identity_sign_rule(ReactionGroup const& group);

  std::optional<BalancePartition> balance_partition(Marking const& r,
                                                    SignRule const& sign);

  std::optional<BalancePartition> balance_partition(Marking const& r);

  // Edge sign = sign of the determinant of its mark.
  std::optional<BalancePartition> balance_partition(MatrixMarking const& r);

}  // namespace balance_nets
