#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "balance_nets/semigroup/control.hpp"

namespace balance_nets {

  inline constexpr std::size_t default_bound_semigroup = 7;
  inline constexpr std::size_t default_bound_words     = 1'000'000;

  // A minimal left ideal of the word semigroup M(B)*. Every element
  // generates it.
  struct LeftIdeal {
    std::vector<ControlWord> elements;  // ascending
    // Control-matrix indices (into control_matrices(graph)) whose
    // left-to-right product is elements.front().
    std::vector<std::size_t> witness;

    bool contains(ControlWord const& w) const;

    // The constant column when the ideal is {I_k}.
    std::optional<std::size_t> constant_column() const;
  };

  enum class IdealMethod {
    structural,  // minimum-rank word, its left closure, and right translates
    exhaustive   // the whole semigroup, then closed classes of left multiplication
  };

  struct IdealOptions {
    IdealMethod method         = IdealMethod::structural;
    std::size_t bound_nodes    = default_bound_semigroup;
    std::size_t bound_words    = default_bound_words;
  };

  struct IdealEnumeration {
    std::vector<LeftIdeal> ideals;  // ordered by smallest element
    bool                   bipartite = false;
    std::size_t            expected  = 0;  // n, or |A1| |A2| when bipartite
    std::size_t            words     = 0;  // semigroup size (exhaustive only)

    bool matches_expected() const noexcept {
      return ideals.size() == expected;
    }

    // Index of the ideal containing w.
    std::optional<std::size_t> find(ControlWord const& w) const;
  };

  // Throws Error(bound_exceeded) past bound_nodes nodes or bound_words words.
  IdealEnumeration enumerate_ideals(RelationGraph const& graph, IdealOptions const& options = {});

  struct ConstructiveChain {
    std::vector<std::set<std::size_t>> layers;   // A_0, A_1, ..., A_m
    std::vector<ControlWord>           factors;  // C_1, ..., C_m
    ControlWord                        product;  // C_1 C_2 ... C_m
  };

  // A_0 = {i} (or {i, j} for the smallest neighbour j when the graph is
  // bipartite), A_{k+1} = neighbours of A_k, until A_m is every node. C_k
  // sends A_{m-k+1} into A_{m-k}, so the product lands in A_0.
  ConstructiveChain constructive_chain(RelationGraph const& graph, std::size_t i);

  struct Trajectory {
    std::vector<ControlWord>   words;  // C_0, C_1 C_0, C_2 C_1 C_0, ...
    std::optional<std::size_t> absorbed_at;  // index into words
    std::optional<std::size_t> ideal;
  };

  // Left-multiplies by uniformly drawn control matrices for at most `steps`
  // steps, stopping at the first word inside an ideal. With `start` the
  // trajectory begins at that word instead of a random C_0.
  Trajectory random_trajectory(RelationGraph const&              graph,
                               IdealEnumeration const&           ideals,
                               std::size_t                       steps,
                               std::uint64_t                     seed,
                               std::optional<ControlWord> const& start = std::nullopt);

  struct AbsorptionStats {
    std::size_t              runs     = 0;
    std::size_t              absorbed = 0;
    std::vector<std::size_t> per_ideal;
    std::vector<std::size_t> absorption_steps;  // absorbed runs only, in run order
  };

  // Run i uses seed + i.
  AbsorptionStats absorption_statistics(RelationGraph const&    graph,
                                        IdealEnumeration const& ideals,
                                        std::size_t             steps,
                                        std::size_t             runs,
                                        std::uint64_t           seed,
                                        std::size_t             workers = 1);

  // W = union over ideal elements m of (m * Rg) x, x in Z. An empty Z means
  // the whole state space.
  std::vector<SystemState> final_states(IdealEnumeration const&         ideals,
                                        ReactionMatrix const&           rg,
                                        std::vector<SystemState> const& z = {});

}  // namespace balance_nets
