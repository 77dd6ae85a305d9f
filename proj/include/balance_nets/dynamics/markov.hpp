#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "balance_nets/network/marking.hpp"

namespace balance_nets {

  inline constexpr std::size_t default_bound_states = 4096;
  inline constexpr double      tau_dyn              = 1e-12;

  // x[i] is the index (into the group's state set) of node i's state.
  using SystemState = std::vector<std::size_t>;

  // Enumeration of W = E^A in lexicographic node-major order: node 0 is the
  // most significant digit.
  class StateSpace {
   public:
    // Throws Error(bound_exceeded) when |E|^|A| exceeds `bound`.
    StateSpace(std::size_t nodes, std::size_t states, std::size_t bound = default_bound_states);

    std::size_t nodes() const noexcept {
      return _nodes;
    }

    std::size_t states() const noexcept {
      return _states;
    }

    std::size_t size() const noexcept {
      return _size;
    }

    std::size_t index(SystemState const& x) const;
    SystemState decode(std::size_t index) const;

   private:
    std::size_t _nodes, _states, _size;
  };

  // Per node i, positive weights over graph.neighbors(i) in that order.
  struct ChoiceDistribution {
    std::vector<std::vector<double>> weights;

    static ChoiceDistribution uniform(RelationGraph const& graph);

    // Throws Error(validation) when a weight is not positive and finite or a
    // node's weight count differs from its degree. Weights need not sum to 1;
    // they are normalised per node.
    void validate(RelationGraph const& graph) const;

    bool is_uniform() const;
  };

  // The distinct options g_ij(x_j), j in ∂{i}, of node i in ascending order.
  std::vector<std::size_t> node_options(Marking const& r, SystemState const& x, std::size_t i);

  // The product set F(x) in lexicographic order (duplicates collapse).
  std::vector<SystemState> apply_F(Marking const& r, SystemState const& x);

  // |F(x)| without materialising the set.
  std::size_t image_size(Marking const& r, SystemState const& x);

  struct MarkovOptions {
    std::size_t bound_states = default_bound_states;
    bool        exact        = false;  // integer numerators; uniform Q only
    std::size_t workers      = 1;
  };

  // Sparse row-stochastic matrix over the full state space.
  struct MarkovModel {
    StateSpace               space{2, 2};
    std::vector<std::size_t> row_ptr;  // size() + 1 entries
    std::vector<std::size_t> cols;     // ascending within a row
    std::vector<double>      probs;
    // Exact mode: probs[k] == numerators[k] / denominator.
    std::vector<std::uint64_t> numerators;
    std::uint64_t              denominator = 0;

    std::size_t size() const noexcept {
      return space.size();
    }

    std::span<std::size_t const> row_cols(std::size_t x) const {
      return {cols.data() + row_ptr[x], row_ptr[x + 1] - row_ptr[x]};
    }

    std::span<double const> row_probs(std::size_t x) const {
      return {probs.data() + row_ptr[x], row_ptr[x + 1] - row_ptr[x]};
    }

    double prob(std::size_t x, std::size_t y) const;

    bool exact() const noexcept {
      return denominator != 0;
    }
  };

  // p(x -> y) = sum over choice tuples mapping x to y of prod_i q_i(choice).
  // Rows are built in parallel over options.workers threads.
  MarkovModel build_markov(Marking const&            r,
                           ChoiceDistribution const& q,
                           MarkovOptions const&      options = {});

  MarkovModel build_markov(Marking const& r, MarkovOptions const& options = {});

  struct ClassStructure {
    // Closed communicating classes, each sorted, ordered by smallest state.
    std::vector<std::vector<std::size_t>> recurrent;
    std::vector<std::size_t>              periods;
    // Index into `recurrent`, or nullopt for transient states.
    std::vector<std::optional<std::size_t>> class_of;
  };

  ClassStructure analyze_classes(MarkovModel const& p);

  // Number of extreme stationary measures (closed classes).
  std::size_t stationary_count(MarkovModel const& p);

  // P^n converges iff every closed class is aperiodic.
  bool limit_exists(MarkovModel const& p);

  // Every state reaches w0 and no transition leaves w0.
  bool essential_check(MarkovModel const& p, std::vector<std::size_t> const& w0);

}  // namespace balance_nets
