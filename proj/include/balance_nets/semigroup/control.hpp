#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "balance_nets/dynamics/markov.hpp"
#include "balance_nets/network/marking.hpp"
#include "balance_nets/simd/kernels.hpp"

namespace balance_nets {

  inline constexpr std::size_t max_word_size = 16;

  // A 0/1 row-stochastic n x n matrix, stored as the column holding the 1 of
  // each row. Products of such matrices stay in this form:
  // (A B).column(i) = B.column(A.column(i)).
  class ControlWord {
   public:
    // Throws Error(invalid_input) unless 1 <= n <= 16 and every column < n.
    explicit ControlWord(std::span<std::size_t const> columns);
    ControlWord(std::initializer_list<std::size_t> columns);

    // Throws Error(invalid_input) unless every row holds exactly one 1.
    static ControlWord from_matrix(std::vector<std::vector<int>> const& m);
    static ControlWord identity(std::size_t n);
    // Every row has its 1 in column k.
    static ControlWord constant(std::size_t n, std::size_t k);

    std::size_t size() const noexcept {
      return _n;
    }

    std::size_t column(std::size_t row) const {
      return _map.img.at(row);
    }

    int entry(std::size_t i, std::size_t j) const {
      return column(i) == j ? 1 : 0;
    }

    std::vector<std::vector<int>> matrix() const;

    // Number of distinct columns used.
    std::size_t rank() const;

    simd::Transf16 const& transf() const noexcept {
      return _map;
    }

    static ControlWord from_transf(simd::Transf16 const& t, std::size_t n);

    friend ControlWord operator*(ControlWord const& a, ControlWord const& b);

    friend bool operator==(ControlWord const& a, ControlWord const& b) noexcept {
      return a._n == b._n && a._map == b._map;
    }

    friend std::strong_ordering operator<=>(ControlWord const& a, ControlWord const& b) noexcept {
      if (auto c = a._n <=> b._n; c != 0) {
        return c;
      }
      return a._map.img <=> b._map.img;
    }

   private:
    ControlWord() = default;

    std::size_t    _n = 0;
    simd::Transf16 _map{};
  };

  // Zero diagonal and every 1 on an edge of the graph.
  bool is_control_matrix(ControlWord const& c, RelationGraph const& graph);

  // All control matrices M(B), Π deg(i) of them. Row i ranges over
  // graph.neighbors(i) with node 0 as the most significant digit.
  std::vector<ControlWord> control_matrices(RelationGraph const& graph);

  // The control matrix selecting choices[i]-th neighbour at node i.
  ControlWord control_matrix(RelationGraph const& graph, std::span<std::size_t const> choices);

  // Left-to-right product; throws Error(invalid_input) when empty.
  ControlWord word_product(std::span<ControlWord const> factors);

  // Rg: the complete marking with e on the diagonal.
  class ReactionMatrix {
   public:
    ReactionMatrix(std::shared_ptr<ReactionGroup const> group,
                   std::size_t                          n,
                   std::vector<GroupElement>            entries);

    // Uses the marking directly on a complete graph, otherwise its complete
    // extension (which requires potentiality).
    static ReactionMatrix from_marking(Marking const& r);

    std::size_t size() const noexcept {
      return _n;
    }

    ReactionGroup const& group() const noexcept {
      return *_group;
    }

    std::shared_ptr<ReactionGroup const> const& group_ptr() const noexcept {
      return _group;
    }

    GroupElement at(std::size_t i, std::size_t j) const {
      return _entries.at(i * _n + j);
    }

    // g_ij g_jk = g_ik for all i, j, k.
    bool is_potential() const;

   private:
    std::shared_ptr<ReactionGroup const> _group;
    std::size_t                          _n;
    std::vector<GroupElement>            _entries;
  };

  // A matrix of group elements whose present entries follow a ControlWord
  // pattern: row i holds values[i] in column pattern.column(i).
  struct OperatorMatrix {
    std::shared_ptr<ReactionGroup const> group;
    ControlWord                          pattern;
    std::vector<GroupElement>            values;

    std::optional<GroupElement> entry(std::size_t i, std::size_t j) const;

    // y_i = values[i] applied to x[pattern.column(i)].
    SystemState apply(SystemState const& x) const;

    friend bool operator==(OperatorMatrix const&, OperatorMatrix const&) = default;
  };

  // (X Y)(i, k) = X(i, j) Y(j, k) with j the present column of row i in X.
  OperatorMatrix operator*(OperatorMatrix const& x, OperatorMatrix const& y);

  OperatorMatrix star_product(ControlWord const& c, ReactionMatrix const& rg);

  struct RhoResult {
    ControlWord    word;
    OperatorMatrix value;       // word * Rg
    OperatorMatrix factorwise;  // (C_1 * Rg) (C_2 * Rg) ...
    bool           homomorphic = false;
  };

  // Evaluates ρ on the left-to-right product of the factors and compares it
  // with the product of the factor images.
  RhoResult rho_report(std::span<ControlWord const> factors, ReactionMatrix const& rg);

  // As rho_report, throwing Error(not_potential) when the images disagree.
  OperatorMatrix rho(std::span<ControlWord const> factors, ReactionMatrix const& rg);

  // Random words of length 1..max_length drawn from M(B) until ρ(w1 w2) differs
  // from ρ(w1) ρ(w2). Returns the offending pair.
  std::optional<std::pair<std::vector<ControlWord>, std::vector<ControlWord>>>
  find_homomorphism_failure(RelationGraph const&  graph,
                            ReactionMatrix const& rg,
                            std::uint64_t         seed,
                            std::size_t           attempts   = 1000,
                            std::size_t           max_length = 4);

}  // namespace balance_nets
