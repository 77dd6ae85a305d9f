#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace balance_nets {

  // Groups larger than this are refused: characteristic equations are solved
  // by exhaustive search.
  inline constexpr std::size_t default_group_bound = 720;

  // The finite set E of automaton states, as an ordered list of labels.
  class StateSet {
   public:
    explicit StateSet(std::vector<std::string> labels);

    std::size_t size() const noexcept {
      return _labels.size();
    }

    std::string const& label(std::size_t i) const {
      return _labels.at(i);
    }

    std::vector<std::string> const& labels() const noexcept {
      return _labels;
    }

    std::optional<std::size_t> index_of(std::string const& label) const;

    friend bool operator==(StateSet const&, StateSet const&) = default;

   private:
    std::vector<std::string> _labels;
  };

  // An element of a particular ReactionGroup. Elements of different groups
  // compare unequal and are rejected by the group operations.
  struct GroupElement {
    std::uint32_t group_id = 0;
    std::uint32_t index    = 0;

    friend auto operator<=>(GroupElement const&, GroupElement const&) = default;
  };

  // A finite group of permutations of a StateSet with a precomputed
  // composition table. compose(g, h) is g after h: (g h)(x) = g(h(x)).
  class ReactionGroup {
   public:
    struct NamedPermutation {
      std::string              name;
      std::vector<std::size_t> perm;  // perm[x] = image of state x
    };

    // Validates bijectivity, distinctness, the identity, and closure under
    // composition. With `double_negation` set, every element must square to
    // the identity.
    ReactionGroup(StateSet                      states,
                  std::vector<NamedPermutation> elements,
                  std::string const&            identity_name,
                  bool                          double_negation = false,
                  std::size_t                   bound = default_group_bound);

    // {e, g} acting on {+1, -1} by g(x) = -x.
    static ReactionGroup sign_flip();
    // All permutations of {1, ..., n}; element names in cycle notation.
    static ReactionGroup symmetric(std::size_t n);
    // The rotations of {0, ..., n-1}; "r^k" maps x to x + k mod n.
    static ReactionGroup cyclic(std::size_t n);

    std::uint32_t id() const noexcept {
      return _id;
    }

    std::size_t size() const noexcept {
      return _names.size();
    }

    StateSet const& states() const noexcept {
      return _states;
    }

    bool double_negation() const noexcept {
      return _double_negation;
    }

    // True when every element squares to the identity, flagged or not.
    bool is_involutive() const;

    GroupElement identity() const noexcept {
      return {_id, _identity};
    }

    GroupElement element(std::size_t i) const;
    std::vector<GroupElement> elements() const;

    bool contains(GroupElement g) const noexcept {
      return g.group_id == _id && g.index < size();
    }

    std::string const& name(GroupElement g) const;
    std::optional<GroupElement> find(std::string const& name) const;
    std::optional<GroupElement> find(std::span<std::size_t const> perm) const;

    std::span<std::uint16_t const> perm(GroupElement g) const;

    std::size_t apply(GroupElement g, std::size_t state) const;

    GroupElement compose(GroupElement g, GroupElement h) const;
    GroupElement inverse(GroupElement g) const;

    // Left-to-right product g[0] g[1] ... g[k-1]; identity when empty.
    GroupElement product(std::span<GroupElement const> gs) const;

   private:
    void check(GroupElement g) const;

    std::uint32_t                                _id;
    StateSet                                     _states;
    std::vector<std::string>                     _names;
    std::vector<std::uint16_t>                   _perms;  // size() x |E|
    std::vector<std::uint16_t>                   _table;  // size() x size()
    std::vector<std::uint16_t>                   _inverse;
    std::uint32_t                                _identity = 0;
    bool                                         _double_negation = false;
    std::unordered_map<std::string, std::uint32_t> _by_name;
  };

  // Number of <g>-orbits partitioning E, i.e. the number of cycles of g.
  std::size_t orbit_count(ReactionGroup const& group, GroupElement g);

  // Number of <g>-orbits meeting the given subset of states.
  std::size_t orbit_count(ReactionGroup const&         group,
                          GroupElement                 g,
                          std::span<std::size_t const> subset);

  // Cycles of (t, r) -> (v r, w t) on E x E.
  std::size_t pair_orbit_count(ReactionGroup const& group,
                               GroupElement         v,
                               GroupElement         w);

  // All v with v v = a, most orbits first (ties by element index).
  std::vector<GroupElement>
  solve_characteristic(ReactionGroup const& group,
                       GroupElement         a,
                       std::size_t          bound = default_group_bound);

  // All (v, w) with v w = a_i and w v = a_j, ordered by descending
  // pair_orbit_count.
  std::vector<std::pair<GroupElement, GroupElement>>
  solve_characteristic_pair(ReactionGroup const& group,
                            GroupElement         a_i,
                            GroupElement         a_j,
                            std::size_t          bound = default_group_bound);

}  // namespace balance_nets
