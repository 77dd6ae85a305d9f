#include "balance_nets/algebra/group.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <string>
#include <unordered_set>

#include "balance_nets/error.hpp"

namespace balance_nets {

  namespace {
    std::uint32_t next_group_id() {
      static std::atomic<std::uint32_t> counter{1};
      return counter.fetch_add(1, std::memory_order_relaxed);
    }

    std::u16string key_of(std::span<std::uint16_t const> perm) {
      return std::u16string(perm.begin(), perm.end());
    }

    std::string cycle_name(std::vector<std::size_t> const& perm,
                           std::vector<std::string> const& labels) {
      std::vector<bool> seen(perm.size(), false);
      std::string       out;
      for (std::size_t start = 0; start < perm.size(); ++start) {
        if (seen[start] || perm[start] == start) {
          continue;
        }
        out += '(';
        std::size_t x = start;
        bool        first = true;
        while (!seen[x]) {
          seen[x] = true;
          if (!first) {
            out += ' ';
          }
          out += labels[x];
          first = false;
          x     = perm[x];
        }
        out += ')';
      }
      return out.empty() ? "e" : out;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // StateSet
  ////////////////////////////////////////////////////////////////////////

  StateSet::StateSet(std::vector<std::string> labels)
      : _labels(std::move(labels)) {
    if (_labels.empty()) {
      fail(ErrorCode::validation, "the state set must not be empty");
    }
    std::unordered_set<std::string> seen;
    for (auto const& l : _labels) {
      if (!seen.insert(l).second) {
        fail(ErrorCode::validation, "duplicate state label \"" + l + "\"");
      }
    }
  }

  std::optional<std::size_t> StateSet::index_of(std::string const& label) const {
    auto it = std::find(_labels.begin(), _labels.end(), label);
    if (it == _labels.end()) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - _labels.begin());
  }

  ////////////////////////////////////////////////////////////////////////
  // ReactionGroup
  ////////////////////////////////////////////////////////////////////////

  ReactionGroup::ReactionGroup(StateSet                      states,
                               std::vector<NamedPermutation> elements,
                               std::string const&            identity_name,
                               bool                          double_negation,
                               std::size_t                   bound)
      : _id(next_group_id()),
        _states(std::move(states)),
        _double_negation(double_negation) {
    std::size_t const n = _states.size();
    std::size_t const m = elements.size();
    if (m == 0) {
      fail(ErrorCode::validation, "a reaction group needs at least one element");
    }
    if (m > bound) {
      fail(ErrorCode::bound_exceeded,
           "reaction group has " + std::to_string(m)
               + " elements, more than the bound " + std::to_string(bound));
    }
    if (n > 0xFFFF) {
      fail(ErrorCode::bound_exceeded, "state set too large");
    }

    std::unordered_map<std::u16string, std::uint32_t> by_perm;
    _perms.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      auto const& e = elements[i];
      if (e.perm.size() != n) {
        fail(ErrorCode::validation,
             "element \"" + e.name + "\" has " + std::to_string(e.perm.size())
                 + " images but there are " + std::to_string(n) + " states");
      }
      std::vector<bool> hit(n, false);
      for (std::size_t x : e.perm) {
        if (x >= n || hit[x]) {
          fail(ErrorCode::validation,
               "element \"" + e.name + "\" is not a bijection of the states");
        }
        hit[x] = true;
      }
      std::u16string key(e.perm.begin(), e.perm.end());
      if (!by_perm.emplace(key, static_cast<std::uint32_t>(i)).second) {
        fail(ErrorCode::validation,
             "element \"" + e.name + "\" duplicates another element");
      }
      if (!_by_name.emplace(e.name, static_cast<std::uint32_t>(i)).second) {
        fail(ErrorCode::validation, "duplicate element name \"" + e.name + "\"");
      }
      _names.push_back(e.name);
      _perms.insert(_perms.end(), e.perm.begin(), e.perm.end());
    }

    auto id_it = _by_name.find(identity_name);
    if (id_it == _by_name.end()) {
      fail(ErrorCode::validation,
           "identity \"" + identity_name + "\" is not an element");
    }
    _identity = id_it->second;
    for (std::size_t x = 0; x < n; ++x) {
      if (_perms[_identity * n + x] != x) {
        fail(ErrorCode::validation,
             "identity \"" + identity_name + "\" does not fix every state");
      }
    }

    _table.resize(m * m);
    std::vector<std::uint16_t> buf(n);
    for (std::size_t g = 0; g < m; ++g) {
      for (std::size_t h = 0; h < m; ++h) {
        for (std::size_t x = 0; x < n; ++x) {
          buf[x] = _perms[g * n + _perms[h * n + x]];
        }
        auto it = by_perm.find(key_of(buf));
        if (it == by_perm.end()) {
          fail(ErrorCode::validation,
               "elements are not closed under composition: " + _names[g]
                   + " * " + _names[h] + " is missing");
        }
        _table[g * m + h] = static_cast<std::uint16_t>(it->second);
      }
    }

    // A finite set of permutations closed under composition is a group, so
    // every row of the table contains the identity.
    _inverse.resize(m);
    for (std::size_t g = 0; g < m; ++g) {
      for (std::size_t h = 0; h < m; ++h) {
        if (_table[g * m + h] == _identity) {
          _inverse[g] = static_cast<std::uint16_t>(h);
          break;
        }
      }
    }

    if (_double_negation) {
      for (std::size_t g = 0; g < m; ++g) {
        if (_table[g * m + g] != _identity) {
          fail(ErrorCode::validation,
               "double negation required but " + _names[g]
                   + " does not square to the identity");
        }
      }
    }
  }

  ReactionGroup ReactionGroup::sign_flip() {
    return ReactionGroup(StateSet({"+1", "-1"}),
                         {{"e", {0, 1}}, {"g", {1, 0}}},
                         "e",
                         true);
  }

  ReactionGroup ReactionGroup::symmetric(std::size_t n) {
    if (n == 0 || n > 6) {
      fail(ErrorCode::bound_exceeded,
           "symmetric groups are supported for 1 <= n <= 6");
    }
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= n; ++i) {
      labels.push_back(std::to_string(i));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<NamedPermutation> elems;
    do {
      elems.push_back({cycle_name(perm, labels), perm});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return ReactionGroup(StateSet(labels), std::move(elems), "e");
  }

  ReactionGroup ReactionGroup::cyclic(std::size_t n) {
    if (n == 0 || n > default_group_bound) {
      fail(ErrorCode::bound_exceeded, "cyclic group order out of range");
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(std::to_string(i));
    }
    std::vector<NamedPermutation> elems;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::size_t> perm(n);
      for (std::size_t x = 0; x < n; ++x) {
        perm[x] = (x + k) % n;
      }
      elems.push_back({k == 0 ? "e" : "r^" + std::to_string(k), perm});
    }
    return ReactionGroup(StateSet(labels), std::move(elems), "e");
  }

  void ReactionGroup::check(GroupElement g) const {
    if (g.group_id != _id) {
      fail(ErrorCode::mismatched_group,
           "group element belongs to a different reaction group");
    }
    if (g.index >= size()) {
      fail(ErrorCode::invalid_input, "group element index out of range");
    }
  }

  bool ReactionGroup::is_involutive() const {
    std::size_t const m = size();
    for (std::size_t g = 0; g < m; ++g) {
      if (_table[g * m + g] != _identity) {
        return false;
      }
    }
    return true;
  }

  GroupElement ReactionGroup::element(std::size_t i) const {
    if (i >= size()) {
      fail(ErrorCode::invalid_input, "group element index out of range");
    }
    return {_id, static_cast<std::uint32_t>(i)};
  }

  std::vector<GroupElement> ReactionGroup::elements() const {
    std::vector<GroupElement> out;
    out.reserve(size());
    for (std::uint32_t i = 0; i < size(); ++i) {
      out.push_back({_id, i});
    }
    return out;
  }

  std::string const& ReactionGroup::name(GroupElement g) const {
    check(g);
    return _names[g.index];
  }

  std::optional<GroupElement> ReactionGroup::find(std::string const& name) const {
    auto it = _by_name.find(name);
    if (it == _by_name.end()) {
      return std::nullopt;
    }
    return GroupElement{_id, it->second};
  }

  std::optional<GroupElement>
  ReactionGroup::find(std::span<std::size_t const> perm) const {
    std::size_t const n = _states.size();
    if (perm.size() != n) {
      return std::nullopt;
    }
    for (std::uint32_t g = 0; g < size(); ++g) {
      if (std::equal(perm.begin(), perm.end(), _perms.begin() + g * n)) {
        return GroupElement{_id, g};
      }
    }
    return std::nullopt;
  }

  std::span<std::uint16_t const> ReactionGroup::perm(GroupElement g) const {
    check(g);
    std::size_t const n = _states.size();
    return {_perms.data() + g.index * n, n};
  }

  std::size_t ReactionGroup::apply(GroupElement g, std::size_t state) const {
    check(g);
    if (state >= _states.size()) {
      fail(ErrorCode::invalid_input, "state index out of range");
    }
    return _perms[g.index * _states.size() + state];
  }

  GroupElement ReactionGroup::compose(GroupElement g, GroupElement h) const {
    check(g);
    check(h);
    return {_id, _table[g.index * size() + h.index]};
  }

  GroupElement ReactionGroup::inverse(GroupElement g) const {
    check(g);
    return {_id, _inverse[g.index]};
  }

  GroupElement ReactionGroup::product(std::span<GroupElement const> gs) const {
    GroupElement acc = identity();
    for (auto g : gs) {
      acc = compose(acc, g);
    }
    return acc;
  }

  ////////////////////////////////////////////////////////////////////////
  // Orbits and characteristic equations
  ////////////////////////////////////////////////////////////////////////

  std::size_t orbit_count(ReactionGroup const& group, GroupElement g) {
    std::vector<std::size_t> all(group.states().size());
    std::iota(all.begin(), all.end(), 0);
    return orbit_count(group, g, all);
  }

  std::size_t orbit_count(ReactionGroup const&         group,
                          GroupElement                 g,
                          std::span<std::size_t const> subset) {
    auto const        p = group.perm(g);
    std::vector<bool> seen(p.size(), false);
    std::size_t       count = 0;
    for (std::size_t start : subset) {
      if (start >= p.size()) {
        fail(ErrorCode::invalid_input, "state index out of range");
      }
      if (seen[start]) {
        continue;
      }
      ++count;
      for (std::size_t x = start; !seen[x]; x = p[x]) {
        seen[x] = true;
      }
    }
    return count;
  }

  std::size_t pair_orbit_count(ReactionGroup const& group,
                               GroupElement         v,
                               GroupElement         w) {
    auto const        pv = group.perm(v);
    auto const        pw = group.perm(w);
    std::size_t const n  = pv.size();
    std::vector<bool> seen(n * n, false);
    std::size_t       count = 0;
    for (std::size_t start = 0; start < n * n; ++start) {
      if (seen[start]) {
        continue;
      }
      ++count;
      std::size_t x = start;
      while (!seen[x]) {
        seen[x]           = true;
        std::size_t const t = x / n, r = x % n;
        x                   = pv[r] * n + pw[t];
      }
    }
    return count;
  }

  std::vector<GroupElement> solve_characteristic(ReactionGroup const& group,
                                                 GroupElement         a,
                                                 std::size_t          bound) {
    if (group.size() > bound) {
      fail(ErrorCode::bound_exceeded,
           "group of order " + std::to_string(group.size())
               + " exceeds the enumeration bound " + std::to_string(bound));
    }
    if (!group.contains(a)) {
      fail(ErrorCode::mismatched_group, "right-hand side is not in the group");
    }
    std::vector<std::pair<std::size_t, GroupElement>> found;
    for (auto v : group.elements()) {
      if (group.compose(v, v) == a) {
        found.emplace_back(orbit_count(group, v), v);
      }
    }
    std::stable_sort(found.begin(), found.end(), [](auto const& x, auto const& y) {
      return x.first > y.first;
    });
    std::vector<GroupElement> out;
    for (auto const& [_, v] : found) {
      out.push_back(v);
    }
    return out;
  }

  std::vector<std::pair<GroupElement, GroupElement>>
  solve_characteristic_pair(ReactionGroup const& group,
                            GroupElement         a_i,
                            GroupElement         a_j,
                            std::size_t          bound) {
    if (group.size() > bound) {
      fail(ErrorCode::bound_exceeded,
           "group of order " + std::to_string(group.size())
               + " exceeds the enumeration bound " + std::to_string(bound));
    }
    if (!group.contains(a_i) || !group.contains(a_j)) {
      fail(ErrorCode::mismatched_group, "right-hand side is not in the group");
    }
    using Pair = std::pair<GroupElement, GroupElement>;
    std::vector<std::pair<std::size_t, Pair>> found;
    for (auto v : group.elements()) {
      for (auto w : group.elements()) {
        if (group.compose(v, w) == a_i && group.compose(w, v) == a_j) {
          found.push_back({pair_orbit_count(group, v, w), {v, w}});
        }
      }
    }
    std::stable_sort(found.begin(), found.end(), [](auto const& x, auto const& y) {
      return x.first > y.first;
    });
    std::vector<Pair> out;
    for (auto const& [_, p] : found) {
      out.push_back(p);
    }
    return out;
  }

}  // namespace balance_nets
