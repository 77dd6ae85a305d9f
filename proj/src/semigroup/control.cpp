#include "balance_nets/semigroup/control.hpp"

#include <random>
#include <string>

#include "balance_nets/error.hpp"
#include "balance_nets/network/two_step.hpp"

namespace balance_nets {

  namespace {
    void check_size(std::size_t n) {
      if (n == 0 || n > max_word_size) {
        fail(ErrorCode::invalid_input,
             "control words need between 1 and " + std::to_string(max_word_size) + " rows");
      }
    }
  }  // namespace

  ControlWord::ControlWord(std::span<std::size_t const> columns) : _n(columns.size()) {
    check_size(_n);
    _map = simd::Transf16::identity();
    for (std::size_t i = 0; i < _n; ++i) {
      if (columns[i] >= _n) {
        fail(ErrorCode::invalid_input, "control word column out of range");
      }
      _map.img[i] = static_cast<std::uint8_t>(columns[i]);
    }
  }

  ControlWord::ControlWord(std::initializer_list<std::size_t> columns)
      : ControlWord(std::span<std::size_t const>(columns.begin(), columns.size())) {}

  ControlWord ControlWord::from_matrix(std::vector<std::vector<int>> const& m) {
    std::vector<std::size_t> cols;
    for (auto const& row : m) {
      if (row.size() != m.size()) {
        fail(ErrorCode::invalid_input, "control word matrix must be square");
      }
      std::optional<std::size_t> one;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 1 && !one) {
          one = j;
        } else if (row[j] != 0) {
          fail(ErrorCode::invalid_input, "control word rows need exactly one 1 and zeros elsewhere");
        }
      }
      if (!one) {
        fail(ErrorCode::invalid_input, "control word rows need exactly one 1 and zeros elsewhere");
      }
      cols.push_back(*one);
    }
    return ControlWord(cols);
  }

  ControlWord ControlWord::identity(std::size_t n) {
    check_size(n);
    ControlWord w;
    w._n   = n;
    w._map = simd::Transf16::identity();
    return w;
  }

  ControlWord ControlWord::constant(std::size_t n, std::size_t k) {
    std::vector<std::size_t> cols(n, k);
    return ControlWord(cols);
  }

  ControlWord ControlWord::from_transf(simd::Transf16 const& t, std::size_t n) {
    check_size(n);
    ControlWord w;
    w._n   = n;
    w._map = t;
    return w;
  }

  std::vector<std::vector<int>> ControlWord::matrix() const {
    std::vector<std::vector<int>> m(_n, std::vector<int>(_n, 0));
    for (std::size_t i = 0; i < _n; ++i) {
      m[i][_map.img[i]] = 1;
    }
    return m;
  }

  std::size_t ControlWord::rank() const {
    std::uint32_t seen = 0;
    for (std::size_t i = 0; i < _n; ++i) {
      seen |= 1U << _map.img[i];
    }
    return static_cast<std::size_t>(__builtin_popcount(seen));
  }

  ControlWord operator*(ControlWord const& a, ControlWord const& b) {
    if (a._n != b._n) {
      fail(ErrorCode::invalid_input, "control word dimensions differ");
    }
    ControlWord out;
    out._n   = a._n;
    out._map = simd::Transf16::identity();
    for (std::size_t i = 0; i < a._n; ++i) {
      out._map.img[i] = b._map.img[a._map.img[i]];
    }
    return out;
  }

  bool is_control_matrix(ControlWord const& c, RelationGraph const& graph) {
    if (c.size() != graph.node_count()) {
      return false;
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.column(i) == i || !graph.has_edge(i, c.column(i))) {
        return false;
      }
    }
    return true;
  }

  ControlWord control_matrix(RelationGraph const& graph, std::span<std::size_t const> choices) {
    std::size_t const n = graph.node_count();
    if (choices.size() != n) {
      fail(ErrorCode::invalid_input, "one neighbour choice per node is required");
    }
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto const nb = graph.neighbors(i);
      if (choices[i] >= nb.size()) {
        fail(ErrorCode::invalid_input, "neighbour choice out of range");
      }
      cols[i] = nb[choices[i]];
    }
    return ControlWord(cols);
  }

  std::vector<ControlWord> control_matrices(RelationGraph const& graph) {
    std::size_t const n = graph.node_count();
    check_size(n);
    std::vector<std::size_t> pick(n, 0);
    std::vector<ControlWord> out;
    for (;;) {
      out.push_back(control_matrix(graph, pick));
      std::size_t i = n;
      while (i > 0 && ++pick[i - 1] == graph.degree(i - 1)) {
        pick[--i] = 0;
      }
      if (i == 0) {
        return out;
      }
    }
  }

  ControlWord word_product(std::span<ControlWord const> factors) {
    if (factors.empty()) {
      fail(ErrorCode::invalid_input, "a word needs at least one factor");
    }
    ControlWord w = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
      w = w * factors[k];
    }
    return w;
  }

  ReactionMatrix::ReactionMatrix(std::shared_ptr<ReactionGroup const> group,
                                 std::size_t                          n,
                                 std::vector<GroupElement>            entries)
      : _group(std::move(group)), _n(n), _entries(std::move(entries)) {
    if (!_group || _entries.size() != n * n) {
      fail(ErrorCode::invalid_input, "reaction matrix needs n * n entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!_group->contains(at(i, j))) {
          fail(ErrorCode::mismatched_group, "reaction matrix entry from another group");
        }
      }
      if (at(i, i) != _group->identity()) {
        fail(ErrorCode::invalid_input, "reaction matrix diagonal must be the identity");
      }
    }
  }

  ReactionMatrix ReactionMatrix::from_marking(Marking const& r) {
    Marking const     full = r.graph().is_complete() ? r : complete_extension(r);
    std::size_t const n    = full.graph().node_count();
    std::vector<GroupElement> entries(n * n, full.group().identity());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) {
          entries[i * n + j] = full.at(i, j);
        }
      }
    }
    return ReactionMatrix(full.group_ptr(), n, std::move(entries));
  }

  bool ReactionMatrix::is_potential() const {
    for (std::size_t i = 0; i < _n; ++i) {
      for (std::size_t j = 0; j < _n; ++j) {
        for (std::size_t k = 0; k < _n; ++k) {
          if (_group->compose(at(i, j), at(j, k)) != at(i, k)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  std::optional<GroupElement> OperatorMatrix::entry(std::size_t i, std::size_t j) const {
    if (pattern.column(i) != j) {
      return std::nullopt;
    }
    return values.at(i);
  }

  SystemState OperatorMatrix::apply(SystemState const& x) const {
    if (x.size() != pattern.size()) {
      fail(ErrorCode::invalid_input, "state length differs from the operator size");
    }
    SystemState y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = group->apply(values[i], x[pattern.column(i)]);
    }
    return y;
  }

  OperatorMatrix operator*(OperatorMatrix const& x, OperatorMatrix const& y) {
    if (x.group != y.group) {
      fail(ErrorCode::mismatched_group, "operator matrices over different groups");
    }
    OperatorMatrix out{x.group, x.pattern * y.pattern, {}};
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      out.values.push_back(x.group->compose(x.values[i], y.values[x.pattern.column(i)]));
    }
    return out;
  }

  OperatorMatrix star_product(ControlWord const& c, ReactionMatrix const& rg) {
    if (c.size() != rg.size()) {
      fail(ErrorCode::invalid_input, "control word and reaction matrix sizes differ");
    }
    OperatorMatrix out{rg.group_ptr(), c, {}};
    for (std::size_t i = 0; i < c.size(); ++i) {
      out.values.push_back(rg.at(i, c.column(i)));
    }
    return out;
  }

  RhoResult rho_report(std::span<ControlWord const> factors, ReactionMatrix const& rg) {
    ControlWord const word  = word_product(factors);
    OperatorMatrix    value = star_product(word, rg);
    OperatorMatrix    fw    = star_product(factors.front(), rg);
    for (std::size_t k = 1; k < factors.size(); ++k) {
      fw = fw * star_product(factors[k], rg);
    }
    bool const same = value == fw;
    return {word, std::move(value), std::move(fw), same};
  }

  OperatorMatrix rho(std::span<ControlWord const> factors, ReactionMatrix const& rg) {
    auto rep = rho_report(factors, rg);
    if (!rep.homomorphic) {
      fail(ErrorCode::not_potential, "rho is not multiplicative on this word: Rg is not potential");
    }
    return std::move(rep.value);
  }

  std::optional<std::pair<std::vector<ControlWord>, std::vector<ControlWord>>>
  find_homomorphism_failure(RelationGraph const&  graph,
                            ReactionMatrix const& rg,
                            std::uint64_t         seed,
                            std::size_t           attempts,
                            std::size_t           max_length) {
    auto const      gens = control_matrices(graph);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<std::size_t> len(1, std::max<std::size_t>(max_length, 1));
    auto draw = [&] {
      std::vector<ControlWord> w;
      for (std::size_t k = len(rng); k > 0; --k) {
        w.push_back(gens[pick(rng)]);
      }
      return w;
    };
    for (std::size_t a = 0; a < attempts; ++a) {
      auto w1 = draw();
      auto w2 = draw();
      auto const lhs = star_product(word_product(w1) * word_product(w2), rg);
      auto const rhs = star_product(word_product(w1), rg) * star_product(word_product(w2), rg);
      if (lhs != rhs) {
        return std::pair{std::move(w1), std::move(w2)};
      }
    }
    return std::nullopt;
  }

}  // namespace balance_nets
