#include "balance_nets/dynamics/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stack>

#include "balance_nets/error.hpp"
#include "balance_nets/parallel.hpp"

namespace balance_nets {

  ////////////////////////////////////////////////////////////////////////
  // StateSpace
  ////////////////////////////////////////////////////////////////////////

  StateSpace::StateSpace(std::size_t nodes, std::size_t states, std::size_t bound)
      : _nodes(nodes), _states(states), _size(1) {
    if (states == 0) {
      fail(ErrorCode::invalid_input, "empty state set");
    }
    for (std::size_t i = 0; i < nodes; ++i) {
      if (_size > bound / states) {
        fail(ErrorCode::bound_exceeded,
             "state space |E|^|A| = " + std::to_string(states) + "^"
                 + std::to_string(nodes) + " exceeds the bound "
                 + std::to_string(bound));
      }
      _size *= states;
    }
  }

  std::size_t StateSpace::index(SystemState const& x) const {
    if (x.size() != _nodes) {
      fail(ErrorCode::invalid_input, "system state has the wrong length");
    }
    std::size_t idx = 0;
    for (std::size_t v : x) {
      if (v >= _states) {
        fail(ErrorCode::invalid_input, "state index out of range");
      }
      idx = idx * _states + v;
    }
    return idx;
  }

  SystemState StateSpace::decode(std::size_t index) const {
    if (index >= _size) {
      fail(ErrorCode::invalid_input, "system state index out of range");
    }
    SystemState x(_nodes);
    for (std::size_t i = _nodes; i-- > 0;) {
      x[i] = index % _states;
      index /= _states;
    }
    return x;
  }

  ////////////////////////////////////////////////////////////////////////
  // Choice distributions and F
  ////////////////////////////////////////////////////////////////////////

  ChoiceDistribution ChoiceDistribution::uniform(RelationGraph const& graph) {
    ChoiceDistribution q;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
      q.weights.emplace_back(graph.degree(i), 1.0);
    }
    return q;
  }

  void ChoiceDistribution::validate(RelationGraph const& graph) const {
    if (weights.size() != graph.node_count()) {
      fail(ErrorCode::validation, "one weight list per node is required");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i].size() != graph.degree(i)) {
        fail(ErrorCode::validation,
             "node " + graph.label(i) + " needs one weight per neighbour");
      }
      for (double w : weights[i]) {
        if (!(w > 0.0) || !std::isfinite(w)) {
          fail(ErrorCode::validation,
               "choice weights of node " + graph.label(i) + " must be positive");
        }
      }
    }
  }

  bool ChoiceDistribution::is_uniform() const {
    return std::all_of(weights.begin(), weights.end(), [](auto const& w) {
      return std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
    });
  }

  std::vector<std::size_t> node_options(Marking const& r, SystemState const& x, std::size_t i) {
    auto const&              graph = r.graph();
    std::vector<std::size_t> opts;
    for (std::size_t j : graph.neighbors(i)) {
      opts.push_back(r.group().apply(r.at(i, j), x[j]));
    }
    std::sort(opts.begin(), opts.end());
    opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
    return opts;
  }

  std::vector<SystemState> apply_F(Marking const& r, SystemState const& x) {
    std::size_t const                     n = r.graph().node_count();
    std::vector<std::vector<std::size_t>> opts;
    for (std::size_t i = 0; i < n; ++i) {
      opts.push_back(node_options(r, x, i));
    }
    std::vector<SystemState> out;
    std::vector<std::size_t> digit(n, 0);
    for (;;) {
      SystemState y(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = opts[i][digit[i]];
      }
      out.push_back(std::move(y));
      std::size_t i = n;
      while (i > 0 && ++digit[i - 1] == opts[i - 1].size()) {
        digit[--i] = 0;
      }
      if (i == 0) {
        break;
      }
    }
    return out;
  }

  std::size_t image_size(Marking const& r, SystemState const& x) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < r.graph().node_count(); ++i) {
      size *= node_options(r, x, i).size();
    }
    return size;
  }

  ////////////////////////////////////////////////////////////////////////
  // Markov matrix
  ////////////////////////////////////////////////////////////////////////

  double MarkovModel::prob(std::size_t x, std::size_t y) const {
    auto const c  = row_cols(x);
    auto       it = std::lower_bound(c.begin(), c.end(), y);
    if (it == c.end() || *it != y) {
      return 0.0;
    }
    return probs[row_ptr[x] + static_cast<std::size_t>(it - c.begin())];
  }

  namespace {
    struct Row {
      std::vector<std::size_t>   cols;
      std::vector<double>        probs;
      std::vector<std::uint64_t> numerators;
    };

    struct Option {
      std::size_t   state;
      double        weight;
      std::uint64_t count;
    };
  }  // namespace

  MarkovModel build_markov(Marking const&            r,
                           ChoiceDistribution const& q,
                           MarkovOptions const&      options) {
    auto const& graph = r.graph();
    auto const& group = r.group();
    q.validate(graph);
    if (options.exact && !q.is_uniform()) {
      fail(ErrorCode::invalid_input, "exact mode requires uniform choice weights");
    }
    std::size_t const n = graph.node_count();
    MarkovModel       p;
    p.space = StateSpace(n, group.states().size(), options.bound_states);

    std::uint64_t denominator = 1;
    if (options.exact) {
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t const d = graph.degree(i);
        if (denominator > UINT64_MAX / d) {
          fail(ErrorCode::bound_exceeded, "exact denominator overflows 64 bits");
        }
        denominator *= d;
      }
    }

    std::vector<std::vector<double>> norm_weights;
    for (auto const& w : q.weights) {
      double const total = std::accumulate(w.begin(), w.end(), 0.0);
      std::vector<double> nw;
      for (double v : w) {
        nw.push_back(v / total);
      }
      norm_weights.push_back(std::move(nw));
    }

    std::vector<Row> rows(p.size());
    parallel_for(p.size(), options.workers, [&](std::size_t xi) {
      SystemState const                x = p.space.decode(xi);
      std::vector<std::vector<Option>> opts(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto const nb = graph.neighbors(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
          std::size_t const s  = group.apply(r.at(i, nb[k]), x[nb[k]]);
          auto&             oi = opts[i];
          auto it = std::find_if(oi.begin(), oi.end(), [&](Option const& o) { return o.state == s; });
          if (it == oi.end()) {
            oi.push_back({s, norm_weights[i][k], 1});
          } else {
            it->weight += norm_weights[i][k];
            it->count += 1;
          }
        }
        std::sort(opts[i].begin(), opts[i].end(),
                  [](Option const& a, Option const& b) { return a.state < b.state; });
      }
      // Odometer over option tuples; distinct options give distinct targets
      // and the node-major order makes target indices ascending.
      Row&                     row = rows[xi];
      std::vector<std::size_t> digit(n, 0);
      for (;;) {
        std::size_t   y   = 0;
        double        w   = 1.0;
        std::uint64_t cnt = 1;
        for (std::size_t i = 0; i < n; ++i) {
          Option const& o = opts[i][digit[i]];
          y               = y * p.space.states() + o.state;
          w *= o.weight;
          cnt *= o.count;
        }
        row.cols.push_back(y);
        if (options.exact) {
          row.numerators.push_back(cnt);
          row.probs.push_back(static_cast<double>(cnt) / static_cast<double>(denominator));
        } else {
          row.probs.push_back(w);
        }
        std::size_t i = n;
        while (i > 0 && ++digit[i - 1] == opts[i - 1].size()) {
          digit[--i] = 0;
        }
        if (i == 0) {
          break;
        }
      }
    });

    p.row_ptr.reserve(p.size() + 1);
    p.row_ptr.push_back(0);
    for (auto& row : rows) {
      p.cols.insert(p.cols.end(), row.cols.begin(), row.cols.end());
      p.probs.insert(p.probs.end(), row.probs.begin(), row.probs.end());
      p.numerators.insert(p.numerators.end(), row.numerators.begin(), row.numerators.end());
      p.row_ptr.push_back(p.cols.size());
    }
    if (options.exact) {
      p.denominator = denominator;
    }
    return p;
  }

  MarkovModel build_markov(Marking const& r, MarkovOptions const& options) {
    return build_markov(r, ChoiceDistribution::uniform(r.graph()), options);
  }

  ////////////////////////////////////////////////////////////////////////
  // Class structure
  ////////////////////////////////////////////////////////////////////////

  ClassStructure analyze_classes(MarkovModel const& p) {
    std::size_t const N = p.size();
    // Iterative Tarjan over the support graph.
    std::size_t const        unset = SIZE_MAX;
    std::vector<std::size_t> index(N, unset), low(N, 0), comp(N, unset);
    std::vector<bool>        on_stack(N, false);
    std::vector<std::size_t> stack;
    std::size_t              counter = 0, comps = 0;
    struct Frame {
      std::size_t v, next;
    };
    for (std::size_t s = 0; s < N; ++s) {
      if (index[s] != unset) {
        continue;
      }
      std::vector<Frame> call{{s, 0}};
      index[s] = low[s] = counter++;
      stack.push_back(s);
      on_stack[s] = true;
      while (!call.empty()) {
        Frame&     f    = call.back();
        auto const succ = p.row_cols(f.v);
        if (f.next < succ.size()) {
          std::size_t const w = succ[f.next++];
          if (index[w] == unset) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = true;
            call.push_back({w, 0});
          } else if (on_stack[w]) {
            low[f.v] = std::min(low[f.v], index[w]);
          }
          continue;
        }
        std::size_t const v = f.v;
        if (low[v] == index[v]) {
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w]     = comps;
          } while (w != v);
          ++comps;
        }
        call.pop_back();
        if (!call.empty()) {
          low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
      }
    }

    std::vector<bool> closed(comps, true);
    for (std::size_t v = 0; v < N; ++v) {
      for (std::size_t w : p.row_cols(v)) {
        if (comp[w] != comp[v]) {
          closed[comp[v]] = false;
        }
      }
    }

    std::vector<std::vector<std::size_t>> members(comps);
    for (std::size_t v = 0; v < N; ++v) {
      members[comp[v]].push_back(v);
    }
    ClassStructure out;
    out.class_of.assign(N, std::nullopt);
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < comps; ++c) {
      if (closed[c]) {
        order.push_back(c);
      }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return members[a].front() < members[b].front();
    });
    for (std::size_t c : order) {
      auto const& m = members[c];
      // Period: gcd of level differences along in-class edges of a BFS.
      std::vector<std::size_t> level(N, unset);
      std::queue<std::size_t>  todo;
      level[m.front()] = 0;
      todo.push(m.front());
      std::size_t period = 0;
      while (!todo.empty()) {
        std::size_t const v = todo.front();
        todo.pop();
        for (std::size_t w : p.row_cols(v)) {
          if (level[w] == unset) {
            level[w] = level[v] + 1;
            todo.push(w);
          } else {
            std::size_t const d = level[v] + 1 - level[w];
            period              = std::gcd(period, d);
          }
        }
      }
      for (std::size_t v : m) {
        out.class_of[v] = out.recurrent.size();
      }
      out.recurrent.push_back(m);
      out.periods.push_back(period);
    }
    return out;
  }

  std::size_t stationary_count(MarkovModel const& p) {
    return analyze_classes(p).recurrent.size();
  }

  bool limit_exists(MarkovModel const& p) {
    auto const cs = analyze_classes(p);
    return std::all_of(cs.periods.begin(), cs.periods.end(), [](std::size_t d) { return d == 1; });
  }

  bool essential_check(MarkovModel const& p, std::vector<std::size_t> const& w0) {
    std::size_t const N = p.size();
    std::vector<bool> in_w0(N, false);
    for (std::size_t v : w0) {
      if (v >= N) {
        fail(ErrorCode::invalid_input, "core state index out of range");
      }
      in_w0[v] = true;
    }
    for (std::size_t v : w0) {
      for (std::size_t w : p.row_cols(v)) {
        if (!in_w0[w]) {
          return false;
        }
      }
    }
    std::vector<std::vector<std::size_t>> pred(N);
    for (std::size_t v = 0; v < N; ++v) {
      for (std::size_t w : p.row_cols(v)) {
        pred[w].push_back(v);
      }
    }
    std::vector<bool>       reach = in_w0;
    std::queue<std::size_t> todo;
    for (std::size_t v : w0) {
      todo.push(v);
    }
    while (!todo.empty()) {
      std::size_t const v = todo.front();
      todo.pop();
      for (std::size_t u : pred[v]) {
        if (!reach[u]) {
          reach[u] = true;
          todo.push(u);
        }
      }
    }
    return std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
  }

}  // namespace balance_nets
