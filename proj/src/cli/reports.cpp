#include "balance_nets/cli/reports.hpp"

#include <algorithm>
#include <chrono>

#include "balance_nets/dynamics/core.hpp"
#include "balance_nets/parallel.hpp"
#include "balance_nets/potential/fields.hpp"
#include "balance_nets/potential/potential.hpp"

namespace balance_nets::cli {

  using io::Json;

  namespace {
    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point start) {
      return std::chrono::duration<double>(Clock::now() - start).count();
    }

    Json network_json(io::NetworkFile const& net) {
      auto const& r = net.marking;
      return {{"nodes", r.graph().node_count()},
              {"edges", r.graph().edge_count()},
              {"group_order", r.group().size()},
              {"states", r.group().states().size()},
              {"bipartite", bipartition(r.graph()).has_value()},
              {"symmetric", r.is_symmetric()}};
    }

    Json path_labels(RelationGraph const& graph, Path const& path) {
      Json out = Json::array();
      if (path.empty()) {
        return out;
      }
      out.push_back(graph.label(path.front().from));
      for (auto const& e : path) {
        out.push_back(graph.label(e.to));
      }
      return out;
    }

    Json labels_of(RelationGraph const& graph, std::vector<std::size_t> const& nodes) {
      Json out = Json::array();
      for (std::size_t v : nodes) {
        out.push_back(graph.label(v));
      }
      return out;
    }

    Json per_node(Marking const& r, std::vector<GroupElement> const& values) {
      Json out = Json::object();
      for (std::size_t v = 0; v < values.size(); ++v) {
        out[r.graph().label(v)] = r.group().name(values[v]);
      }
      return out;
    }

    Json partition_json(RelationGraph const& graph, std::optional<BalancePartition> const& p) {
      if (!p) {
        return {{"exists", false}};
      }
      Json negative = Json::array();
      for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        auto const& edge = graph.edge(e);
        if (p->sign[e] < 0 && edge.from < edge.to) {
          negative.push_back({graph.label(edge.from), graph.label(edge.to)});
        }
      }
      return {{"exists", true},
              {"first", labels_of(graph, p->first)},
              {"second", labels_of(graph, p->second)},
              {"negative_edges", negative}};
    }

    Json potential_json(Marking const& r, PotentialCheck const& pc) {
      if (pc.potential) {
        return {{"potential", true},
                {"root", r.graph().label(pc.function->root)},
                {"potential_function", per_node(r, pc.function->u)}};
      }
      return {{"potential", false},
              {"witness", {{"cycle", path_labels(r.graph(), pc.witness)},
                           {"product", r.group().name(*pc.witness_product)}}}};
    }

    MarkovModel markov_of(io::NetworkFile const& net, MarkovOptions const& options) {
      return net.choice ? build_markov(net.marking, *net.choice, options)
                        : build_markov(net.marking, options);
    }

    double max_row_error(MarkovModel const& p) {
      double worst = 0.0;
      for (std::size_t x = 0; x < p.size(); ++x) {
        double sum = 0.0;
        for (double q : p.row_probs(x)) {
          sum += q;
        }
        worst = std::max(worst, std::abs(sum - 1.0));
      }
      return worst;
    }

    Json states_json(ReactionGroup const& group, MarkovModel const& p, std::vector<std::size_t> const& xs) {
      Json out = Json::array();
      for (std::size_t x : xs) {
        out.push_back(state_json(group, p.space.decode(x)));
      }
      return out;
    }

    Json theorem_b_json(Marking const& r, TheoremBReport const& b) {
      auto const& G = r.group();
      Json        j = {{"applicable", b.applicable},
                       {"bipartite", b.bipartite},
                       {"dynamics_in_group", b.dynamics_in_group},
                       {"solves_equation", b.solves_equation},
                       {"second_step", b.second_step},
                       {"predicted_count", b.predicted_count},
                       {"count_matches", b.count_matches},
                       {"solution_count", b.bipartite ? b.pair_solutions.size() : b.solutions.size()}};
      if (b.b) {
        j["b"] = G.name(*b.b);
      }
      if (b.vw) {
        j["v"] = G.name(b.vw->first);
        j["w"] = G.name(b.vw->second);
      }
      if (b.applicable && b.solutions.empty() && b.pair_solutions.empty()) {
        j["note"] = "the characteristic equation has no solution in the group";
      }
      return j;
    }

    // Decodes a control-matrix index in the odometer order of
    // control_matrices(): node 0 is the most significant digit.
    ControlWord control_word_at(RelationGraph const& graph, std::size_t index) {
      std::size_t const        n = graph.node_count();
      std::vector<std::size_t> choices(n);
      for (std::size_t i = n; i-- > 0;) {
        std::size_t const d = graph.degree(i);
        choices[i]          = index % d;
        index /= d;
      }
      return control_matrix(graph, choices);
    }

    Json ideal_json(RelationGraph const& graph, LeftIdeal const& ideal, bool bipartite) {
      Json elements = Json::array();
      for (auto const& w : ideal.elements) {
        elements.push_back(word_json(graph, w));
      }
      Json witness = Json::array();
      for (std::size_t k : ideal.witness) {
        witness.push_back(word_json(graph, control_word_at(graph, k)));
      }
      Json j = {{"elements", elements}, {"witness", witness}};
      if (auto k = ideal.constant_column()) {
        j["form"]   = "I_k";
        j["column"] = graph.label(*k);
      } else if (bipartite) {
        j["form"] = "S_pair";
      } else {
        j["form"] = "other";
      }
      return j;
    }

    bool generator_forms_ok(IdealEnumeration const& en) {
      return std::all_of(en.ideals.begin(), en.ideals.end(), [&](LeftIdeal const& ideal) {
        if (!en.bipartite) {
          return ideal.elements.size() == 1 && ideal.constant_column().has_value();
        }
        return ideal.elements.size() == 2 && ideal.elements[0].rank() == 2
               && ideal.elements[1].rank() == 2;
      });
    }

    IdealEnumeration ideals_of(RelationGraph const& graph, IdealMethod method, RunConfig const& config) {
      IdealOptions options;
      options.method      = method;
      options.bound_nodes = config.bound_semigroup;
      return enumerate_ideals(graph, options);
    }

    std::string method_name(IdealMethod method) {
      return method == IdealMethod::structural ? "structural" : "exhaustive";
    }
  }  // namespace

  Json state_json(ReactionGroup const& group, SystemState const& x) {
    Json out = Json::array();
    for (std::size_t s : x) {
      out.push_back(group.states().label(s));
    }
    return out;
  }

  Json matrix_json(Matrix2 const& m) {
    return Json::array({Json::array({m.m00, m.m01}), Json::array({m.m10, m.m11})});
  }

  Json word_json(RelationGraph const& graph, ControlWord const& w) {
    Json out = Json::array();
    for (std::size_t i = 0; i < w.size(); ++i) {
      out.push_back(graph.label(w.column(i)));
    }
    return out;
  }

  Json marking_json(Marking const& r, std::string const& group) {
    auto const& graph = r.graph();
    Json        edges = Json::array();
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      auto const& edge = graph.edge(e);
      edges.push_back({{"from", graph.label(edge.from)},
                       {"to", graph.label(edge.to)},
                       {"reaction", r.group().name(r.value(e))}});
    }
    Json j = {{"nodes", graph.labels()}, {"edges", edges}};
    if (!group.empty()) {
      j["group"] = group;
    }
    return j;
  }

  Json potential_report(io::NetworkFile const& net, RunConfig const&) {
    auto const& r  = net.marking;
    Json        j  = potential_json(r, is_potential(r));
    auto const  a2 = check_A2(r);
    j["A1"]             = check_A1(r);
    j["A2"]             = a2.has_value();
    j["characteristic"] = a2 ? per_node(r, *a2) : Json(nullptr);
    j["balance"]        = partition_json(r.graph(), balance_partition(r));
    j["network"]        = network_json(net);
    j["input_digest"]   = net.digest;
    return j;
  }

  Json balance_report(io::NetworkFile const& net) {
    auto const& r = net.marking;
    Json        j = partition_json(r.graph(), balance_partition(r));
    j["potential"]    = is_potential(r).potential;
    j["network"]      = network_json(net);
    j["input_digest"] = net.digest;
    return j;
  }

  Json gen_fields_report(std::size_t nodes) {
    auto const fields     = generate_potential_fields(nodes);
    auto const recurrence = generate_potential_fields_recurrence(nodes);
    Json       list       = Json::array();
    bool       all_potential = true;
    bool       same          = fields.size() == recurrence.size();
    for (std::size_t k = 0; same && k < fields.size(); ++k) {
      for (std::size_t e = 0; e < fields[k].values().size(); ++e) {
        same = same && fields[k].value(e).index == recurrence[k].value(e).index;
      }
    }
    for (auto const& f : fields) {
      list.push_back(marking_json(f, "builtin:sign"));
      all_potential = all_potential && is_potential(f).potential;
    }
    return {{"nodes", nodes},
            {"count", fields.size()},
            {"fields", list},
            {"all_potential", all_potential},
            {"recurrence_matches", same}};
  }

  Json markov_report(io::NetworkFile const& net, bool exact, RunConfig const& config) {
    auto const&   r = net.marking;
    MarkovOptions options;
    options.bound_states = config.bound_states;
    options.exact        = exact;
    options.workers      = worker_count();
    auto const p    = markov_of(net, options);
    auto const cls  = analyze_classes(p);
    auto const core = core_set(r, config.bound_states);

    Json classes = Json::array();
    for (std::size_t k = 0; k < cls.recurrent.size(); ++k) {
      classes.push_back({{"period", cls.periods[k]},
                         {"states", states_json(r.group(), p, cls.recurrent[k])}});
    }
    double const row_error = max_row_error(p);
    Json         j         = {{"states", p.size()},
                              {"stationary_count", cls.recurrent.size()},
                              {"limit_exists", limit_exists(p)},
                              {"recurrent_classes", classes},
                              {"W0", states_json(r.group(), p, core.states)},
                              {"W0_closed", core.closed},
                              {"W0_essential", essential_check(p, core.states)},
                              {"A1", core.a1},
                              {"A2", core.a2},
                              {"max_row_error", row_error},
                              {"row_sums_ok", row_error <= config.tau_dyn},
                              {"exact", p.exact()},
                              {"network", network_json(net)},
                              {"input_digest", net.digest}};
    if (p.exact()) {
      Json transitions = Json::array();
      for (std::size_t x = 0; x < p.size(); ++x) {
        auto const cols = p.row_cols(x);
        for (std::size_t k = 0; k < cols.size(); ++k) {
          transitions.push_back({{"from", state_json(r.group(), p.space.decode(x))},
                                 {"to", state_json(r.group(), p.space.decode(cols[k]))},
                                 {"numerator", p.numerators[p.row_ptr[x] + k]}});
        }
      }
      j["denominator"] = p.denominator;
      j["transitions"] = transitions;
    }
    return j;
  }

  Json ideals_report(io::NetworkFile const& net, IdealMethod method, RunConfig const& config) {
    auto const& graph = net.marking.graph();
    auto const  en    = ideals_of(graph, method, config);
    Json        gens  = Json::array();
    for (auto const& ideal : en.ideals) {
      gens.push_back(ideal_json(graph, ideal, en.bipartite));
    }
    Json j = {{"ideal_count", en.ideals.size()},
              {"theorem1_expected", en.expected},
              {"match", en.matches_expected()},
              {"bipartite", en.bipartite},
              {"generators", gens},
              {"generator_forms_ok", generator_forms_ok(en)},
              {"method", method_name(method)},
              {"network", network_json(net)},
              {"input_digest", net.digest}};
    if (method == IdealMethod::exhaustive) {
      j["semigroup_size"] = en.words;
    }
    return j;
  }

  Json absorb_report(io::NetworkFile const& net,
                     std::size_t            steps,
                     std::size_t            runs,
                     RunConfig const&       config) {
    auto const& graph = net.marking.graph();
    auto const  en    = ideals_of(graph, IdealMethod::structural, config);
    auto const  stats = absorption_statistics(graph, en, steps, runs, config.seed, worker_count());
    std::size_t total = 0, longest = 0;
    for (std::size_t s : stats.absorption_steps) {
      total += s;
      longest = std::max(longest, s);
    }
    return {{"runs", stats.runs},
            {"steps", steps},
            {"absorbed", stats.absorbed},
            {"absorbed_fraction", runs ? double(stats.absorbed) / double(runs) : 0.0},
            {"per_ideal", stats.per_ideal},
            {"ideal_count", en.ideals.size()},
            {"mean_steps", stats.absorbed ? double(total) / double(stats.absorbed) : 0.0},
            {"max_steps", longest},
            {"seed", config.seed},
            {"seed_rule", "run i uses seed + i"},
            {"network", network_json(net)},
            {"input_digest", net.digest}};
  }

  Json residual_report(InvolutionField const& field, std::size_t grid, std::vector<double> const& hs) {
    std::vector<double> worst;
    for (double h : hs) {
      auto const norms = residual_grid(field, grid, h);
      worst.push_back(*std::max_element(norms.begin(), norms.end()));
    }
    Json j = {{"grid", grid}, {"h", hs}, {"max_norm", worst}};
    if (hs.size() >= 2) {
      j["orders"] = convergence_orders(hs, worst);
    }
    return j;
  }

  Json p_integral_report(InvolutionField const&                 field,
                         std::vector<ParameterizedCurve> const& pieces,
                         std::size_t                            n,
                         Parity                                 parity,
                         RunConfig const&                       config) {
    Json    list       = Json::array();
    Matrix2 total      = Matrix2::identity();
    bool    parity_law = true;
    for (auto const& piece : pieces) {
      auto const rep = balance_nets::p_integral_report(field, piece, n, parity);
      list.push_back({{"value", matrix_json(rep.value)},
                      {"det", rep.det},
                      {"parity_law", rep.parity_law},
                      {"refined_steps", rep.refined_steps},
                      {"refined_change", rep.change}});
      total      = total * rep.value;
      parity_law = parity_law && rep.parity_law;
    }
    Point const  a      = pieces.front().start();
    Point const  b      = pieces.back().end();
    bool const   closed = std::abs(a.x - b.x) <= 1e-12 && std::abs(a.y - b.y) <= 1e-12;
    double const dist   = norm_max(total - Matrix2::identity());
    return {{"pieces", list},
            {"value", matrix_json(total)},
            {"det", total.det()},
            {"n", n},
            {"parity", parity == Parity::even ? "even" : "odd"},
            {"parity_law", parity_law},
            {"closed", closed},
            {"distance_to_identity", dist},
            {"identity_within_tau_num", dist <= config.tau_num}};
  }

  Json discretize_report(InvolutionField const&   field,
                         io::NetworkFile const&   net,
                         io::EmbeddingFile const& embedding,
                         RunConfig const&         config) {
    auto const& graph   = net.marking.graph();
    auto        options = embedding.options;
    options.potential_tol = config.tau_num;
    options.workers       = worker_count();
    auto const d = discretize(field, net.marking.graph_ptr(), embedding.embedding, options);

    Json edges = Json::array();
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      auto const& edge = graph.edge(e);
      auto const  tag  = options.tags.find({std::min(edge.from, edge.to), std::max(edge.from, edge.to)});
      bool const  odd  = tag != options.tags.end() && tag->second == Parity::odd;
      edges.push_back({{"from", graph.label(edge.from)},
                       {"to", graph.label(edge.to)},
                       {"matrix", matrix_json(d.marking.value(e))},
                       {"parity", odd ? "odd" : "even"},
                       {"sign", d.relation_signs[e]}});
    }
    // Distance of each mark from u_i^-1 u_j; zero on the spanning tree.
    double edge_residual = 0.0;
    if (d.potential.potential) {
      for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        auto const& edge = graph.edge(e);
        Matrix2 const want = d.potential.u[edge.from].inverse() * d.potential.u[edge.to];
        edge_residual = std::max(edge_residual, norm_max(d.marking.value(e) - want));
      }
    }
    Json j = {{"edges", edges},
              {"potential", d.potential.potential},
              {"balance", partition_json(graph, balance_partition(d.marking))},
              {"steps", {{"even", options.even_steps}, {"odd", options.odd_steps}}},
              {"max_edge_residual", edge_residual},
              {"network", network_json(net)},
              {"input_digest", net.digest}};
    if (!d.potential.potential) {
      j["witness"] = {{"cycle", path_labels(graph, d.potential.witness)},
                      {"product", matrix_json(d.potential.witness_product)}};
    }
    return j;
  }

  Json run_full_analysis(std::filesystem::path const& network, RunConfig const& config, bool timing) {
    config.validate();
    auto const start = Clock::now();
    Json       times = Json::object();
    auto       stage = Clock::now();
    auto const lap   = [&](char const* name) {
      times[name] = seconds_since(stage);
      stage       = Clock::now();
    };

    auto const  net   = io::load_network(network, config.bound_grp);
    auto const& r     = net.marking;
    auto const& graph = r.graph();
    bool const  bipartite = bipartition(graph).has_value();
    lap("load");

    auto const pc = is_potential(r);
    auto const a1 = check_A1(r);
    auto const a2 = check_A2(r);
    lap("potential");

    MarkovOptions options;
    options.bound_states = config.bound_states;
    options.workers      = worker_count();
    auto const p    = markov_of(net, options);
    auto const cls  = analyze_classes(p);
    auto const core = core_set(r, config.bound_states);
    std::optional<TheoremBReport> theorem_b;
    if (a1 && a2) {
      theorem_b = theoremB_verify(r, options);
    }
    lap("markov");

    auto const en = ideals_of(graph, IdealMethod::structural, config);
    lap("ideals");

    // Rg needs a complete extension, which exists only for potential
    // markings of incomplete graphs.
    std::optional<std::vector<SystemState>> finals;
    if (graph.is_complete() || pc.potential) {
      finals = final_states(en, ReactionMatrix::from_marking(r));
    }
    lap("final_states");

    std::size_t const stationary = cls.recurrent.size();
    std::string       rule, status;
    if (!pc.potential) {
      rule   = "not potential";
      status = "skipped";
    } else if (!bipartite) {
      rule   = "stationary_count == |final_states|";
      status = finals && finals->size() == stationary ? "pass" : "fail";
    } else {
      rule   = "stationary_count == pair orbits of (t, r) -> (v r, w t)";
      status = theorem_b && theorem_b->predicted_count == stationary ? "pass" : "fail";
    }

    Json witnesses = potential_json(r, pc);
    witnesses.erase("potential");
    witnesses["W0"] = states_json(r.group(), p, core.states);
    Json gens       = Json::array();
    for (auto const& ideal : en.ideals) {
      gens.push_back(ideal_json(graph, ideal, en.bipartite));
    }
    witnesses["ideal_generators"] = gens;
    Json final_list               = Json::array();
    if (finals) {
      for (auto const& x : *finals) {
        final_list.push_back(state_json(r.group(), x));
      }
    }
    witnesses["final_states"] = finals ? final_list : Json(nullptr);

    Json periods = Json::array();
    for (std::size_t q : cls.periods) {
      periods.push_back(q);
    }
    Json j = {{"input_digest", net.digest},
              {"seed", config.seed},
              {"config", config.to_json()},
              {"network", network_json(net)},
              {"potential", pc.potential},
              {"A1", a1},
              {"A2", a2.has_value()},
              {"characteristic", a2 ? per_node(r, *a2) : Json(nullptr)},
              {"balance", partition_json(graph, balance_partition(r))},
              {"states", p.size()},
              {"stationary_count", stationary},
              {"periods", periods},
              {"limit_exists", limit_exists(p)},
              {"W0_size", core.states.size()},
              {"W0_essential", essential_check(p, core.states)},
              {"ideal_count", en.ideals.size()},
              {"theorem1_expected", en.expected},
              {"theorem1_match", en.matches_expected()},
              {"final_states", finals ? Json(finals->size()) : Json(nullptr)},
              {"cross_check", status},
              {"cross_check_rule", rule},
              {"theorem_b", theorem_b ? theorem_b_json(r, *theorem_b) : Json(nullptr)},
              {"witnesses", witnesses}};
    if (timing) {
      times["total"] = seconds_since(start);
      j["timing"]    = times;
    }
    return j;
  }

}  // namespace balance_nets::cli
