#include "balance_nets/io/loaders.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

namespace balance_nets::io {

  namespace {
    std::vector<double> numbers_of(Node const& node) {
      std::vector<double> out;
      for (std::size_t k = 0; k < node.size(); ++k) {
        out.push_back(node.at(k).as_number());
      }
      return out;
    }

    Point point_of(Node const& node) {
      if (node.size() != 2) {
        node.fail("expected a point [x, y]");
      }
      Point const p{node.at(0).as_number(), node.at(1).as_number()};
      node.anchored([&] { check_domain(p); });
      return p;
    }

    std::size_t builtin_order(Node const& spec, std::string const& digits) {
      try {
        std::size_t used = 0;
        auto const  n    = std::stoul(digits, &used);
        if (used == digits.size() && n > 0) {
          return n;
        }
      } catch (std::exception const&) {
      }
      spec.fail("unknown builtin group \"" + spec.as_string() + "\"");
    }

    std::shared_ptr<ReactionGroup const> builtin_group(Node const& spec, std::string const& name) {
      return spec.anchored([&] {
        if (name == "sign") {
          return std::make_shared<ReactionGroup const>(ReactionGroup::sign_flip());
        }
        if (name.size() > 1 && name[0] == 'S') {
          return std::make_shared<ReactionGroup const>(
              ReactionGroup::symmetric(builtin_order(spec, name.substr(1))));
        }
        if (name.size() > 1 && name[0] == 'C') {
          return std::make_shared<ReactionGroup const>(
              ReactionGroup::cyclic(builtin_order(spec, name.substr(1))));
        }
        spec.fail("unknown builtin group \"" + name + "\"");
      });
    }

    std::shared_ptr<ReactionGroup const> inline_group(Node const& spec, std::size_t bound) {
      spec.allow_keys({"states", "elements", "identity", "double_negation"});
      auto const               states_node = spec.at("states");
      std::vector<std::string> states;
      for (std::size_t k = 0; k < states_node.size(); ++k) {
        states.push_back(states_node.at(k).as_string());
      }
      auto const                                  elements_node = spec.at("elements");
      std::vector<ReactionGroup::NamedPermutation> elements;
      for (std::size_t k = 0; k < elements_node.size(); ++k) {
        auto const item = elements_node.at(k);
        item.allow_keys({"name", "perm"});
        auto const perm_node = item.at("perm");
        if (perm_node.size() != states.size()) {
          perm_node.fail("a permutation needs one image per state (" + std::to_string(states.size())
                         + ")");
        }
        ReactionGroup::NamedPermutation p{item.at("name").as_string(), {}};
        for (std::size_t x = 0; x < perm_node.size(); ++x) {
          p.perm.push_back(perm_node.at(x).as_size());
        }
        elements.push_back(std::move(p));
      }
      std::string const identity = spec.at("identity").as_string();
      bool const double_negation = spec.find("double_negation") ? spec.at("double_negation").as_bool() : false;
      return spec.anchored([&] {
        return std::make_shared<ReactionGroup const>(
            StateSet(std::move(states)), std::move(elements), identity, double_negation, bound);
      });
    }

    std::size_t node_ref(Node const& ref, RelationGraph const* graph, std::vector<std::string> const& labels) {
      if (ref.is_string()) {
        std::string const label = ref.as_string();
        for (std::size_t v = 0; v < labels.size(); ++v) {
          if (labels[v] == label) {
            return v;
          }
        }
        ref.fail("unknown node \"" + label + "\"");
      }
      std::size_t const v = ref.as_size();
      std::size_t const n = graph ? graph->node_count() : labels.size();
      if (v >= n) {
        ref.fail("node index " + std::to_string(v) + " out of range");
      }
      return v;
    }

    std::vector<std::string> labels_of(Node const& nodes) {
      if (nodes.is_number()) {
        std::size_t const n = nodes.as_size();
        if (n < 2) {
          nodes.fail("a network needs at least two nodes");
        }
        return RelationGraph::default_labels(n);
      }
      std::vector<std::string> labels;
      std::set<std::string>    seen;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        auto const item = nodes.at(k);
        labels.push_back(item.as_string());
        if (!seen.insert(labels.back()).second) {
          item.fail("duplicate node \"" + labels.back() + "\"");
        }
      }
      return labels;
    }

    Parity parity_of(Node const& node) {
      std::string const p = node.as_string();
      if (p == "odd") {
        return Parity::odd;
      }
      if (p == "even") {
        return Parity::even;
      }
      node.fail("parity must be \"odd\" or \"even\"");
    }

    std::function<double(double)> polynomial_of(Node const& spec, std::string const& key) {
      auto const node = spec.find(key);
      return polynomial(node ? numbers_of(*node) : std::vector<double>{});
    }

    ParameterizedCurve single_curve(Node const& spec) {
      std::string const kind = spec.at("kind").as_string();
      std::optional<ParameterizedCurve> curve;
      if (kind == "segment") {
        spec.allow_keys({"kind", "from", "to", "reverse"});
        curve = ParameterizedCurve::segment(point_of(spec.at("from")), point_of(spec.at("to")));
      } else if (kind == "polyline") {
        spec.allow_keys({"kind", "points", "reverse"});
        auto const         points = spec.at("points");
        std::vector<Point> pts;
        for (std::size_t k = 0; k < points.size(); ++k) {
          pts.push_back(point_of(points.at(k)));
        }
        curve = spec.anchored([&] { return ParameterizedCurve::polyline(std::move(pts)); });
      } else if (kind == "bezier") {
        spec.allow_keys({"kind", "points", "reverse"});
        auto const         points = spec.at("points");
        std::vector<Point> ctrl;
        for (std::size_t k = 0; k < points.size(); ++k) {
          ctrl.push_back(point_of(points.at(k)));
        }
        if (ctrl.size() < 2) {
          points.fail("a Bezier curve needs at least two control points");
        }
        // De Casteljau; the unit square is convex so the curve stays inside.
        curve = ParameterizedCurve(
            [ctrl](double s) {
              auto p = ctrl;
              for (std::size_t level = p.size() - 1; level > 0; --level) {
                for (std::size_t k = 0; k < level; ++k) {
                  p[k] = {p[k].x + s * (p[k + 1].x - p[k].x), p[k].y + s * (p[k + 1].y - p[k].y)};
                }
              }
              return p.front();
            },
            0.0, 1.0);
      } else if (kind == "sine" || kind == "power") {
        if (kind == "sine") {
          spec.allow_keys({"kind", "from", "to", "reverse"});
        } else {
          spec.allow_keys({"kind", "m", "from", "to", "reverse"});
        }
        Point const  a = point_of(spec.at("from"));
        Point const  b = point_of(spec.at("to"));
        double const m = kind == "power" ? spec.at("m").as_number() : 1.0;
        if (m <= 0.0) {
          spec.at("m").fail("the exponent must be positive");
        }
        auto const lerp = [a, b](double u) {
          return Point{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
        };
        if (kind == "sine") {
          curve = ParameterizedCurve([lerp](double s) { return lerp(std::sin(s)); }, 0.0,
                                     std::numbers::pi / 2);
        } else {
          curve = ParameterizedCurve([lerp, m](double s) { return lerp(std::pow(s, m)); }, 0.0, 1.0);
        }
      } else {
        spec.at("kind").fail("unknown curve kind \"" + kind + "\"");
      }
      if (auto r = spec.find("reverse"); r && r->as_bool()) {
        return curve->reversed();
      }
      return *curve;
    }
  }  // namespace

  std::shared_ptr<ReactionGroup const> load_group(Node const&               spec,
                                                  std::size_t               bound,
                                                  std::vector<std::string>* texts) {
    if (spec.is_object()) {
      return inline_group(spec, bound);
    }
    std::string const name = spec.as_string();
    if (name.starts_with("builtin:")) {
      auto group = builtin_group(spec, name.substr(8));
      if (group->size() > bound) {
        spec.fail("group order " + std::to_string(group->size()) + " exceeds bound "
                      + std::to_string(bound),
                  ErrorCode::bound_exceeded);
      }
      return group;
    }
    std::filesystem::path path(name);
    if (path.is_relative()) {
      path = spec.document().base() / path;
    }
    auto const doc = spec.anchored([&] { return Document::load(path); });
    if (texts) {
      texts->push_back(doc->text());
    }
    return inline_group(Node(doc), bound);
  }

  NetworkFile load_network(std::shared_ptr<Document const> doc, std::size_t group_bound) {
    Node const root(doc);
    root.allow_keys({"group", "nodes", "edges"});
    std::vector<std::string> texts{doc->text()};
    auto const               group  = load_group(root.at("group"), group_bound, &texts);
    auto const               labels = labels_of(root.at("nodes"));

    auto const                         edges_node = root.at("edges");
    std::vector<DirectedEdge>          edges;
    std::map<DirectedEdge, std::size_t> where;  // edge -> position in the file
    std::vector<GroupElement>          marks;
    std::vector<std::optional<double>> weights;
    for (std::size_t k = 0; k < edges_node.size(); ++k) {
      auto const item = edges_node.at(k);
      item.allow_keys({"from", "to", "reaction", "weight"});
      DirectedEdge const e{node_ref(item.at("from"), nullptr, labels),
                           node_ref(item.at("to"), nullptr, labels)};
      std::string const  name = labels[e.from] + "->" + labels[e.to];
      if (e.from == e.to) {
        item.fail("edge " + name + " is a loop");
      }
      if (!where.emplace(e, k).second) {
        item.fail("duplicate edge " + name);
      }
      auto const reaction = item.at("reaction");
      auto const g        = group->find(reaction.as_string());
      if (!g) {
        reaction.fail("unknown reaction \"" + reaction.as_string() + "\"");
      }
      edges.push_back(e);
      marks.push_back(*g);
      std::optional<double> w;
      if (auto wn = item.find("weight")) {
        w = wn->as_number();
        if (!(*w > 0.0)) {
          wn->fail("weights must be positive");
        }
      }
      weights.push_back(w);
    }
    for (auto const& [e, k] : where) {
      if (!where.contains(DirectedEdge{e.to, e.from})) {
        edges_node.at(k).fail("edge " + labels[e.from] + "->" + labels[e.to]
                              + " has no reverse edge " + labels[e.to] + "->" + labels[e.from]);
      }
    }
    auto const graph = edges_node.anchored(
        [&] { return std::make_shared<RelationGraph const>(labels, edges); });

    // Reorder the file's edges into the graph's edge index order.
    std::vector<GroupElement>          values(graph->edge_count());
    std::vector<std::optional<double>> edge_weight(graph->edge_count());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      std::size_t const e = *graph->edge_index(edges[k].from, edges[k].to);
      values[e]           = marks[k];
      edge_weight[e]      = weights[k];
    }
    std::optional<ChoiceDistribution> choice;
    bool const any_weight = std::any_of(edge_weight.begin(), edge_weight.end(),
                                        [](auto const& w) { return w.has_value(); });
    if (any_weight) {
      ChoiceDistribution q;
      for (std::size_t i = 0; i < graph->node_count(); ++i) {
        auto& row = q.weights.emplace_back();
        for (std::size_t j : graph->neighbors(i)) {
          row.push_back(edge_weight[*graph->edge_index(i, j)].value_or(1.0));
        }
      }
      choice = std::move(q);
    }

    std::string joined;
    for (auto const& t : texts) {
      joined += t;
      joined += '\0';
    }
    return NetworkFile{doc->source(), sha256_hex(joined), Marking(graph, group, std::move(values)),
                       std::move(choice)};
  }

  NetworkFile load_network(std::filesystem::path const& path, std::size_t group_bound) {
    return load_network(Document::load(path), group_bound);
  }

  std::function<double(double)> polynomial(std::vector<double> coefficients) {
    return [c = std::move(coefficients)](double x) {
      double acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
      }
      return acc;
    };
  }

  InvolutionField load_field(Node const& spec, double tol) {
    std::string const kind = spec.at("kind").as_string();
    if (kind == "constant") {
      spec.allow_keys({"kind", "a", "b", "c"});
      double const a = spec.at("a").as_number();
      double const b = spec.at("b").as_number();
      double const c = spec.at("c").as_number();
      return spec.anchored([&] { return InvolutionField::constant(InvolutionMatrix(a, b, c, tol)); });
    }
    if (kind == "rotation") {
      spec.allow_keys({"kind", "x", "y"});
      auto const px = polynomial_of(spec, "x");
      auto const py = polynomial_of(spec, "y");
      return InvolutionField::rotation([px, py](Point p) { return px(p.x) + py(p.y); });
    }
    if (kind == "canonical") {
      spec.allow_keys({"kind", "c2", "c3", "r"});
      auto const c2 = polynomial(numbers_of(spec.at("c2")));
      auto const c3 = polynomial(numbers_of(spec.at("c3")));
      auto const r  = polynomial_of(spec, "r");
      return spec.anchored([&] { return solve_ode_field(c2, c3, r).field; });
    }
    if (kind == "skew") {
      spec.allow_keys({"kind", "scale"});
      double const s = spec.find("scale") ? spec.at("scale").as_number() : 1.0;
      if (std::abs(s) > 1.0) {
        spec.at("scale").fail("|scale| must not exceed 1");
      }
      return InvolutionField(
          [s](Point p) {
            double const a = s * p.x * p.y;
            double const b = std::sqrt(1.0 - a * a);
            return std::array{a, b, b};
          },
          tol);
    }
    if (kind == "projected") {
      spec.allow_keys({"kind", "field", "plane"});
      auto const inner = load_field(spec.at("field"), tol);
      auto const plane = spec.at("plane");
      if (plane.size() != 3) {
        plane.fail("expected [c1, c2, c3]");
      }
      PlaneCoefficients const p{plane.at(0).as_number(), plane.at(1).as_number(), plane.at(2).as_number()};
      return plane.anchored([&] { return project_to_plane(inner, p); });
    }
    spec.at("kind").fail("unknown field kind \"" + kind + "\"");
  }

  std::vector<ParameterizedCurve> load_curve(Node const& spec) {
    if (spec.at("kind").as_string() != "loop") {
      return {single_curve(spec)};
    }
    spec.allow_keys({"kind", "parts"});
    auto const                      parts = spec.at("parts");
    std::vector<ParameterizedCurve> out;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      out.push_back(single_curve(parts.at(k)));
    }
    if (out.empty()) {
      parts.fail("a loop needs at least one part");
    }
    return out;
  }

  EmbeddingFile load_embedding(std::shared_ptr<Document const> doc, RelationGraph const& graph) {
    Node const root(doc);
    root.allow_keys({"nodes", "curves", "tags", "even_steps", "odd_steps", "residual_h",
                     "residual_limit", "field"});
    EmbeddingFile out;
    auto const    nodes = root.at("nodes");
    out.embedding.nodes.assign(graph.node_count(), Point{});
    if (nodes.is_object()) {
      std::vector<bool> seen(graph.node_count(), false);
      for (auto const& item : nodes.json().items()) {
        auto const child = nodes.at(item.key());
        auto const v     = graph.node_of(item.key());
        if (!v) {
          child.fail("unknown node \"" + item.key() + "\"");
        }
        out.embedding.nodes[*v] = point_of(child);
        seen[*v]                = true;
      }
      for (std::size_t v = 0; v < seen.size(); ++v) {
        if (!seen[v]) {
          nodes.fail("no position for node \"" + graph.label(v) + "\"");
        }
      }
    } else {
      if (nodes.size() != graph.node_count()) {
        nodes.fail("expected " + std::to_string(graph.node_count()) + " node positions");
      }
      for (std::size_t v = 0; v < graph.node_count(); ++v) {
        out.embedding.nodes[v] = point_of(nodes.at(v));
      }
    }

    auto const edge_of = [&](Node const& item) {
      std::size_t const i = node_ref(item.at("from"), &graph, graph.labels());
      std::size_t const j = node_ref(item.at("to"), &graph, graph.labels());
      if (!graph.has_edge(i, j)) {
        item.fail("no edge " + graph.label(i) + "->" + graph.label(j) + " in the network");
      }
      return std::pair{i, j};
    };

    if (auto curves = root.find("curves")) {
      for (std::size_t k = 0; k < curves->size(); ++k) {
        auto const item = curves->at(k);
        item.allow_keys({"from", "to", "curve"});
        auto const [i, j]     = edge_of(item);
        auto const curve_node = item.at("curve");
        auto       pieces     = load_curve(curve_node);
        if (pieces.size() != 1) {
          curve_node.fail("edge curves must be single curves");
        }
        auto curve = i < j ? pieces.front() : pieces.front().reversed();
        auto const& a = out.embedding.nodes[std::min(i, j)];
        auto const& b = out.embedding.nodes[std::max(i, j)];
        auto const  close = [](Point p, Point q) {
          return std::abs(p.x - q.x) <= 1e-9 && std::abs(p.y - q.y) <= 1e-9;
        };
        if (!close(curve.start(), a) || !close(curve.end(), b)) {
          curve_node.fail("the curve does not join the positions of its nodes");
        }
        if (!out.embedding.curves.emplace(UndirectedEdge{std::min(i, j), std::max(i, j)}, curve).second) {
          item.fail("duplicate curve for edge " + graph.label(i) + "-" + graph.label(j));
        }
      }
    }
    if (auto tags = root.find("tags")) {
      for (std::size_t k = 0; k < tags->size(); ++k) {
        auto const item = tags->at(k);
        item.allow_keys({"from", "to", "parity"});
        auto const [i, j] = edge_of(item);
        out.options.tags[UndirectedEdge{std::min(i, j), std::max(i, j)}] = parity_of(item.at("parity"));
      }
    }
    auto const steps = [&](char const* key, std::size_t& target, std::size_t remainder) {
      if (auto n = root.find(key)) {
        target = n->as_size();
        if (target < 2 || target % 2 != remainder) {
          n->fail(std::string(key) + (remainder == 0 ? " must be even" : " must be odd") + " and at least 2");
        }
      }
    };
    steps("even_steps", out.options.even_steps, 0);
    steps("odd_steps", out.options.odd_steps, 1);
    if (auto h = root.find("residual_h")) {
      out.options.residual_h = h->as_number();
      if (!(out.options.residual_h > 0.0 && out.options.residual_h < 0.5)) {
        h->fail("residual_h must lie in (0, 0.5)");
      }
    }
    if (auto r = root.find("residual_limit")) {
      out.options.residual_limit = r->as_number();
      if (!(out.options.residual_limit > 0.0)) {
        r->fail("residual_limit must be positive");
      }
    }
    if (auto f = root.find("field")) {
      out.field = load_field(*f);
    }
    return out;
  }

  std::shared_ptr<Document const> inline_or_file(std::string const& text, std::string const& what) {
    auto const first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
      return Document::parse(text, what);
    }
    return Document::load(text);
  }

}  // namespace balance_nets::io
