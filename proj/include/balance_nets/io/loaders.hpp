#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "balance_nets/algebra/group.hpp"
#include "balance_nets/dynamics/markov.hpp"
#include "balance_nets/io/document.hpp"
#include "balance_nets/network/marking.hpp"
#include "balance_nets/smoothfield/conic.hpp"
#include "balance_nets/smoothfield/discretize.hpp"
#include "balance_nets/smoothfield/field.hpp"

namespace balance_nets::io {

  // A group given inline, as "builtin:sign", "builtin:S<n>", "builtin:C<n>",
  // or as a path relative to the enclosing document. `texts` collects the
  // contents of every file read.
  std::shared_ptr<ReactionGroup const> load_group(Node const&               spec,
                                                  std::size_t               bound,
                                                  std::vector<std::string>* texts = nullptr);

  struct NetworkFile {
    std::string source;
    std::string digest;  // SHA-256 over every input text, in load order
    Marking     marking;
    // Present when some edge carries a "weight".
    std::optional<ChoiceDistribution> choice;
  };

  // { "group": ..., "nodes": [labels] or n, "edges": [{"from", "to",
  // "reaction", "weight"?}] }. Endpoints are labels (strings) or 0-based
  // positions in "nodes" (integers).
  NetworkFile load_network(std::shared_ptr<Document const> doc,
                           std::size_t                     group_bound = default_group_bound);
  NetworkFile load_network(std::filesystem::path const& path,
                           std::size_t                  group_bound = default_group_bound);

  // Polynomial coefficients in ascending powers.
  std::function<double(double)> polynomial(std::vector<double> coefficients);

  // { "kind": "constant", "a", "b", "c" }
  // { "kind": "rotation", "x": [poly], "y": [poly] }   angle = p(x) + q(y)
  // { "kind": "canonical", "c2": [poly], "c3": [poly], "r": [poly] }
  // { "kind": "skew", "scale" }                        a = scale x y, b = c
  // { "kind": "projected", "field": {...}, "plane": [c1, c2, c3] }
  InvolutionField load_field(Node const& spec, double tol = tau_fld);

  // One or more pieces traversed in order. Single curves:
  // { "kind": "segment", "from": [x, y], "to": [x, y] }
  // { "kind": "polyline", "points": [[x, y], ...] }  first order at kinks
  // { "kind": "bezier", "points": [[x, y], ...] }    control points
  // { "kind": "sine", "from", "to" }       from + sin(s) (to - from), s in [0, pi/2]
  // { "kind": "power", "m", "from", "to" } from + s^m (to - from), s in [0, 1]
  // each optionally with "reverse": true, or { "kind": "loop", "parts": [...] }.
  std::vector<ParameterizedCurve> load_curve(Node const& spec);

  struct EmbeddingFile {
    Embedding                      embedding;
    DiscretizeOptions              options;
    std::optional<InvolutionField> field;
  };

  // { "nodes": [[x, y], ...] or {label: [x, y]}, "curves": [{"from", "to",
  // "curve"}], "tags": [{"from", "to", "parity"}], "even_steps", "odd_steps",
  // "residual_h", "residual_limit", "field" }
  EmbeddingFile load_embedding(std::shared_ptr<Document const> doc, RelationGraph const& graph);

  // Parses `text` as JSON when it starts with '{' or '[', otherwise loads it
  // as a file path.
  std::shared_ptr<Document const> inline_or_file(std::string const& text, std::string const& what);

}  // namespace balance_nets::io
