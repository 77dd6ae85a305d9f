#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "balance_nets/cli/config.hpp"
#include "balance_nets/dynamics/markov.hpp"
#include "balance_nets/io/loaders.hpp"
#include "balance_nets/semigroup/ideals.hpp"

// Report builders behind the subcommands. Every report is a JSON object whose
// keys serialize in sorted order; identical inputs and seed give identical
// bytes.
namespace balance_nets::cli {

  // Per-node state labels.
  io::Json state_json(ReactionGroup const& group, SystemState const& x);
  io::Json matrix_json(Matrix2 const& m);
  // Row i holds the label of the node chosen by row i.
  io::Json word_json(RelationGraph const& graph, ControlWord const& w);
  // { "group"?, "nodes", "edges": [{"from", "to", "reaction"}] }, loadable
  // as a network when `group` is given.
  io::Json marking_json(Marking const& r, std::string const& group = {});

  io::Json potential_report(io::NetworkFile const& net, RunConfig const& config);
  io::Json balance_report(io::NetworkFile const& net);
  io::Json gen_fields_report(std::size_t nodes);
  io::Json markov_report(io::NetworkFile const& net, bool exact, RunConfig const& config);
  io::Json ideals_report(io::NetworkFile const& net, IdealMethod method, RunConfig const& config);
  // Run i of the Monte-Carlo uses config.seed + i.
  io::Json absorb_report(io::NetworkFile const& net,
                         std::size_t            steps,
                         std::size_t            runs,
                         RunConfig const&       config);

  io::Json residual_report(InvolutionField const&     field,
                           std::size_t                grid,
                           std::vector<double> const& hs);
  // The pieces are integrated separately with the same rule and multiplied
  // in order.
  io::Json p_integral_report(InvolutionField const&                 field,
                             std::vector<ParameterizedCurve> const& pieces,
                             std::size_t                            n,
                             Parity                                 parity,
                             RunConfig const&                       config);
  io::Json discretize_report(InvolutionField const&   field,
                             io::NetworkFile const&   net,
                             io::EmbeddingFile const& embedding,
                             RunConfig const&         config);

  // Potential, A1/A2, Markov class structure, core set, minimal left ideals
  // and final states of one network, with a cross-check between the
  // dynamics and the semigroup sides. Stage timings only when `timing`.
  io::Json run_full_analysis(std::filesystem::path const& network,
                             RunConfig const&             config,
                             bool                         timing = false);

}  // namespace balance_nets::cli
