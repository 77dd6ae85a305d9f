#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "balance_nets/io/document.hpp"

namespace balance_nets::cli {

  // Bounds, tolerances and the root seed shared by every subcommand.
  struct RunConfig {
    std::size_t bound_states    = 4096;  // |E|^|A|
    std::size_t bound_semigroup = 7;     // nodes for ideal enumeration
    std::size_t bound_grp       = 720;   // group order
    double      tau_alg         = 1e-9;
    double      tau_dyn         = 1e-12;
    double      tau_num         = 1e-6;
    std::uint64_t              seed = 0;
    std::optional<std::string> output;

    // Throws Error(validation) for non-positive tolerances or bounds below
    // the smallest supported fixtures.
    void validate() const;

    // Settings that affect results; the output destination is left out.
    io::Json to_json() const;
  };

  // Reads the keys above from a JSON object; unknown keys are rejected.
  RunConfig load_config(std::shared_ptr<io::Document const> doc);

}  // namespace balance_nets::cli
