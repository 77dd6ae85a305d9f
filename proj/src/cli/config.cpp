#include "balance_nets/cli/config.hpp"

#include <cmath>

namespace balance_nets::cli {

  namespace {
    // The three-node sign-flip network: 2^3 states, a two-element group.
    constexpr std::size_t min_states    = 8;
    constexpr std::size_t min_semigroup = 3;
    constexpr std::size_t min_group     = 2;
  }  // namespace

  void RunConfig::validate() const {
    auto const positive = [](char const* name, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorCode::validation, std::string(name) + " must be positive and finite");
      }
    };
    positive("tau_alg", tau_alg);
    positive("tau_dyn", tau_dyn);
    positive("tau_num", tau_num);
    auto const at_least = [](char const* name, std::size_t v, std::size_t min) {
      if (v < min) {
        fail(ErrorCode::validation,
             std::string(name) + " must be at least " + std::to_string(min) + ", got "
                 + std::to_string(v));
      }
    };
    at_least("bound_states", bound_states, min_states);
    at_least("bound_semigroup", bound_semigroup, min_semigroup);
    at_least("bound_grp", bound_grp, min_group);
  }

  io::Json RunConfig::to_json() const {
    io::Json j = {{"bound_states", bound_states},
                  {"bound_semigroup", bound_semigroup},
                  {"bound_grp", bound_grp},
                  {"tau_alg", tau_alg},
                  {"tau_dyn", tau_dyn},
                  {"tau_num", tau_num},
                  {"seed", seed}};
    return j;
  }

  RunConfig load_config(std::shared_ptr<io::Document const> doc) {
    io::Node const root(doc);
    root.allow_keys({"bound_states", "bound_semigroup", "bound_grp", "tau_alg", "tau_dyn",
                     "tau_num", "seed", "output"});
    RunConfig c;
    auto const size = [&](char const* key, std::size_t& target) {
      if (auto n = root.find(key)) {
        target = n->as_size();
      }
    };
    auto const number = [&](char const* key, double& target) {
      if (auto n = root.find(key)) {
        target = n->as_number();
      }
    };
    size("bound_states", c.bound_states);
    size("bound_semigroup", c.bound_semigroup);
    size("bound_grp", c.bound_grp);
    number("tau_alg", c.tau_alg);
    number("tau_dyn", c.tau_dyn);
    number("tau_num", c.tau_num);
    if (auto n = root.find("seed")) {
      c.seed = n->as_uint64();
    }
    if (auto n = root.find("output")) {
      c.output = n->as_string();
    }
    root.anchored([&] { c.validate(); });
    return c;
  }

}  // namespace balance_nets::cli
