#include "balance_nets/cli/app.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>

#include "CLI11.hpp"

#include "balance_nets/cli/reports.hpp"

namespace balance_nets::cli {

  namespace {
    // Fields used when a smooth subcommand gets no --field.
    constexpr char const* default_residual_field = R"({"kind": "canonical", "c2": [1, 1], "c3": [1, 1], "r": [0, 0, 1]})";
    constexpr char const* default_curve_field    = R"({"kind": "rotation", "x": [0, 1]})";

    void print_error(std::ostream& err, std::string const& code, std::string const& message) {
      io::Json const j = {{"error", {{"code", code}, {"message", message}}}};
      err << j.dump(2) << '\n';
    }

    void write_report(io::Json const& report, std::optional<std::string> const& path, std::ostream& out) {
      std::string const text = report.dump(2) + "\n";
      if (!path) {
        out << text;
        return;
      }
      std::ofstream file(*path, std::ios::binary);
      if (!file || !(file << text)) {
        fail(ErrorCode::invalid_input, "cannot write " + *path);
      }
    }

    InvolutionField field_from(std::string const& spec, std::string const& fallback, RunConfig const& config) {
      auto const doc = io::inline_or_file(spec.empty() ? fallback : spec, "--field");
      return io::load_field(io::Node(doc), config.tau_alg);
    }
  }  // namespace

  int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Balance and nonergodicity analysis of networks of reacting automata", "balance-nets"};
    app.require_subcommand(1);

    std::string                  config_path;
    std::optional<std::string>   out_path;
    std::optional<std::uint64_t> seed;
    bool                         timing = false;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Write the report to this file instead of stdout");
    app.add_option("--seed", seed, "Root seed for stochastic subcommands");
    app.add_flag("--timing", timing, "Add wall-clock timings to the report");

    std::string net_path;
    auto const  add_net = [&](CLI::App* sub) {
      sub->add_option("--net", net_path, "Network JSON file")->required()->check(CLI::ExistingFile);
    };

    // The selected subcommand fills this in; run after parsing and config.
    std::function<io::Json(RunConfig const&)> command;

    auto* check = app.add_subcommand("check-potential", "Potentiality, A1/A2 and balance of a marking");
    add_net(check);
    check->callback([&] {
      command = [&](RunConfig const& c) {
        return potential_report(io::load_network(net_path, c.bound_grp), c);
      };
    });

    auto* balance = app.add_subcommand("balance", "Two-block balance partition of a marking");
    add_net(balance);
    balance->callback([&] {
      command = [&](RunConfig const& c) { return balance_report(io::load_network(net_path, c.bound_grp)); };
    });

    std::size_t nodes = 3;
    auto*       gen   = app.add_subcommand("gen-fields", "Potential fields of K_N over the sign-flip group");
    gen->add_option("--nodes", nodes, "Number of nodes N")->required()->check(CLI::Range(2, 16));
    gen->callback([&] { command = [&](RunConfig const&) { return gen_fields_report(nodes); }; });

    bool  exact  = false;
    auto* markov = app.add_subcommand("markov", "Markov chain class structure and core set");
    add_net(markov);
    markov->add_flag("--exact", exact, "Exact rational transition probabilities");
    markov->callback([&] {
      command = [&](RunConfig const& c) {
        return markov_report(io::load_network(net_path, c.bound_grp), exact, c);
      };
    });

    std::string method = "structural";
    auto*       ideals = app.add_subcommand("ideals", "Minimal left ideals of the word semigroup");
    add_net(ideals);
    ideals->add_option("--method", method, "structural or exhaustive")
        ->check(CLI::IsMember({"structural", "exhaustive"}));
    ideals->callback([&] {
      command = [&](RunConfig const& c) {
        auto const m = method == "structural" ? IdealMethod::structural : IdealMethod::exhaustive;
        return ideals_report(io::load_network(net_path, c.bound_grp), m, c);
      };
    });

    std::size_t                  steps = 1000, runs = 1000;
    std::optional<std::uint64_t> absorb_seed;
    auto* absorb = app.add_subcommand("absorb", "Monte-Carlo absorption of random control products");
    add_net(absorb);
    absorb->add_option("--steps", steps, "Step limit per run")->check(CLI::PositiveNumber);
    absorb->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
    absorb->add_option("--seed", absorb_seed, "Root seed; run i uses seed + i");
    absorb->callback([&] {
      command = [&](RunConfig const& c) {
        RunConfig local = c;
        if (absorb_seed) {
          local.seed = *absorb_seed;
        }
        return absorb_report(io::load_network(net_path, c.bound_grp), steps, runs, local);
      };
    });

    auto* smooth = app.add_subcommand("smooth", "Smooth involution fields");
    smooth->require_subcommand(1);
    std::string field_spec;
    auto const  add_field = [&](CLI::App* sub) {
      sub->add_option("--field", field_spec, "Field spec: inline JSON or a file");
    };

    std::size_t         grid = 8;
    std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
    auto* residual = smooth->add_subcommand("check-residual", "Infinitesimal residual on a grid");
    residual->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    add_field(residual);
    residual->add_option("--grid", grid, "Grid points per axis")->check(CLI::Range(1, 1024));
    residual->add_option("--h", hs, "Difference steps")->expected(1, -1)->check(CLI::Range(1e-8, 0.1));
    residual->callback([&] {
      command = [&](RunConfig const& c) {
        return residual_report(field_from(field_spec, default_residual_field, c), grid, hs);
      };
    });

    std::string curve_spec;
    std::size_t n = 1024;
    std::string parity = "even";
    auto*       pint   = smooth->add_subcommand("p-integral", "P-integral along a curve");
    add_field(pint);
    pint->add_option("--curve", curve_spec, "Curve spec: inline JSON or a file")->required();
    pint->add_option("--n", n, "Number of midpoint steps")->check(CLI::Range(1, 1 << 24));
    pint->add_option("--parity", parity, "even (P2) or odd (P1)")->check(CLI::IsMember({"even", "odd"}));
    pint->callback([&] {
      command = [&](RunConfig const& c) {
        auto const field  = field_from(field_spec, default_curve_field, c);
        auto const pieces = io::load_curve(io::Node(io::inline_or_file(curve_spec, "--curve")));
        return p_integral_report(field, pieces, n, parity == "even" ? Parity::even : Parity::odd, c);
      };
    });

    std::string embedding_path;
    auto*       disc = smooth->add_subcommand("discretize", "Marking induced by a field on an embedded network");
    add_net(disc);
    add_field(disc);
    disc->add_option("--embedding", embedding_path, "Embedding JSON file")->required()->check(CLI::ExistingFile);
    disc->callback([&] {
      command = [&](RunConfig const& c) {
        auto const net = io::load_network(net_path, c.bound_grp);
        auto const emb = io::load_embedding(io::Document::load(embedding_path), net.marking.graph());
        if (field_spec.empty() && !emb.field) {
          fail(ErrorCode::invalid_input, "no field: give --field or a \"field\" in the embedding");
        }
        auto const field = field_spec.empty() ? *emb.field : field_from(field_spec, "", c);
        return discretize_report(field, net, emb, c);
      };
    });

    auto* analyze = app.add_subcommand("analyze", "Full analysis of one network");
    add_net(analyze);
    analyze->callback([&] {
      command = [&](RunConfig const& c) { return run_full_analysis(net_path, c, timing); };
    });

    std::vector<std::string> argv_storage{"balance-nets"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
      argv.push_back(a.data());
    }
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const& e) {
      return app.exit(e, out, err);
    } catch (CLI::CallForAllHelp const& e) {
      return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
      print_error(err, "usage", e.what());
      return exit_usage;
    } catch (Error const& e) {
      print_error(err, std::string(to_string(e.code())), e.what());
      return exit_error;
    }

    try {
      auto const start  = std::chrono::steady_clock::now();
      RunConfig  config = config_path.empty() ? RunConfig{}
                                              : load_config(io::Document::load(config_path));
      if (seed) {
        config.seed = *seed;
      }
      if (out_path) {
        config.output = out_path;
      }
      config.validate();
      io::Json report = command(config);
      if (timing && !report.contains("timing")) {
        report["timing"] = {
            {"total", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
      }
      write_report(report, config.output, out);
      return exit_ok;
    } catch (Error const& e) {
      print_error(err, std::string(to_string(e.code())), e.what());
      return exit_error;
    } catch (std::exception const& e) {
      print_error(err, "internal", e.what());
      return exit_error;
    }
  }

}  // namespace balance_nets::cli
