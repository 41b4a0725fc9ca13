// Command-line front end: experiment runs, the self-check suite, the
// drop-probability bound, and plain-text dumps of a run's order and ledger.
// Exit codes: 0 success, 1 check failure, 2 configuration error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streamnet/confirm.hpp"
#include "streamnet/config.hpp"
#include "streamnet/sim.hpp"
#include "streamnet/topology.hpp"
#include "streamnet/verify.hpp"

namespace {

using namespace streamnet;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& sets) {
    RunConfig cfg;
    if (!path.empty()) cfg = parse_config(read_file(path), path);
    for (const auto& s : sets) {
        size_t eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

// Simulation has no default constructor; emplace picks the topology-file
// overload when one is configured.
void make_sim(std::optional<Simulation>& sim, const RunConfig& cfg) {
    if (!cfg.topology_file.empty()) {
        Topology topo = parse_topology_file(read_file(cfg.topology_file), cfg.topology_file);
        sim.emplace(cfg, topo);
    } else {
        sim.emplace(cfg);
    }
}

int cmd_run(const RunConfig& cfg) {
    std::optional<Simulation> sim;
    make_sim(sim, cfg);
    sim->run();
    if (cfg.trace) {
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::filesystem::path p =
                std::filesystem::path(cfg.out_dir) / ("trace-" + cfg.config_hash() + ".log");
            std::ofstream out(p);
            out << sim->trace();
            std::cerr << "trace written to " << p.string() << "\n";
        } else {
            std::cout << sim->trace();
        }
    }
    std::cout << sim->report();
    return 0;
}

int cmd_dump_order(const RunConfig& cfg) {
    std::optional<Simulation> sim;
    make_sim(sim, cfg);
    sim->run();
    std::cout << export_order_lines(sim->final_order(0));
    return 0;
}

int cmd_dump_utxo(const RunConfig& cfg) {
    std::optional<Simulation> sim;
    make_sim(sim, cfg);
    sim->run();
    std::cout << sim->final_utxo(0).export_lines();
    return 0;
}

int cmd_topo_list() {
    for (const auto& name : builtin_topology_names()) {
        Topology t = make_topology(name);
        std::cout << t.name << '\t' << t.n_nodes << '\t' << t.n_links() << '\t'
                  << (t.has_cycle() ? "cyclic" : "acyclic") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG-ledger consensus simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;

    auto add_config_opts = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file of key=value lines");
        sub->add_option("--set", sets, "override a single key=value")->take_all();
    };

    auto* run = app.add_subcommand("run", "run one experiment and print its report");
    add_config_opts(run);

    auto* verify = app.add_subcommand("verify", "run the self-check suite");
    std::string tie = "smaller";
    VerifyOptions vopts;
    verify->add_option("--tie", tie, "pivot tie-break rule (smaller|larger)")
        ->check(CLI::IsMember({"smaller", "larger"}));
    verify->add_option("--dags", vopts.random_dags, "random DAG count for the equivalence sweep");
    verify->add_option("--blocks", vopts.dag_blocks, "blocks per random DAG");
    verify->add_option("--seeds", vopts.determinism_seeds, "seeds for the determinism check");

    auto* prdrop = app.add_subcommand("prdrop", "probability the bound drops a pivot block");
    ConfirmationParams cp;
    prdrop->add_option("--n", cp.n, "subtree weight of the pivot block")->required();
    prdrop->add_option("--m", cp.m, "subtree weight of the competing sibling")->required();
    prdrop->add_option("--q", cp.q, "attacker share of block generation")->required();
    prdrop->add_option("--lambda", cp.lambda_h, "honest block rate (blocks/s)");
    prdrop->add_option("--t", cp.t, "elapsed time in seconds")->required();

    auto* topo = app.add_subcommand("topo", "topology helpers");
    topo->require_subcommand(1);
    topo->add_subcommand("list", "list built-in topologies");

    auto* dump_order = app.add_subcommand("dump-order", "run and print the total order");
    add_config_opts(dump_order);

    auto* dump_utxo = app.add_subcommand("dump-utxo", "run and print the final ledger state");
    add_config_opts(dump_utxo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(load_config(config_path, sets));
        if (verify->parsed()) {
            vopts.pivot_tie = tie == "larger" ? TieBreak::LargerId : TieBreak::SmallerId;
            VerifyResult r = verify_suite(vopts);
            std::cout << r.text;
            return r.ok ? 0 : 1;
        }
        if (prdrop->parsed()) {
            std::printf("%.10g\n", pr_drop(cp));
            return 0;
        }
        if (topo->parsed()) return cmd_topo_list();
        if (dump_order->parsed()) return cmd_dump_order(load_config(config_path, sets));
        if (dump_utxo->parsed()) return cmd_dump_utxo(load_config(config_path, sets));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        // topology validation and bound-parameter errors
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
