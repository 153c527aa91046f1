// Command-line front end: graph construction/verification, experiment runs,
// and cross-algorithm policy comparison.
//
// Exit codes: 0 success, 1 predicate false (verify), 2 usage/config error,
// 3 runtime invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frqd/experiment.hpp"
#include "frqd/graph.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("FRQD_LOG");
    if (!env) return 1;
    return std::atoi(env);
}

int cmd_verify(const std::string& path, int r, int r_prime, bool as_json) {
    frqd::Graph g = frqd::load_edge_list(path);
    const auto result = frqd::is_rr_redundant(g, r, r_prime);
    if (as_json) {
        nlohmann::ordered_json j;
        j["graph"] = path;
        j["n"] = g.n();
        j["r"] = r;
        j["r_prime"] = r_prime;
        j["redundant"] = result.redundant;
        if (result.witness) {
            nlohmann::ordered_json w;
            if (result.witness->kind == frqd::RedundancyWitness::Kind::disconnected) {
                w["kind"] = "disconnected";
                w["unreachable_node"] = result.witness->node;
            } else {
                w["kind"] = "violating_pair";
                w["pair"] = {result.witness->i, result.witness->j};
                w["shared_neighbors"] = result.witness->count;
            }
            j["witness"] = std::move(w);
        }
        std::cout << j.dump(2) << "\n";
    } else if (result.redundant) {
        std::cout << path << ": (" << r << "," << r_prime << ")-redundant\n";
    } else {
        std::cout << path << ": NOT (" << r << "," << r_prime
                  << ")-redundant: " << result.witness->describe() << "\n";
    }
    return result.redundant ? 0 : 1;
}

int cmd_construct(int n, int r, const std::string& out) {
    const frqd::Graph g = frqd::construct_redundant(n, r);
    if (out.empty() || out == "-")
        frqd::write_edge_list(g, std::cout);
    else
        frqd::save_edge_list(g, out);
    if (log_level() > 0 && !out.empty() && out != "-")
        std::cerr << "wrote " << g.edge_count() << " edges to " << out << "\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides) {
    const auto config = frqd::ExperimentConfig::load(config_path, overrides);
    const auto report = frqd::run_experiment(config);
    if (log_level() > 0) {
        std::cerr << "final max error to oracle: "
                  << (report.error_curve.empty() ? 0.0 : report.error_curve.back().max_err)
                  << "\n";
        for (std::size_t s = 0; s < report.policy_match.size(); ++s)
            if (!report.policy_match[s] && s + 1 < report.policy_match.size())
                std::cerr << "policy mismatch at state " << s + 1 << "\n";
    }
    const bool violated = report.corruption_bound_violations || report.soundness_violations ||
                          report.symmetry_violations || report.multi_value_violations;
    return violated ? 3 : 0;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& csv_out) {
    std::vector<frqd::RunReport> reports;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw frqd::ConfigError("cannot open report: " + p);
        std::stringstream buf;
        buf << in.rdbuf();
        reports.push_back(frqd::RunReport::from_json(buf.str()));
    }
    const auto table = frqd::compare_reports(reports);
    std::cout << table.to_text();
    if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        out << table.to_csv();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Byzantine-resilient distributed Q-learning simulator and graph toolkit"};
    app.require_subcommand(1);

    // verify
    std::string graph_path;
    int r = 1, r_prime = 0;
    bool as_json = false;
    auto* verify = app.add_subcommand("verify", "check (r,r')-redundancy of an edge list");
    verify->add_option("graph", graph_path, "edge-list file")->required();
    verify->add_option("-r,--r", r, "redundancy threshold r")->required();
    verify->add_option("--r-prime", r_prime, "gap bound r'")->default_val(0);
    verify->add_flag("--json", as_json, "machine-readable output");

    // construct
    int cn = 0, cr = 0;
    std::string out_path;
    auto* construct = app.add_subcommand("construct", "build a clique-core redundant graph");
    construct->add_option("-n,--n", cn, "number of nodes")->required();
    construct->add_option("-r,--r", cr, "redundancy parameter")->required();
    construct->add_option("-o,--out", out_path, "output edge-list path (default stdout)");

    // run
    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--set", overrides, "dotted-path override, e.g. attack.f=0")
        ->take_all();

    // compare
    std::vector<std::string> report_paths;
    std::string csv_out;
    auto* compare = app.add_subcommand("compare", "merge run reports into a policy table");
    compare->add_option("reports", report_paths, "report.json files")->required();
    compare->add_option("--csv", csv_out, "also write the table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(graph_path, r, r_prime, as_json);
        if (construct->parsed()) return cmd_construct(cn, cr, out_path);
        if (run->parsed()) return cmd_run(config_path, overrides);
        if (compare->parsed()) return cmd_compare(report_paths, csv_out);
    } catch (const frqd::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const frqd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
