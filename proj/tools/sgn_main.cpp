// Command-line front end: validation, morphism checking, law checking over
// semiosis sequences, seeded simulation, and trace analysis.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgn/link.hpp"
#include "sgn/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;

void print_diagnostics(const std::vector<sgn::Diagnostic>& ds, const std::string& origin) {
    for (const auto& d : ds) {
        std::cerr << origin;
        if (d.line > 0) std::cerr << ":" << d.line << ":" << d.column;
        std::cerr << ": " << d.code << ": " << d.message << "\n";
    }
}

nlohmann::json diagnostics_json(const std::vector<sgn::Diagnostic>& ds) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : ds)
        arr.push_back(
            {{"code", d.code}, {"message", d.message}, {"line", d.line}, {"column", d.column}});
    return arr;
}

struct LoadResult {
    sgn::dsl::Workspace workspace;
    std::vector<sgn::dsl::ParsedFile> files;
    bool ok = false;
};

LoadResult load(const std::vector<std::string>& paths, bool json_output,
                bool require_valid_morphisms) {
    LoadResult res;
    res.workspace = sgn::dsl::load_and_link(paths, &res.files);
    std::vector<sgn::Diagnostic> all = res.workspace.diagnostics;
    if (require_valid_morphisms)
        for (const auto& [name, rep] : res.workspace.morphism_reports)
            for (const auto& d : rep.diagnostics) {
                sgn::Diagnostic tagged = d;
                tagged.message = "morphism " + name + ": " + d.message;
                all.push_back(std::move(tagged));
            }
    if (!all.empty()) {
        if (json_output)
            std::cout << nlohmann::json{{"diagnostics", diagnostics_json(all)}}.dump() << "\n";
        print_diagnostics(all, paths.empty() ? "<input>" : paths.front());
    }
    res.ok = all.empty();
    return res;
}

int cmd_validate(const std::vector<std::string>& paths, bool json_output) {
    LoadResult res = load(paths, json_output, true);
    if (!res.ok) return kExitBadInput;
    if (json_output)
        std::cout << nlohmann::json{{"diagnostics", nlohmann::json::array()}}.dump() << "\n";
    return kExitOk;
}

int cmd_morph_check(const std::string& path, const std::string& name, bool json_output) {
    LoadResult res = load({path}, json_output, false);
    if (!res.ok) return kExitBadInput;
    const auto& ws = res.workspace;
    auto rep_it = ws.morphism_reports.find(name);
    if (rep_it == ws.morphism_reports.end()) {
        std::cerr << path << ": no morphism named " << name << "\n";
        return kExitBadInput;
    }
    const sgn::MorphismReport& rep = rep_it->second;
    if (json_output) {
        std::cout << nlohmann::json{{"morphism", name},
                                    {"valid", rep.valid},
                                    {"isomorphism", rep.is_isomorphism},
                                    {"level_preserving", rep.is_level_preserving},
                                    {"diagnostics", diagnostics_json(rep.diagnostics)}}
                         .dump()
                  << "\n";
    } else {
        std::cout << "morphism " << name << ": " << (rep.valid ? "valid" : "invalid")
                  << ", isomorphism: " << (rep.is_isomorphism ? "yes" : "no")
                  << ", level-preserving: " << (rep.is_level_preserving ? "yes" : "no") << "\n";
        print_diagnostics(rep.diagnostics, path);
    }
    return rep.valid ? kExitOk : kExitPropertyFailed;
}

int cmd_laws(const std::string& path, const std::string& sequence_name,
             const std::string& config_name, std::uint64_t seed, bool json_output) {
    LoadResult res = load({path}, json_output, false);
    if (!res.ok) return kExitBadInput;
    const auto& ws = res.workspace;
    auto seq_it = ws.sequences.find(sequence_name);
    if (seq_it == ws.sequences.end()) {
        std::cerr << path << ": no sequence named " << sequence_name << "\n";
        return kExitBadInput;
    }
    const sgn::SemiosisSequence& seq = seq_it->second;
    if (seq.components.empty()) {
        std::cerr << path << ": sequence " << sequence_name << " has no components\n";
        return kExitPropertyFailed;  // law I cannot hold on an empty sequence
    }

    sgn::Configuration start = seq.components.front().source_config;
    if (!config_name.empty()) {
        auto cfg_it = ws.configs.find(config_name);
        if (cfg_it == ws.configs.end()) {
            std::cerr << path << ": no config named " << config_name << "\n";
            return kExitBadInput;
        }
        start = cfg_it->second;
        if (!sgn::same_system(*start.system, *seq.components.front().source_system)) {
            std::cerr << path << ": config " << config_name << " is not over system "
                      << seq.components.front().source_system->name << "\n";
            return kExitBadInput;
        }
    }

    sgn::LawReport rep = sgn::check_law_one(seq);
    std::vector<sgn::Configuration> stages = sgn::stage_configs_modal(seq, start, seed);
    rep.law2_verdicts = sgn::check_law_two(seq, &stages, seed);
    bool all_natural = true;
    for (const auto& row : rep.law2_verdicts)
        for (bool v : row) all_natural = all_natural && v;
    const bool pass = rep.law1_holds && all_natural;

    if (json_output) {
        nlohmann::json law1{{"holds", rep.law1_holds}};
        law1["well_defined_witness"] = rep.well_defined_witness
                                           ? nlohmann::json(*rep.well_defined_witness)
                                           : nlohmann::json(nullptr);
        law1["level_break_witness"] =
            rep.level_break_witness
                ? nlohmann::json{rep.level_break_witness->first, rep.level_break_witness->second}
                : nlohmann::json(nullptr);
        nlohmann::json verdicts = nlohmann::json::array();
        for (const auto& row : rep.law2_verdicts) verdicts.push_back(row);
        std::cout
            << nlohmann::json{{"sequence", sequence_name},
                              {"law1", law1},
                              {"law2", {{"verdicts", verdicts}, {"all_natural", all_natural}}},
                              {"pass", pass}}
                   .dump()
            << "\n";
    } else {
        std::cout << "sequence " << sequence_name << "\n";
        std::cout << "  law I: " << (rep.law1_holds ? "holds" : "does not hold");
        if (rep.well_defined_witness)
            std::cout << " (well-defined component: " << *rep.well_defined_witness << ")";
        if (rep.level_break_witness)
            std::cout << " (level break: component " << rep.level_break_witness->first
                      << ", branch " << rep.level_break_witness->second << ")";
        std::cout << "\n";
        for (std::size_t i = 0; i < rep.law2_verdicts.size(); ++i)
            for (std::size_t k = 0; k < rep.law2_verdicts[i].size(); ++k)
                std::cout << "  law II: component " << i << " branch " << k << ": "
                          << (rep.law2_verdicts[i][k] ? "natural" : "not natural") << "\n";
        std::cout << "  overall: " << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? kExitOk : kExitPropertyFailed;
}

int cmd_simulate(const std::string& path, std::string scenario_name, std::int64_t horizon,
                 std::uint64_t seed, const std::string& out_path, const std::string& summary_path,
                 bool json_output) {
    LoadResult res = load({path}, json_output, false);
    if (!res.ok) return kExitBadInput;
    const auto& ws = res.workspace;
    if (scenario_name.empty()) {
        if (ws.scenarios.size() != 1) {
            std::cerr << path << ": pass --scenario NAME (file has " << ws.scenarios.size()
                      << " scenarios)\n";
            return kExitBadInput;
        }
        scenario_name = ws.scenarios.begin()->first;
    }
    auto sc_it = ws.scenarios.find(scenario_name);
    if (sc_it == ws.scenarios.end()) {
        std::cerr << path << ": no scenario named " << scenario_name << "\n";
        return kExitBadInput;
    }
    sgn::sim::SimTrace trace;
    try {
        trace = sgn::sim::run(sc_it->second, horizon, seed);
    } catch (const sgn::Error& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << out_path << ": cannot open for writing\n";
            return kExitInternal;
        }
        sgn::sim::write_trace_jsonl(trace, out);
        if (!out) {
            std::cerr << out_path << ": write failed\n";
            return kExitInternal;
        }
    }
    if (!summary_path.empty()) {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out) {
            std::cerr << summary_path << ": cannot open for writing\n";
            return kExitInternal;
        }
        sgn::sim::write_summary_csv(trace, sc_it->second, out);
        if (!out) {
            std::cerr << summary_path << ": write failed\n";
            return kExitInternal;
        }
    }
    if (json_output) {
        nlohmann::json info{{"scenario", scenario_name}, {"horizon", horizon},
                            {"seed", seed},             {"events", trace.events.size()},
                            {"violations", trace.violations.size()}, {"trace", out_path}};
        info["summary"] =
            summary_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(summary_path);
        std::cout << info.dump() << "\n";
    } else {
        std::cout << "scenario " << scenario_name << ": " << trace.events.size() << " events, "
                  << trace.violations.size() << " violations over " << horizon << " ticks -> "
                  << out_path << "\n";
    }
    return kExitOk;
}

sgn::sim::SimTrace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sgn::Error(sgn::ErrorCode::IoError, "cannot read " + path);
    return sgn::sim::read_trace_jsonl(in);
}

int cmd_trend(const std::string& trace_path, const std::string& product, std::int64_t window,
              bool json_output) {
    sgn::sim::SimTrace trace;
    try {
        trace = read_trace_file(trace_path);
    } catch (const std::exception& e) {
        std::cerr << trace_path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    if (!sgn::sim::trace_knows_product(trace, product)) {
        std::cerr << trace_path << ": no product named " << product << " in trace\n";
        return kExitBadInput;
    }
    sgn::sim::TrendResult trend;
    try {
        trend = sgn::sim::interaction_trend(trace, product, window);
    } catch (const sgn::Error& e) {
        std::cerr << trace_path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    const char* verdict = trend.successful ? "SUCCESSFUL" : "NOT_SUCCESSFUL";
    if (json_output)
        std::cout << nlohmann::json{{"product", product},
                                    {"window", window},
                                    {"slope", trend.slope},
                                    {"verdict", verdict}}
                         .dump()
                  << "\n";
    else
        std::cout << "product " << product << ": slope " << sgn::detail::format_real(trend.slope)
                  << " verdict " << verdict << "\n";
    return trend.successful ? kExitOk : kExitPropertyFailed;
}

int cmd_clusters(const std::string& trace_path, double tau, bool json_output) {
    sgn::sim::SimTrace trace;
    try {
        trace = read_trace_file(trace_path);
    } catch (const std::exception& e) {
        std::cerr << trace_path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    // Per-product mean event rate per kind over the trace's tick span; the
    // empirical rate vectors stand in for environmental characteristics.
    std::set<std::string> kinds;
    std::int64_t last = 0;
    std::map<std::string, std::map<std::string, std::int64_t>> counts;
    for (const auto& e : trace.events) {
        kinds.insert(e.kind);
        last = std::max(last, e.t);
        ++counts[e.product][e.kind];
    }
    const double span = static_cast<double>(last + 1);
    std::vector<sgn::sim::AgentFeatures> items;
    for (const auto& [product, by_kind] : counts) {
        sgn::sim::AgentFeatures f;
        f.id = product;
        for (const auto& kind : kinds) {
            auto it = by_kind.find(kind);
            f.features.push_back(it == by_kind.end() ? 0.0
                                                     : static_cast<double>(it->second) / span);
        }
        items.push_back(std::move(f));
    }
    sgn::sim::Clustering clustering;
    try {
        clustering = sgn::sim::cluster_agents(std::move(items), tau);
    } catch (const sgn::Error& e) {
        std::cerr << trace_path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    if (json_output) {
        nlohmann::json assignments = nlohmann::json::object();
        for (const auto& [p, c] : clustering.assignments) assignments[p] = c;
        std::cout << nlohmann::json{{"tau", tau},
                                    {"count", clustering.centroids.size()},
                                    {"assignments", assignments}}
                         .dump()
                  << "\n";
    } else {
        for (const auto& [p, c] : clustering.assignments)
            std::cout << p << " -> cluster " << c << "\n";
        std::cout << "clusters: " << clustering.centroids.size() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sign-system algebra, semiosis law checking, and life-cycle simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json_output = false;
    std::uint64_t seed = 0;
    app.add_flag("--json", json_output, "machine-readable output");
    app.add_option("--seed", seed, "seed for all randomized steps (default 0)");

    std::vector<std::string> validate_files;
    auto* validate = app.add_subcommand("validate", "parse and validate .sgn files");
    validate->add_option("files", validate_files, "input files")->required();

    std::string morph_file, morph_name;
    auto* morph = app.add_subcommand("morph-check", "check one morphism's conditions");
    morph->add_option("file", morph_file, "input file")->required();
    morph->add_option("--morphism", morph_name, "morphism name")->required();

    std::string laws_file, laws_sequence, laws_config;
    auto* laws = app.add_subcommand("laws", "check the two life-cycle laws on a sequence");
    laws->add_option("file", laws_file, "input file")->required();
    laws->add_option("--sequence", laws_sequence, "sequence name")->required();
    laws->add_option("--config", laws_config, "designated starting configuration");

    std::string sim_file, sim_scenario, sim_out = "trace.jsonl", sim_summary;
    std::int64_t sim_horizon = 100;
    auto* simulate = app.add_subcommand("simulate", "run a scenario and write its trace");
    simulate->add_option("file", sim_file, "input file")->required();
    simulate->add_option("--scenario", sim_scenario, "scenario name (defaults to the only one)");
    simulate->add_option("--horizon", sim_horizon, "number of ticks (default 100)");
    simulate->add_option("--out", sim_out, "trace output path (default trace.jsonl)");
    simulate->add_option("--summary", sim_summary, "summary csv output path");

    std::string trend_trace, trend_product;
    std::int64_t trend_window = 16;
    auto* trend = app.add_subcommand("trend", "interaction trend of one product in a trace");
    trend->add_option("--trace", trend_trace, "trace file")->required();
    trend->add_option("--product", trend_product, "product id")->required();
    trend->add_option("--window", trend_window, "filter window (default 16)");

    std::string clusters_trace;
    double clusters_tau = 1.0;
    auto* clusters = app.add_subcommand("clusters", "cluster products by observed rates");
    clusters->add_option("--trace", clusters_trace, "trace file")->required();
    clusters->add_option("--tau", clusters_tau, "leader clustering threshold (default 1.0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);  // prints usage or the flag error
        return rc == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_files, json_output);
        if (morph->parsed()) return cmd_morph_check(morph_file, morph_name, json_output);
        if (laws->parsed())
            return cmd_laws(laws_file, laws_sequence, laws_config, seed, json_output);
        if (simulate->parsed())
            return cmd_simulate(sim_file, sim_scenario, sim_horizon, seed, sim_out, sim_summary,
                                json_output);
        if (trend->parsed())
            return cmd_trend(trend_trace, trend_product, trend_window, json_output);
        if (clusters->parsed()) return cmd_clusters(clusters_trace, clusters_tau, json_output);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
