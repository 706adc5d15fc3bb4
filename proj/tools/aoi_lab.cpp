// aoi_lab: command-line front end for the age-of-information attack lab.
//
// Exit codes: 0 success, 2 bad configuration, 3 I/O failure,
// 4 acceptance-check failure (check subcommand only).

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/acceptance.hpp"
#include "aoi/experiment.hpp"
#include "aoi/gossip.hpp"
#include "aoi/net_model.hpp"

namespace {

using nlohmann::json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
    bool jobs_set = false;
    std::string format = "csv";  // csv | json
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return j;
}

aoi::AdversaryConfig adversary_from_json(const json& j) {
    aoi::AdversaryConfig adv;
    const std::string kind = j.value("kind", std::string{"none"});
    if (kind == "none") adv.kind = aoi::AdversaryKind::none;
    else if (kind == "timestomp_node") adv.kind = aoi::AdversaryKind::timestomp_node;
    else if (kind == "timestomp_source_link") adv.kind = aoi::AdversaryKind::timestomp_source_link;
    else if (kind == "mutation") adv.kind = aoi::AdversaryKind::mutation;
    else throw std::invalid_argument("unknown adversary kind: " + kind);
    adv.infected_node = j.value("infected_node", -1);
    adv.victim_node = j.value("victim_node", -1);
    adv.p_out = j.value("p_out", 0.0);
    adv.q_in = j.value("q_in", 0.0);
    adv.target_out = j.value("target_out", std::string{"current_time"}) == "zero"
                         ? aoi::StompTarget::zero
                         : aoi::StompTarget::current_time;
    adv.target_in = j.value("target_in", std::string{"zero"}) == "zero"
                        ? aoi::StompTarget::zero
                        : aoi::StompTarget::current_time;
    adv.p_mut = j.value("p_mut", 0.0);
    return adv;
}

aoi::GossipScenario scenario_from_json(const json& j) {
    aoi::GossipScenario sc;
    if (j.contains("topology") && j.at("topology").is_object()) {
        sc.topology = aoi::Topology::from_json(j.at("topology"));
    } else {
        const std::string kind = j.value("topology", std::string{"fully_connected"});
        const int n = j.value("n", 16);
        sc.topology = aoi::build_topology(aoi::topology_kind_from_string(kind), n,
                                          j.value("lambda_s", 1.0), j.value("lambda", 1.0));
    }
    sc.mode = j.value("mode", std::string{"timestamp"}) == "version" ? aoi::SimMode::version
                                                                     : aoi::SimMode::timestamp;
    sc.source_version_rate = j.value("lambda_e", 0.0);
    if (j.contains("adversary")) sc.adversary = adversary_from_json(j.at("adversary"));
    sc.horizon = j.value("horizon", aoi::default_horizon(sc.topology.n,
                                                         sc.topology.total_source_rate()));
    sc.warmup_fraction = j.value("warmup_fraction", 0.2);
    sc.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("jammers")) {
        const json& jam = j.at("jammers");
        aoi::JammerPlacement placement;
        if (jam.contains("links")) {
            std::vector<std::pair<int, int>> links;
            for (const auto& l : jam.at("links"))
                links.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
            placement = aoi::explicit_placement(sc.topology, links);
        } else {
            placement = aoi::make_placement(
                aoi::placement_strategy_from_string(jam.value("strategy", std::string{"equidistant"})),
                sc.topology, jam.value("budget", 0), jam.value("seed", std::uint64_t{0}));
        }
        sc.topology = aoi::apply_jammers(sc.topology, placement, jam.value("renormalize", true));
    }
    sc.validate();
    return sc;
}

int cmd_simulate(const GlobalOpts& g) {
    json cfg = load_config(g.config);
    if (g.seed_set) cfg["seed"] = g.seed;
    const aoi::GossipScenario sc = scenario_from_json(cfg);
    const int replications = cfg.value("replications", 1);
    const auto reps = aoi::run_replications(sc, replications, g.jobs_set ? g.jobs : 1);

    std::ostringstream out;
    if (g.format == "json") {
        json jr = json::array();
        for (std::size_t r = 0; r < reps.size(); ++r) {
            json e;
            e["replication"] = r;
            e["mean_age"] = reps[r].mean_age();
            e["median_age"] = reps[r].median_age();
            e["node_avg_age"] = reps[r].node_avg_age;
            if (sc.mode == aoi::SimMode::version) {
                e["node_avg_version_age"] = reps[r].node_avg_version_age;
                e["fraction_accurate"] = reps[r].fraction_accurate;
            }
            jr.push_back(e);
        }
        out << jr.dump(2) << "\n";
    } else {
        out << "replication,node,metric,value\n";
        for (std::size_t r = 0; r < reps.size(); ++r) {
            for (std::size_t i = 0; i < reps[r].node_avg_age.size(); ++i)
                out << r << "," << i << ",avg_age,"
                    << aoi::format_sig9(reps[r].node_avg_age[i]) << "\n";
            if (sc.mode == aoi::SimMode::version) {
                for (std::size_t i = 0; i < reps[r].node_avg_version_age.size(); ++i)
                    out << r << "," << i << ",avg_version_age,"
                        << aoi::format_sig9(reps[r].node_avg_version_age[i]) << "\n";
                out << r << ",-1,fraction_accurate,"
                    << aoi::format_sig9(reps[r].fraction_accurate) << "\n";
            }
        }
    }
    if (g.out.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream os(g.out, std::ios::binary);
        if (!os) throw IoError("cannot open output file: " + g.out);
        os << out.str();
        if (!os) throw IoError("write failure: " + g.out);
    }
    return 0;
}

int cmd_experiment(const std::string& kind, const GlobalOpts& g) {
    json cfg = load_config(g.config);
    if (!cfg.contains("kind")) cfg["kind"] = kind;
    if (cfg.at("kind").get<std::string>() != kind)
        throw std::invalid_argument("config kind '" + cfg.at("kind").get<std::string>() +
                                    "' does not match subcommand '" + kind + "'");
    if (!g.out.empty()) cfg["out_dir"] = g.out;
    if (g.seed_set) cfg["base_seed"] = g.seed;
    if (g.jobs_set) cfg["jobs"] = g.jobs;
    const aoi::ExperimentConfig ec = aoi::ExperimentConfig::from_json(cfg);
    const aoi::ExperimentOutput out = aoi::run_experiment(ec);
    std::cout << "wrote " << out.csv_path << " (" << out.csv.rows.size() << " rows) and "
              << out.manifest_path << "\n";
    return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& plot_kind, const GlobalOpts& g) {
    const std::string out = g.out.empty() ? (plot_kind + ".svg") : g.out;
    try {
        aoi::emit_plot(csv_path, plot_kind, out);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_check(const GlobalOpts& g) {
    aoi::AcceptanceOptions opt;
    if (g.jobs_set) opt.jobs = g.jobs;
    if (g.seed_set) opt.seed = g.seed;
    const auto results = aoi::run_acceptance(opt, std::cout);
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << " (" << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
              << ")\n";
    return failed == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"age-of-information attack laboratory"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config, "JSON configuration file")->expected(1);
    app.add_option("--out", g.out, "output file or directory");
    app.add_option("--seed", g.seed, "base RNG seed override")
        ->each([&](const std::string&) { g.seed_set = true; });
    app.add_option("--jobs", g.jobs, "worker threads (0 = hardware concurrency)")
        ->each([&](const std::string&) { g.jobs_set = true; });
    app.add_option("--format", g.format, "simulate output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.fallthrough();

    auto* sub_simulate = app.add_subcommand("simulate", "run one gossip scenario");
    for (const char* kind : {"scaling", "jamming", "mutation", "timestomp", "game", "slotted"})
        app.add_subcommand(kind, std::string("run the ") + kind + " experiment grid");

    std::string plot_csv, plot_kind = "age_vs_n";
    auto* sub_plot = app.add_subcommand("plot", "render an SVG chart from a results CSV");
    sub_plot->add_option("csv", plot_csv, "input CSV")->required();
    sub_plot->add_option("--kind", plot_kind, "age_vs_n | f_vs_rate");

    auto* sub_check = app.add_subcommand("check", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sub_simulate->parsed()) return cmd_simulate(g);
        if (sub_plot->parsed()) return cmd_plot(plot_csv, plot_kind, g);
        if (sub_check->parsed()) return cmd_check(g);
        for (const char* kind : {"scaling", "jamming", "mutation", "timestomp", "game", "slotted"})
            if (app.get_subcommand(kind)->parsed()) return cmd_experiment(kind, g);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
}
