#include "aoi/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "aoi/game.hpp"
#include "aoi/metrics.hpp"
#include "aoi/slotted.hpp"

namespace aoi {

double default_horizon(int n, double lambda_s) {
    return 200.0 * std::max(1.0, std::sqrt(static_cast<double>(n))) / lambda_s;
}

std::vector<MetricsReport> run_replications(const GossipScenario& base, int replications,
                                            int jobs) {
    if (replications < 1) throw std::invalid_argument("run_replications: replications >= 1");
    jobs = std::max(1, jobs);
    std::vector<MetricsReport> out(static_cast<std::size_t>(replications));

    auto work = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            GossipScenario s = base;
            s.seed = base.seed ^ static_cast<std::uint64_t>(r);
            out[static_cast<std::size_t>(r)] = run(s);
        }
    };

    if (jobs == 1 || replications == 1) {
        work(0, replications);
        return out;
    }
    std::vector<std::future<void>> futs;
    const int chunk = (replications + jobs - 1) / jobs;
    for (int b = 0; b < replications; b += chunk)
        futs.push_back(std::async(std::launch::async, work, b, std::min(b + chunk, replications)));
    for (auto& f : futs) f.get();
    return out;
}

std::string format_sig9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_csv(const Csv& csv, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        os << (i ? "," : "") << csv.header[i];
    os << "\n";
    for (const auto& row : csv.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    if (!os) throw std::runtime_error("write_csv: write failure on " + path);
}

Csv read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    Csv csv;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    if (std::getline(is, line)) csv.header = split(line);
    while (std::getline(is, line))
        if (!line.empty()) csv.rows.push_back(split(line));
    return csv;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.kind = j.at("kind").get<std::string>();
    if (j.contains("params")) c.params = j.at("params");
    c.replications = j.value("replications", 1);
    c.base_seed = j.value("base_seed", std::uint64_t{1});
    c.out_dir = j.value("out_dir", std::string{"."});
    c.jobs = j.value("jobs", 1);
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{{"kind", kind},           {"params", params},
                          {"replications", replications}, {"base_seed", base_seed},
                          {"out_dir", out_dir},     {"jobs", jobs}};
}

void ExperimentConfig::validate() const {
    static const char* kinds[] = {"scaling", "timestomp", "jamming", "mutation", "game", "slotted"};
    if (std::find(std::begin(kinds), std::end(kinds), kind) == std::end(kinds))
        throw std::invalid_argument("ExperimentConfig: unknown kind " + kind);
    if (replications < 1) throw std::invalid_argument("ExperimentConfig: replications >= 1");
}

namespace {

std::vector<int> int_list(const nlohmann::json& params, const char* key,
                          std::vector<int> fallback) {
    if (!params.contains(key)) return fallback;
    return params.at(key).get<std::vector<int>>();
}

std::vector<double> double_list(const nlohmann::json& params, const char* key,
                                std::vector<double> fallback) {
    if (!params.contains(key)) return fallback;
    return params.at(key).get<std::vector<double>>();
}

void append_aggregate_rows(Csv& csv, std::vector<std::string> prefix,
                           const std::vector<MetricsReport>& reps,
                           bool version_mode, int exclude_node) {
    for (std::size_t r = 0; r < reps.size(); ++r) {
        const MetricsReport& rep = reps[r];
        auto emit = [&](const char* metric, double value) {
            std::vector<std::string> row = prefix;
            row.push_back(std::to_string(r));
            row.push_back(metric);
            row.push_back(format_sig9(value));
            csv.rows.push_back(std::move(row));
        };
        emit("mean_age", exclude_node < 0 ? rep.mean_age() : rep.mean_age_excluding(exclude_node));
        emit("median_age", rep.median_age());
        if (version_mode) {
            double vsum = 0.0;
            for (double v : rep.node_avg_version_age) vsum += v;
            emit("mean_version_age", vsum / static_cast<double>(rep.node_avg_version_age.size()));
            emit("fraction_accurate", rep.fraction_accurate);
        }
    }
}

Csv experiment_scaling(const ExperimentConfig& cfg, nlohmann::json& resolved) {
    const auto topologies = cfg.params.value(
        "topologies", std::vector<std::string>{"disconnected", "bi_ring", "fully_connected"});
    const auto ns = int_list(cfg.params, "n", {8, 16, 32, 64, 128, 256});
    const double lambda_s = cfg.params.value("lambda_s", 1.0);
    const double lambda = cfg.params.value("lambda", 1.0);
    resolved["topologies"] = topologies;
    resolved["n"] = ns;
    resolved["lambda_s"] = lambda_s;
    resolved["lambda"] = lambda;

    Csv csv;
    csv.header = {"topology", "n", "replication", "metric", "value"};
    for (const auto& topo : topologies) {
        for (int n : ns) {
            GossipScenario sc;
            sc.topology = build_topology(topology_kind_from_string(topo), n, lambda_s, lambda);
            sc.mode = SimMode::timestamp;
            sc.horizon = cfg.params.value("horizon", default_horizon(n, lambda_s));
            sc.seed = cfg.base_seed;
            const auto reps = run_replications(sc, cfg.replications, cfg.jobs);
            append_aggregate_rows(csv, {topo, std::to_string(n)}, reps, false, -1);
        }
    }
    return csv;
}

Csv experiment_timestomp(const ExperimentConfig& cfg, nlohmann::json& resolved) {
    const std::string variant = cfg.params.value("variant", std::string{"node"});
    const std::string topo = cfg.params.value(
        "topology", variant == "node" ? std::string{"fully_connected"} : std::string{"fully_connected"});
    const auto ns = int_list(cfg.params, "n", {8, 16, 32, 64, 128, 256});
    const double lambda_s = cfg.params.value("lambda_s", 1.0);
    const double lambda = cfg.params.value("lambda", 1.0);
    const double p_out = cfg.params.value("p_out", 1.0);
    const double q_in = cfg.params.value("q_in", 1.0);
    const std::string target_out = cfg.params.value("target_out", std::string{"current_time"});
    const std::string target_in = cfg.params.value("target_in", std::string{"zero"});
    resolved.update({{"variant", variant}, {"topology", topo}, {"n", ns},
                     {"lambda_s", lambda_s}, {"lambda", lambda}, {"p_out", p_out},
                     {"q_in", q_in}, {"target_out", target_out}, {"target_in", target_in}});

    Csv csv;
    csv.header = {"variant", "n", "replication", "metric", "value"};
    for (int n : ns) {
        GossipScenario sc;
        sc.topology = build_topology(topology_kind_from_string(topo), n, lambda_s, lambda);
        sc.mode = SimMode::timestamp;
        sc.horizon = cfg.params.value("horizon", default_horizon(n, lambda_s));
        sc.seed = cfg.base_seed;
        AdversaryConfig adv;
        adv.kind = variant == "node" ? AdversaryKind::timestomp_node
                                     : AdversaryKind::timestomp_source_link;
        adv.infected_node = 0;
        adv.victim_node = 0;
        adv.p_out = p_out;
        adv.q_in = q_in;
        adv.target_out = target_out == "zero" ? StompTarget::zero : StompTarget::current_time;
        adv.target_in = target_in == "zero" ? StompTarget::zero : StompTarget::current_time;
        sc.adversary = adv;
        const auto reps = run_replications(sc, cfg.replications, cfg.jobs);
        append_aggregate_rows(csv, {variant, std::to_string(n)}, reps, false, 0);
    }
    return csv;
}

Csv experiment_jamming(const ExperimentConfig& cfg, nlohmann::json& resolved) {
    const std::string topo = cfg.params.value("topology", std::string{"bi_ring"});
    const auto ns = int_list(cfg.params, "n", {8, 16, 32, 64, 128, 256});
    const double lambda_s = cfg.params.value("lambda_s", 1.0);
    const double lambda = cfg.params.value("lambda", 1.0);
    const std::string strategy = cfg.params.value("strategy", std::string{"equidistant"});
    const std::string rule = cfg.params.value("njam_rule", std::string{"sqrt"});
    resolved.update({{"topology", topo}, {"n", ns}, {"lambda_s", lambda_s}, {"lambda", lambda},
                     {"strategy", strategy}, {"njam_rule", rule}});

    Csv csv;
    csv.header = {"strategy", "n", "njam", "replication", "metric", "value"};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const int n = ns[i];
        int njam;
        if (cfg.params.contains("njam")) {
            const auto list = cfg.params.at("njam").get<std::vector<int>>();
            njam = list.at(i);
        } else if (rule == "sqrt") {
            njam = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        } else if (rule == "pow75") {
            njam = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.75)));
        } else {
            throw std::invalid_argument("jamming: unknown njam_rule " + rule);
        }
        const Topology base = build_topology(topology_kind_from_string(topo), n, lambda_s, lambda);
        const auto placement =
            make_placement(placement_strategy_from_string(strategy), base, njam, cfg.base_seed);
        GossipScenario sc;
        sc.topology = apply_jammers(base, placement, cfg.params.value("renormalize", true));
        sc.mode = SimMode::timestamp;
        sc.horizon = cfg.params.value("horizon", default_horizon(n, lambda_s));
        sc.seed = cfg.base_seed;
        const auto reps = run_replications(sc, cfg.replications, cfg.jobs);
        append_aggregate_rows(csv, {strategy, std::to_string(n), std::to_string(njam)}, reps,
                              false, -1);
    }
    return csv;
}

Csv experiment_mutation(const ExperimentConfig& cfg, nlohmann::json& resolved) {
    const auto ns = int_list(cfg.params, "n", {32});
    const auto lambdas = double_list(cfg.params, "lambda", {0.1, 1.0, 10.0});
    const auto lambda_ss = double_list(cfg.params, "lambda_s", {1.0});
    const double lambda_e = cfg.params.value("lambda_e", 1.0);
    const double p_mut = cfg.params.value("p_mut", 0.3);
    const std::string topo = cfg.params.value("topology", std::string{"fully_connected"});
    resolved.update({{"n", ns}, {"lambda", lambdas}, {"lambda_s", lambda_ss},
                     {"lambda_e", lambda_e}, {"p_mut", p_mut}, {"topology", topo}});

    Csv csv;
    csv.header = {"n", "lambda_s", "lambda", "replication", "metric", "value"};
    for (int n : ns) {
        for (double ls : lambda_ss) {
            for (double lam : lambdas) {
                GossipScenario sc;
                sc.topology = build_topology(topology_kind_from_string(topo), n, ls, lam);
                sc.mode = SimMode::version;
                sc.source_version_rate = lambda_e;
                sc.horizon = cfg.params.value("horizon", default_horizon(n, ls));
                sc.seed = cfg.base_seed;
                sc.adversary.kind = AdversaryKind::mutation;
                sc.adversary.p_mut = p_mut;
                const auto reps = run_replications(sc, cfg.replications, cfg.jobs);
                append_aggregate_rows(
                    csv, {std::to_string(n), format_sig9(ls), format_sig9(lam)}, reps, true, -1);
            }
        }
    }
    return csv;
}

Csv experiment_game(const ExperimentConfig& cfg, nlohmann::json& resolved) {
    const auto cts = double_list(cfg.params, "cost_tx", {0.5, 1.0, 2.0});
    const auto cis = double_list(cfg.params, "cost_int", {0.5, 1.0, 2.0});
    const auto ks = double_list(cfg.params, "k", {0.5, 1.0, 2.0});
    const auto noises = double_list(cfg.params, "noise", {0.0});
    const auto lambdas = double_list(cfg.params, "lambda", {1.0});
    resolved.update({{"cost_tx", cts}, {"cost_int", cis}, {"k", ks}, {"noise", noises},
                     {"lambda", lambdas}});

    Csv csv;
    csv.header = {"cost_tx", "cost_int", "k", "noise", "lambda",
                  "kind",    "exists",   "p", "q",     "utility_tx", "utility_int", "method"};
    for (double ct : cts)
        for (double ci : cis)
            for (double k : ks)
                for (double noise : noises)
                    for (double lam : lambdas) {
                        GameSpec spec;
                        spec.cost_tx = ct;
                        spec.cost_int = ci;
                        spec.k = k;
                        spec.noise = noise;
                        spec.lambda = lam;
                        const EquilibriumResult sols[] = {
                            solve_ne(spec),
                            solve_se(spec, EquilibriumKind::SE_interferer_leader),
                            solve_se(spec, EquilibriumKind::SE_transmitter_leader)};
                        for (const auto& r : sols) {
                            csv.rows.push_back(
                                {format_sig9(ct), format_sig9(ci), format_sig9(k),
                                 format_sig9(noise), format_sig9(lam), to_string(r.kind),
                                 r.exists ? "1" : "0", format_sig9(r.p), format_sig9(r.q),
                                 format_sig9(r.utility_tx), format_sig9(r.utility_int),
                                 to_string(r.method)});
                        }
                    }
    return csv;
}

std::string plan_to_string(const BlockingPlan& plan) {
    std::string s;
    for (std::size_t i = 0; i < plan.action.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(plan.action[i]);
    }
    return s;
}

Csv experiment_slotted(const ExperimentConfig& cfg, nlohmann::json& resolved) {
    SlottedSpec spec;
    spec.horizon = cfg.params.value("T", 8);
    spec.n_users = cfg.params.value("N", 2);
    spec.alpha = cfg.params.value("alpha", 0.25);
    spec.variant = slotted_variant_from_string(cfg.params.value("variant", std::string{"per_user"}));
    spec.n_sub = cfg.params.value("n_sub", 2);
    spec.scheduler = scheduler_from_string(
        cfg.params.value("scheduler", std::string{"uniform_random"}));
    spec.seed = cfg.base_seed;
    const std::string plan_source = cfg.params.value("plan", std::string{"central"});
    const int victim = cfg.params.value("victim", 0);
    resolved.update({{"T", spec.horizon}, {"N", spec.n_users}, {"alpha", spec.alpha},
                     {"variant", to_string(spec.variant)}, {"n_sub", spec.n_sub},
                     {"scheduler", to_string(spec.scheduler)}, {"plan", plan_source},
                     {"victim", victim}});

    Csv csv;
    csv.header = {"plan", "value", "optimal"};
    if (plan_source == "oracle") {
        const OracleResult oracle = brute_force_oracle(spec);
        for (const auto& plan : oracle.maximizers)
            csv.rows.push_back({plan_to_string(plan), format_sig9(oracle.value), "1"});
    } else {
        BlockingPlan plan;
        if (plan_source == "central") {
            plan = central_block_plan(spec, victim);
        } else if (plan_source == "none") {
            plan.action.assign(static_cast<std::size_t>(spec.horizon), -1);
        } else {
            throw std::invalid_argument("slotted: unknown plan source " + plan_source);
        }
        const SlottedResult res = simulate_slotted(spec, plan);
        csv.rows.push_back({plan_to_string(plan), format_sig9(res.average_age), ""});
    }
    return csv;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(config.out_dir);

    nlohmann::json resolved = config.params;
    Csv csv;
    if (config.kind == "scaling") csv = experiment_scaling(config, resolved);
    else if (config.kind == "timestomp") csv = experiment_timestomp(config, resolved);
    else if (config.kind == "jamming") csv = experiment_jamming(config, resolved);
    else if (config.kind == "mutation") csv = experiment_mutation(config, resolved);
    else if (config.kind == "game") csv = experiment_game(config, resolved);
    else if (config.kind == "slotted") csv = experiment_slotted(config, resolved);
    else throw std::invalid_argument("run_experiment: unknown kind " + config.kind);

    ExperimentOutput out;
    out.csv = csv;
    out.csv_path = (std::filesystem::path(config.out_dir) / (config.kind + ".csv")).string();
    out.manifest_path = (std::filesystem::path(config.out_dir) / "manifest.json").string();
    write_csv(csv, out.csv_path);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json manifest;
    manifest["config"] = config.to_json();
    manifest["config"]["params"] = resolved;
    manifest["defaults"] = {{"warmup_fraction", 0.2},
                            {"confidence", 0.95},
                            {"horizon_heuristic", "200*max(1,sqrt(n))/lambda_s"}};
    manifest["code_version"] = "aoi-lab 0.1.0";
    manifest["wall_time_seconds"] = wall;
    std::ofstream ms(out.manifest_path, std::ios::binary);
    if (!ms) throw std::runtime_error("run_experiment: cannot write manifest");
    ms << manifest.dump(2) << "\n";
    return out;
}

namespace {

struct Series {
    std::vector<std::pair<double, double>> pts;
};

}  // namespace

void emit_plot(const std::string& csv_path, const std::string& plot_kind,
               const std::string& svg_path) {
    const Csv csv = read_csv(csv_path);
    if (csv.rows.empty()) throw std::invalid_argument("emit_plot: empty CSV");

    // column roles per plot kind
    std::string x_col, series_col, metric_filter;
    bool logx = false, logy = false, clamp_unit_y = false;
    if (plot_kind == "age_vs_n") {
        x_col = "n";
        series_col = csv.header.front();  // topology / variant / strategy
        metric_filter = "mean_age";
        logx = logy = true;
    } else if (plot_kind == "f_vs_rate") {
        x_col = "lambda";
        series_col = "n";
        metric_filter = "fraction_accurate";
        logx = true;
        clamp_unit_y = true;
    } else {
        throw std::invalid_argument("emit_plot: unknown plot kind " + plot_kind);
    }

    auto col_index = [&](const std::string& name) {
        const auto it = std::find(csv.header.begin(), csv.header.end(), name);
        if (it == csv.header.end())
            throw std::invalid_argument("emit_plot: CSV lacks column " + name);
        return static_cast<std::size_t>(it - csv.header.begin());
    };
    const std::size_t xi = col_index(x_col);
    const std::size_t si = col_index(series_col);
    const std::size_t mi = col_index("metric");
    const std::size_t vi = col_index("value");

    // average replications per (series, x)
    std::map<std::string, std::map<double, std::pair<double, int>>> agg;
    for (const auto& row : csv.rows) {
        if (row[mi] != metric_filter) continue;
        const double x = std::stod(row[xi]);
        const double v = std::stod(row[vi]);
        auto& cell = agg[row[si]][x];
        cell.first += v;
        cell.second += 1;
    }
    if (agg.empty()) throw std::invalid_argument("emit_plot: no rows match plot kind");

    std::map<std::string, Series> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [name, cells] : agg) {
        for (auto& [x, acc] : cells) {
            const double y = acc.first / acc.second;
            series[name].pts.emplace_back(x, y);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (clamp_unit_y) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    const double W = 640, H = 440, L = 70, R = 20, T = 20, B = 50;
    auto tx = [&](double x) {
        const double a = logx ? std::log(x) : x;
        const double lo = logx ? std::log(xmin) : xmin;
        const double hi = logx ? std::log(xmax) : xmax;
        return L + (a - lo) / (hi - lo) * (W - L - R);
    };
    auto ty = [&](double y) {
        const double a = logy ? std::log(y) : y;
        const double lo = logy ? std::log(ymin) : ymin;
        const double hi = logy ? std::log(ymax) : ymax;
        return H - B - (a - lo) / (hi - lo) * (H - T - B);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_col
        << (logx ? " (log)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (T + H - B) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (T + H - B) / 2 << ")\">" << metric_filter << (logy ? " (log)" : "") << "</text>\n";

    int ci = 0;
    double legend_y = T + 14;
    for (const auto& [name, s] : series) {
        const char* color = colors[ci % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.pts) svg << tx(x) << "," << ty(y) << " ";
        svg << "\"/>\n";
        for (const auto& [x, y] : s.pts)
            svg << "<circle cx=\"" << tx(x) << "\" cy=\"" << ty(y) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        svg << "<text x=\"" << W - R - 150 << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
            << color << "\">" << series_col << "=" << name << "</text>\n";
        legend_y += 16;
        ++ci;
    }
    svg << "</svg>\n";

    std::ofstream os(svg_path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_plot: cannot open " + svg_path);
    os << svg.str();
}

}  // namespace aoi
