#ifndef AOI_EXPERIMENT_HPP
#define AOI_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoi/gossip.hpp"

namespace aoi {

// Horizon heuristic used by every sweep unless overridden.
double default_horizon(int n, double lambda_s);

// Independent replications of one scenario; replication r runs with
// seed = base.seed ^ r. Results are ordered by replication index regardless
// of completion order.
std::vector<MetricsReport> run_replications(const GossipScenario& base, int replications,
                                            int jobs = 1);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Fixed 9-significant-digit formatting for golden files.
std::string format_sig9(double v);

void write_csv(const Csv& csv, const std::string& path);
Csv read_csv(const std::string& path);

struct ExperimentConfig {
    std::string kind;  // scaling | timestomp | jamming | mutation | game | slotted
    nlohmann::json params = nlohmann::json::object();
    int replications = 1;
    std::uint64_t base_seed = 1;
    std::string out_dir = ".";
    int jobs = 1;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct ExperimentOutput {
    std::string csv_path;
    std::string manifest_path;
    Csv csv;
};

// Runs the full grid x replications, writes <kind>.csv and manifest.json into
// out_dir. Identical configs produce byte-identical CSV files.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// Self-contained SVG line chart from a results CSV.
// plot kinds: age_vs_n (log-log), f_vs_rate (log-x, linear y in [0,1]).
void emit_plot(const std::string& csv_path, const std::string& plot_kind,
               const std::string& svg_path);

}  // namespace aoi

#endif  // AOI_EXPERIMENT_HPP
