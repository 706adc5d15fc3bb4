#ifndef AOI_METRICS_HPP
#define AOI_METRICS_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace aoi {

// Exact time-integrals collected during a run, measured over
// [warmup_fraction * horizon, horizon].
struct MetricsAccumulator {
    std::vector<double> age_integral;          // per node, seconds^2
    std::vector<double> version_age_integral;  // per node
    double accurate_integral = 0.0;            // node-seconds
    double span = 0.0;                         // seconds

    void init(int n) {
        age_integral.assign(static_cast<std::size_t>(n), 0.0);
        version_age_integral.assign(static_cast<std::size_t>(n), 0.0);
        accurate_integral = 0.0;
        span = 0.0;
    }
};

// F = time-average fraction of user nodes holding accurate information.
double fraction_accurate(const MetricsAccumulator& acc, int n);

// One holding interval of the age sawtooth: from `start` the node holds a
// packet generated at `gen_time` until the next holding starts.
struct Holding {
    double start = 0.0;
    double gen_time = 0.0;
};

// Exact time-average of age over [span_start, span_end]; holdings must cover
// the span contiguously (the last holding extends to span_end).
double integrate_age(const std::vector<Holding>& holdings, double span_start, double span_end);

enum class ScalingModel { power_law, logarithmic, linear };

std::string to_string(ScalingModel m);

struct ScalingFit {
    ScalingModel selected = ScalingModel::power_law;
    double power_exponent = 0.0;
    double power_prefactor = 0.0;
    double power_r2 = 0.0;
    double log_coeff = 0.0;
    double log_intercept = 0.0;
    double log_r2 = 0.0;
    std::vector<std::pair<double, double>> points;  // (n, value)
};

// Least-squares power law on (log n, log value) and logarithmic model
// value = c*log(n) + d; the better R^2 wins the `selected` tag.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

enum class CiVerdict { a_less, b_less, inconclusive };

std::string to_string(CiVerdict v);

// Two-sided normal-approximation interval on mean(a) - mean(b).
CiVerdict compare_with_ci(const std::vector<double>& samples_a,
                          const std::vector<double>& samples_b, double confidence = 0.95);

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;
    double stderr_mean = 0.0;
    std::size_t count = 0;
};

SampleStats sample_stats(const std::vector<double>& samples);

double normal_quantile(double p);  // inverse standard normal CDF

struct AgeProfile {
    // index = distance from the line center (0 = center); mirrored positions
    // are averaged together.
    std::vector<double> mean_by_distance;
    std::vector<double> stderr_by_distance;
    bool non_decreasing_outward = false;
};

// per_position_samples[i] holds one time-average age per replication for line
// position i (0..m-1 along the line). Verdict allows CI slack on each
// adjacent folded pair.
AgeProfile age_profile(const std::vector<std::vector<double>>& per_position_samples,
                       double confidence = 0.95);

}  // namespace aoi

#endif  // AOI_METRICS_HPP
