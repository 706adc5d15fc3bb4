#include "aoi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoi {

double fraction_accurate(const MetricsAccumulator& acc, int n) {
    if (n <= 0) throw std::invalid_argument("fraction_accurate: n must be positive");
    if (acc.span <= 0.0) throw std::invalid_argument("fraction_accurate: empty measurement span");
    return acc.accurate_integral / (static_cast<double>(n) * acc.span);
}

double integrate_age(const std::vector<Holding>& holdings, double span_start, double span_end) {
    if (span_end <= span_start) throw std::invalid_argument("integrate_age: empty span");
    if (holdings.empty()) throw std::invalid_argument("integrate_age: no holdings");
    if (holdings.front().start > span_start)
        throw std::invalid_argument("integrate_age: holdings do not cover span start");
    for (std::size_t i = 0; i + 1 < holdings.size(); ++i) {
        if (holdings[i + 1].start < holdings[i].start)
            throw std::invalid_argument("integrate_age: holdings out of order");
    }

    double total = 0.0;
    for (std::size_t i = 0; i < holdings.size(); ++i) {
        const double begin = std::max(holdings[i].start, span_start);
        const double end =
            std::min(i + 1 < holdings.size() ? holdings[i + 1].start : span_end, span_end);
        if (end <= begin) continue;
        const double a0 = begin - holdings[i].gen_time;
        const double d = end - begin;
        total += a0 * d + 0.5 * d * d;
    }
    return total / (span_end - span_start);
}

std::string to_string(ScalingModel m) {
    switch (m) {
        case ScalingModel::power_law: return "power_law";
        case ScalingModel::logarithmic: return "logarithmic";
        case ScalingModel::linear: return "linear";
    }
    throw std::logic_error("unreachable scaling model");
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = f.slope * x[i] + f.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_scaling: need at least 3 points");
    std::vector<double> logn, logv, val;
    double prev_n = 0.0;
    for (const auto& [n, v] : points) {
        if (n <= prev_n) throw std::invalid_argument("fit_scaling: n must be strictly increasing");
        if (v <= 0.0) throw std::invalid_argument("fit_scaling: values must be positive");
        prev_n = n;
        logn.push_back(std::log(n));
        logv.push_back(std::log(v));
        val.push_back(v);
    }

    ScalingFit fit;
    fit.points = points;

    const LineFit pw = least_squares(logn, logv);
    fit.power_exponent = pw.slope;
    fit.power_prefactor = std::exp(pw.intercept);
    fit.power_r2 = pw.r2;

    const LineFit lg = least_squares(logn, val);
    fit.log_coeff = lg.slope;
    fit.log_intercept = lg.intercept;
    fit.log_r2 = lg.r2;

    fit.selected = fit.log_r2 > fit.power_r2 ? ScalingModel::logarithmic : ScalingModel::power_law;
    return fit;
}

std::string to_string(CiVerdict v) {
    switch (v) {
        case CiVerdict::a_less: return "a_less";
        case CiVerdict::b_less: return "b_less";
        case CiVerdict::inconclusive: return "inconclusive";
    }
    throw std::logic_error("unreachable verdict");
}

SampleStats sample_stats(const std::vector<double>& samples) {
    SampleStats s;
    s.count = samples.size();
    if (samples.empty()) return s;
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double v : samples) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(samples.size() - 1));
        s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(samples.size()));
    }
    return s;
}

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("normal_quantile: p in (0,1) required");
    // Acklam's rational approximation, |relative error| < 1.15e-9.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

CiVerdict compare_with_ci(const std::vector<double>& samples_a,
                          const std::vector<double>& samples_b, double confidence) {
    if (samples_a.size() < 5 || samples_b.size() < 5)
        throw std::invalid_argument("compare_with_ci: need at least 5 samples per side");
    const SampleStats sa = sample_stats(samples_a);
    const SampleStats sb = sample_stats(samples_b);
    const double diff = sa.mean - sb.mean;
    const double se = std::sqrt(sa.stderr_mean * sa.stderr_mean + sb.stderr_mean * sb.stderr_mean);
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double lo = diff - z * se;
    const double hi = diff + z * se;
    if (hi < 0.0) return CiVerdict::a_less;
    if (lo > 0.0) return CiVerdict::b_less;
    return CiVerdict::inconclusive;
}

AgeProfile age_profile(const std::vector<std::vector<double>>& per_position_samples,
                       double confidence) {
    const std::size_t m = per_position_samples.size();
    if (m == 0) throw std::invalid_argument("age_profile: empty profile");

    // Fold positions by distance from the line center; for even m the two
    // middle positions both sit at distance 0.
    const std::size_t levels = (m + 1) / 2;
    AgeProfile prof;
    prof.mean_by_distance.assign(levels, 0.0);
    prof.stderr_by_distance.assign(levels, 0.0);

    for (std::size_t d = 0; d < levels; ++d) {
        // mirrored positions at folded distance d from the center
        const std::size_t i = (m - 1) / 2 - d;
        const std::size_t j = m / 2 + d;
        std::vector<double> merged = per_position_samples[i];
        if (j != i) {
            merged.insert(merged.end(), per_position_samples[j].begin(),
                          per_position_samples[j].end());
        }
        const SampleStats s = sample_stats(merged);
        prof.mean_by_distance[d] = s.mean;
        prof.stderr_by_distance[d] = s.stderr_mean;
    }

    const double z = normal_quantile(0.5 + confidence / 2.0);
    prof.non_decreasing_outward = true;
    for (std::size_t d = 0; d + 1 < levels; ++d) {
        const double slack = z * std::sqrt(prof.stderr_by_distance[d] * prof.stderr_by_distance[d] +
                                           prof.stderr_by_distance[d + 1] *
                                               prof.stderr_by_distance[d + 1]);
        if (prof.mean_by_distance[d + 1] < prof.mean_by_distance[d] - slack) {
            prof.non_decreasing_outward = false;
            break;
        }
    }
    return prof;
}

}  // namespace aoi
