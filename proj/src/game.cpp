#include "aoi/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace aoi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void GameSpec::validate() const {
    if (lambda <= 0.0) throw std::invalid_argument("GameSpec: lambda must be > 0");
    if (k <= 0.0) throw std::invalid_argument("GameSpec: k must be > 0");
    if (noise < 0.0) throw std::invalid_argument("GameSpec: noise must be >= 0");
    if (cost_tx <= 0.0 || cost_int <= 0.0)
        throw std::invalid_argument("GameSpec: power costs must be > 0");
}

double peak_age(double lambda, double mu) {
    if (lambda <= 0.0 || mu <= 0.0)
        throw std::invalid_argument("peak_age: lambda and mu must be > 0");
    return 1.0 / lambda + 2.0 / mu;
}

double service_rate(double p, double q, double noise, double k, RateModel model) {
    if (p < 0.0) throw std::invalid_argument("service_rate: p must be >= 0");
    if (q + noise <= 0.0) {
        if (p > 0.0)
            throw std::invalid_argument("service_rate: infinite SINR (q + noise = 0 with p > 0)");
        return 0.0;
    }
    const double sinr = p / (q + noise);
    return model == RateModel::linear_sinr ? k * sinr : k * std::log1p(sinr);
}

namespace {

// Peak age as a function of the players' powers, extended by continuity to the
// infinite-SINR corner: service is instantaneous there, so only the sampling
// delay 1/lambda remains.
double peak_age_at(const GameSpec& spec, double p, double q) {
    if (q + spec.noise <= 0.0 && p > 0.0) return 1.0 / spec.lambda;
    const double mu = service_rate(p, q, spec.noise, spec.k, spec.model);
    return mu > 0.0 ? peak_age(spec.lambda, mu) : kInf;
}

}  // namespace

double utility_transmitter(const GameSpec& spec, double p, double q) {
    const double age = peak_age_at(spec, p, q);
    if (std::isinf(age)) return -kInf;
    return -age - spec.cost_tx * p;
}

double utility_interferer(const GameSpec& spec, double p, double q) {
    return peak_age_at(spec, p, q) - spec.cost_int * q;
}

std::string to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::NE: return "NE";
        case EquilibriumKind::SE_interferer_leader: return "SE_interferer_leader";
        case EquilibriumKind::SE_transmitter_leader: return "SE_transmitter_leader";
    }
    throw std::logic_error("unreachable equilibrium kind");
}

std::string to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::closed_form: return "closed_form";
        case SolveMethod::best_response_iteration: return "best_response_iteration";
        case SolveMethod::grid_search: return "grid_search";
    }
    throw std::logic_error("unreachable solve method");
}

namespace {

// Golden-section maximization on [lo, hi]; assumes unimodality, which holds
// for the utilities in play (or degenerates to a boundary point, which the
// callers detect).
template <typename F>
double golden_max(F f, double lo, double hi, double tol = 1e-12) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double tx_best_response(const GameSpec& spec, double q, double p_max) {
    if (spec.model == RateModel::linear_sinr)
        return std::sqrt(2.0 * (q + spec.noise) / (spec.k * spec.cost_tx));
    return golden_max([&](double p) { return utility_transmitter(spec, p, q); }, 0.0, p_max);
}

double int_best_response(const GameSpec& spec, double p, double q_max) {
    return golden_max([&](double q) { return utility_interferer(spec, p, q); }, 0.0, q_max);
}

void fill_utilities(const GameSpec& spec, EquilibriumResult& r) {
    r.utility_tx = utility_transmitter(spec, r.p, r.q);
    r.utility_int = utility_interferer(spec, r.p, r.q);
}

}  // namespace

EquilibriumResult solve_ne(const GameSpec& spec) {
    spec.validate();
    EquilibriumResult r;
    r.kind = EquilibriumKind::NE;

    if (spec.noise == 0.0 && spec.model == RateModel::linear_sinr) {
        r.method = SolveMethod::closed_form;
        r.p = 2.0 / (spec.k * spec.cost_int);
        r.q = 2.0 * spec.cost_tx / (spec.k * spec.cost_int * spec.cost_int);
        r.exists = true;
        fill_utilities(spec, r);
        return r;
    }

    r.method = SolveMethod::best_response_iteration;
    const double p_box = 20.0 * (1.0 + 2.0 / (spec.k * spec.cost_int));
    const double q_box = 20.0 * (1.0 + 2.0 * spec.cost_tx / (spec.k * spec.cost_int * spec.cost_int));
    double p = 1.0, q = 1.0;
    const int max_iter = 10000;
    const double tol = 1e-10;
    for (int it = 0; it < max_iter; ++it) {
        const double p_next = tx_best_response(spec, q, p_box);
        const double q_next = int_best_response(spec, p_next, q_box);
        const double delta = std::abs(p_next - p) + std::abs(q_next - q);
        p = p_next;
        q = q_next;
        if (delta < tol) {
            r.p = p;
            r.q = q;
            r.exists = true;
            r.converged = true;
            if (q > q_box * (1.0 - 1e-6) || p > p_box * (1.0 - 1e-6)) {
                r.exists = false;
                r.diagnostic = "best response pinned to search box boundary";
            }
            fill_utilities(spec, r);
            return r;
        }
    }
    r.converged = false;
    r.exists = false;
    r.p = p;
    r.q = q;
    r.diagnostic = "best-response iteration did not converge";
    fill_utilities(spec, r);
    return r;
}

EquilibriumResult solve_se(const GameSpec& spec, EquilibriumKind leader) {
    spec.validate();
    EquilibriumResult r;
    r.kind = leader;

    if (leader == EquilibriumKind::SE_transmitter_leader) {
        if (spec.model == RateModel::linear_sinr) {
            // U_I is affine in q for any fixed p, so the follower's best
            // response is degenerate (0 or unbounded): no SE.
            r.method = SolveMethod::closed_form;
            r.exists = false;
            r.diagnostic = "interferer best-response correspondence is degenerate";
            return r;
        }
        r.method = SolveMethod::best_response_iteration;
        r.exists = false;
        r.diagnostic = "transmitter-leader SE not supported for log_sinr model";
        return r;
    }

    if (leader != EquilibriumKind::SE_interferer_leader)
        throw std::invalid_argument("solve_se: leader must be a SE kind");

    if (spec.noise == 0.0 && spec.model == RateModel::linear_sinr) {
        r.method = SolveMethod::closed_form;
        r.q = spec.cost_tx / (2.0 * spec.k * spec.cost_int * spec.cost_int);
        r.p = 1.0 / (spec.k * spec.cost_int);
        r.exists = true;
        fill_utilities(spec, r);
        return r;
    }

    r.method = SolveMethod::best_response_iteration;
    const double q_box = 20.0 * (1.0 + spec.cost_tx / (spec.k * spec.cost_int * spec.cost_int));
    const double p_box = 20.0 * (1.0 + 1.0 / (spec.k * spec.cost_int));
    auto leader_payoff = [&](double q) {
        const double p = tx_best_response(spec, q, p_box);
        return utility_interferer(spec, p, q);
    };
    r.q = golden_max(leader_payoff, 0.0, q_box);
    r.p = tx_best_response(spec, r.q, p_box);
    r.exists = true;
    if (r.q > q_box * (1.0 - 1e-6)) {
        r.exists = false;
        r.diagnostic = "leader optimum pinned to search box boundary";
    }
    fill_utilities(spec, r);
    return r;
}

GridOracleResult grid_oracle_ne(const GameSpec& spec, double p_max, double q_max,
                                double resolution) {
    spec.validate();
    if (resolution <= 0.0 || p_max <= 0.0 || q_max <= 0.0)
        throw std::invalid_argument("grid_oracle_ne: bad search box");
    const int np = static_cast<int>(std::round(p_max / resolution)) + 1;
    const int nq = static_cast<int>(std::round(q_max / resolution)) + 1;

    // best unilateral responses along each axis
    std::vector<double> best_ut_given_q(static_cast<std::size_t>(nq), -kInf);
    std::vector<double> best_ui_given_p(static_cast<std::size_t>(np), -kInf);
    for (int i = 0; i < np; ++i) {
        const double p = i * resolution;
        for (int j = 0; j < nq; ++j) {
            const double q = j * resolution;
            const double ut = utility_transmitter(spec, p, q);
            const double ui = utility_interferer(spec, p, q);
            best_ut_given_q[static_cast<std::size_t>(j)] =
                std::max(best_ut_given_q[static_cast<std::size_t>(j)], ut);
            best_ui_given_p[static_cast<std::size_t>(i)] =
                std::max(best_ui_given_p[static_cast<std::size_t>(i)], ui);
        }
    }

    GridOracleResult res;
    double best_regret = kInf;
    int best_i = 0, best_j = 0;
    for (int i = 0; i < np; ++i) {
        const double p = i * resolution;
        for (int j = 0; j < nq; ++j) {
            const double q = j * resolution;
            const double ut = utility_transmitter(spec, p, q);
            const double ui = utility_interferer(spec, p, q);
            const double regret = std::max(best_ut_given_q[static_cast<std::size_t>(j)] - ut,
                                           best_ui_given_p[static_cast<std::size_t>(i)] - ui);
            if (regret < best_regret) {
                best_regret = regret;
                best_i = i;
                best_j = j;
            }
        }
    }
    res.p = best_i * resolution;
    res.q = best_j * resolution;
    res.value = best_regret;
    res.boundary_hit = best_i == 0 || best_i == np - 1 || best_j == 0 || best_j == nq - 1;
    return res;
}

GridOracleResult grid_oracle_se_interferer(const GameSpec& spec, double q_max,
                                           double resolution) {
    spec.validate();
    if (resolution <= 0.0 || q_max <= 0.0)
        throw std::invalid_argument("grid_oracle_se_interferer: bad search box");
    const int nq = static_cast<int>(std::round(q_max / resolution)) + 1;
    const double p_box = 20.0 * (1.0 + 1.0 / (spec.k * spec.cost_int));

    GridOracleResult res;
    double best = -kInf;
    int best_j = 0;
    for (int j = 0; j < nq; ++j) {
        const double q = j * resolution;
        const double p = tx_best_response(spec, q, p_box);
        // q + N = 0 is a limit point: the follower sends vanishing power at
        // infinite SINR, so the leader sees a peak age of exactly 1/lambda.
        const double ui = q + spec.noise <= 0.0 ? 1.0 / spec.lambda
                                                : utility_interferer(spec, p, q);
        if (ui > best) {
            best = ui;
            best_j = j;
        }
    }
    res.q = best_j * resolution;
    res.p = tx_best_response(spec, res.q, p_box);
    res.value = best;
    res.boundary_hit = best_j == nq - 1;
    return res;
}

}  // namespace aoi
