#ifndef AOI_GAME_HPP
#define AOI_GAME_HPP

#include <string>

namespace aoi {

enum class RateModel { linear_sinr, log_sinr };

// Static transmitter-interferer game. The transmitter picks power p to keep
// the receiver fresh; the interferer picks power q to stale it. Utilities:
//   U_T = -A(p,q) - c_T * p,   U_I = +A(p,q) - c_I * q,
// with A the average peak age of the M/G/1/1 update stream.
struct GameSpec {
    double lambda = 1.0;  // packet arrival rate
    double k = 1.0;       // service rate per unit SINR
    double noise = 0.0;   // receiver noise power N
    double cost_tx = 1.0; // c_T
    double cost_int = 1.0;// c_I
    RateModel model = RateModel::linear_sinr;

    void validate() const;
};

double peak_age(double lambda, double mu);

double service_rate(double p, double q, double noise, double k,
                    RateModel model = RateModel::linear_sinr);

double utility_transmitter(const GameSpec& spec, double p, double q);
double utility_interferer(const GameSpec& spec, double p, double q);

enum class EquilibriumKind { NE, SE_interferer_leader, SE_transmitter_leader };

enum class SolveMethod { closed_form, best_response_iteration, grid_search };

std::string to_string(EquilibriumKind k);
std::string to_string(SolveMethod m);

struct EquilibriumResult {
    EquilibriumKind kind = EquilibriumKind::NE;
    bool exists = false;
    double p = 0.0;
    double q = 0.0;
    double utility_tx = 0.0;
    double utility_int = 0.0;
    SolveMethod method = SolveMethod::closed_form;
    bool converged = true;
    std::string diagnostic;
};

// N=0: closed form p* = 2/(k c_I), q* = 2 c_T/(k c_I^2). N>0: alternating
// best responses over a bounded box, with degeneracies reported rather than
// silently accepted.
EquilibriumResult solve_ne(const GameSpec& spec);

EquilibriumResult solve_se(const GameSpec& spec, EquilibriumKind leader);

struct GridOracleResult {
    bool boundary_hit = false;  // argmax on box boundary: box too small
    double p = 0.0;
    double q = 0.0;
    double value = 0.0;    // leader payoff (SE) or max unilateral regret (NE)
};

// Exhaustive verification oracle on a [0,p_max] x [0,q_max] grid.
GridOracleResult grid_oracle_ne(const GameSpec& spec, double p_max, double q_max,
                                double resolution);
GridOracleResult grid_oracle_se_interferer(const GameSpec& spec, double q_max,
                                           double resolution);

}  // namespace aoi

#endif  // AOI_GAME_HPP
