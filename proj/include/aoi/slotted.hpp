#ifndef AOI_SLOTTED_HPP
#define AOI_SLOTTED_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace aoi {

enum class SlottedVariant { per_user, sub_carrier };
enum class Scheduler { round_robin, uniform_random, max_age };

std::string to_string(SlottedVariant v);
std::string to_string(Scheduler s);
SlottedVariant slotted_variant_from_string(const std::string& s);
Scheduler scheduler_from_string(const std::string& s);

// One base station, N users, T slots, blocking budget B = floor(alpha * T).
// In the sub_carrier variant the BS additionally picks one of n_sub carriers
// uniformly at random and the adversary blocks carriers instead of users.
struct SlottedSpec {
    int horizon = 0;  // T
    int n_users = 0;  // N
    double alpha = 0.0;
    SlottedVariant variant = SlottedVariant::per_user;
    int n_sub = 1;
    Scheduler scheduler = Scheduler::uniform_random;
    std::uint64_t seed = 0;

    int budget() const { return static_cast<int>(alpha * horizon); }
    void validate() const;
};

// action[t] = -1 (none) or blocked user id / sub-carrier id for slot t+1.
struct BlockingPlan {
    std::vector<int> action;

    int blocked_count() const;
    bool feasible(const SlottedSpec& spec) const;
};

struct SlottedResult {
    double average_age = 0.0;                    // (1/(T N)) sum_t sum_u a_u(t)
    std::vector<double> per_user_average;        // time-average age per user
    bool exact = true;                           // exact expectation vs Monte Carlo
};

// Exact expected average age: DP over the joint age-vector distribution for
// uniform_random (and random carrier choice); deterministic evaluation for
// round_robin and max_age.
SlottedResult simulate_slotted(const SlottedSpec& spec, const BlockingPlan& plan);

// Seeded Monte Carlo estimate with the given number of replications.
SlottedResult simulate_slotted_mc(const SlottedSpec& spec, const BlockingPlan& plan,
                                  int replications);

// Blocks `victim` in the B consecutive central slots
// floor((T-B)/2)+1 .. floor((T-B)/2)+B (1-indexed).
BlockingPlan central_block_plan(const SlottedSpec& spec, int victim);

struct OracleResult {
    std::vector<BlockingPlan> maximizers;
    double value = 0.0;
};

// Enumerates every feasible plan and evaluates it exactly. Guarded against
// blow-up: refuses instances with more than ~1e7 candidate plans.
OracleResult brute_force_oracle(const SlottedSpec& spec);

}  // namespace aoi

#endif  // AOI_SLOTTED_HPP
