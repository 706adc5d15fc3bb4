#include "aoi/slotted.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace aoi {

std::string to_string(SlottedVariant v) {
    return v == SlottedVariant::per_user ? "per_user" : "sub_carrier";
}

std::string to_string(Scheduler s) {
    switch (s) {
        case Scheduler::round_robin: return "round_robin";
        case Scheduler::uniform_random: return "uniform_random";
        case Scheduler::max_age: return "max_age";
    }
    throw std::logic_error("unreachable scheduler");
}

SlottedVariant slotted_variant_from_string(const std::string& s) {
    if (s == "per_user") return SlottedVariant::per_user;
    if (s == "sub_carrier") return SlottedVariant::sub_carrier;
    throw std::invalid_argument("unknown slotted variant: " + s);
}

Scheduler scheduler_from_string(const std::string& s) {
    if (s == "round_robin") return Scheduler::round_robin;
    if (s == "uniform_random") return Scheduler::uniform_random;
    if (s == "max_age") return Scheduler::max_age;
    throw std::invalid_argument("unknown scheduler: " + s);
}

void SlottedSpec::validate() const {
    if (horizon < 1) throw std::invalid_argument("SlottedSpec: horizon must be >= 1");
    if (n_users < 1) throw std::invalid_argument("SlottedSpec: n_users must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("SlottedSpec: alpha in [0,1]");
    if (variant == SlottedVariant::sub_carrier && n_sub < 1)
        throw std::invalid_argument("SlottedSpec: n_sub must be >= 1");
}

int BlockingPlan::blocked_count() const {
    int c = 0;
    for (int a : action)
        if (a >= 0) ++c;
    return c;
}

bool BlockingPlan::feasible(const SlottedSpec& spec) const {
    if (static_cast<int>(action.size()) != spec.horizon) return false;
    const int limit = spec.variant == SlottedVariant::per_user ? spec.n_users : spec.n_sub;
    for (int a : action)
        if (a < -1 || a >= limit) return false;
    return blocked_count() <= spec.budget();
}

namespace {

// Probability that user u's transmission succeeds in slot t (1-indexed),
// marginalized over scheduler and carrier randomness. Success events for a
// fixed user are independent across slots, so expected ages follow from a
// last-success-slot recursion; the overall average age is linear in per-user
// ages, so marginals suffice for an exact expectation.
double success_prob(const SlottedSpec& spec, const BlockingPlan& plan, int slot, int user) {
    const int act = plan.action[static_cast<std::size_t>(slot - 1)];
    double p_sched;
    if (spec.scheduler == Scheduler::round_robin)
        p_sched = (slot - 1) % spec.n_users == user ? 1.0 : 0.0;
    else
        p_sched = 1.0 / static_cast<double>(spec.n_users);

    if (spec.variant == SlottedVariant::per_user)
        return act == user ? 0.0 : p_sched;
    const double p_carrier =
        act < 0 ? 1.0 : static_cast<double>(spec.n_sub - 1) / static_cast<double>(spec.n_sub);
    return p_sched * p_carrier;
}

SlottedResult evaluate_marginal(const SlottedSpec& spec, const BlockingPlan& plan) {
    const int T = spec.horizon;
    const int N = spec.n_users;
    SlottedResult res;
    res.exact = true;
    res.per_user_average.assign(static_cast<std::size_t>(N), 0.0);

    for (int u = 0; u < N; ++u) {
        // P(no success in slots s+1..t) evolves slot by slot; track the
        // distribution of the last success slot (0 = never).
        std::vector<double> last(static_cast<std::size_t>(T) + 1, 0.0);
        last[0] = 1.0;
        double sum_ages = 0.0;
        for (int t = 1; t <= T; ++t) {
            const double p = success_prob(spec, plan, t, u);
            for (int s = 0; s < t; ++s) last[static_cast<std::size_t>(s)] *= 1.0 - p;
            last[static_cast<std::size_t>(t)] = p;
            // a_u(t) = t - s + 1 with s the last success slot (s = 0 -> t + 1)
            for (int s = 0; s <= t; ++s)
                sum_ages += last[static_cast<std::size_t>(s)] * static_cast<double>(t - s + 1);
        }
        res.per_user_average[static_cast<std::size_t>(u)] = sum_ages / static_cast<double>(T);
    }
    double total = 0.0;
    for (double v : res.per_user_average) total += v;
    res.average_age = total / static_cast<double>(N);
    return res;
}

SlottedResult evaluate_max_age_deterministic(const SlottedSpec& spec, const BlockingPlan& plan) {
    const int T = spec.horizon;
    const int N = spec.n_users;
    std::vector<int> age(static_cast<std::size_t>(N), 1);
    SlottedResult res;
    res.exact = true;
    res.per_user_average.assign(static_cast<std::size_t>(N), 0.0);
    for (int t = 1; t <= T; ++t) {
        // pick the user with the largest current age; ties go to the lowest id
        int pick = 0;
        for (int u = 1; u < N; ++u)
            if (age[static_cast<std::size_t>(u)] > age[static_cast<std::size_t>(pick)]) pick = u;
        const int act = plan.action[static_cast<std::size_t>(t - 1)];
        const bool success = act != pick;
        for (int u = 0; u < N; ++u) ++age[static_cast<std::size_t>(u)];
        if (success) age[static_cast<std::size_t>(pick)] = 1;
        for (int u = 0; u < N; ++u)
            res.per_user_average[static_cast<std::size_t>(u)] +=
                static_cast<double>(age[static_cast<std::size_t>(u)]);
    }
    double total = 0.0;
    for (double& v : res.per_user_average) {
        v /= static_cast<double>(T);
        total += v;
    }
    res.average_age = total / static_cast<double>(N);
    return res;
}

// Joint DP over the age-vector distribution; needed only when the scheduler's
// decisions depend on a random state (max_age with random carrier outcomes).
SlottedResult evaluate_joint_dp(const SlottedSpec& spec, const BlockingPlan& plan) {
    const int T = spec.horizon;
    const int N = spec.n_users;
    if (N > 8 || T > 30)
        throw std::invalid_argument("simulate_slotted: joint DP instance too large");
    std::map<std::vector<int>, double> dist;
    dist[std::vector<int>(static_cast<std::size_t>(N), 1)] = 1.0;
    std::vector<double> exp_sum_per_user(static_cast<std::size_t>(N), 0.0);

    for (int t = 1; t <= T; ++t) {
        const int act = plan.action[static_cast<std::size_t>(t - 1)];
        std::map<std::vector<int>, double> next;
        for (const auto& [ages, pr] : dist) {
            int pick = 0;
            for (int u = 1; u < N; ++u)
                if (ages[static_cast<std::size_t>(u)] > ages[static_cast<std::size_t>(pick)])
                    pick = u;
            double p_success = 1.0;
            if (spec.variant == SlottedVariant::per_user) {
                p_success = act == pick ? 0.0 : 1.0;
            } else if (act >= 0) {
                p_success = static_cast<double>(spec.n_sub - 1) / static_cast<double>(spec.n_sub);
            }
            std::vector<int> grown = ages;
            for (int& a : grown) ++a;
            if (p_success > 0.0) {
                std::vector<int> succ = grown;
                succ[static_cast<std::size_t>(pick)] = 1;
                next[succ] += pr * p_success;
            }
            if (p_success < 1.0) next[grown] += pr * (1.0 - p_success);
        }
        dist = std::move(next);
        for (const auto& [ages, pr] : dist)
            for (int u = 0; u < N; ++u)
                exp_sum_per_user[static_cast<std::size_t>(u)] +=
                    pr * static_cast<double>(ages[static_cast<std::size_t>(u)]);
    }

    SlottedResult res;
    res.exact = true;
    res.per_user_average.assign(static_cast<std::size_t>(N), 0.0);
    double total = 0.0;
    for (int u = 0; u < N; ++u) {
        res.per_user_average[static_cast<std::size_t>(u)] =
            exp_sum_per_user[static_cast<std::size_t>(u)] / static_cast<double>(T);
        total += res.per_user_average[static_cast<std::size_t>(u)];
    }
    res.average_age = total / static_cast<double>(N);
    return res;
}

}  // namespace

SlottedResult simulate_slotted(const SlottedSpec& spec, const BlockingPlan& plan) {
    spec.validate();
    if (!plan.feasible(spec)) throw std::invalid_argument("simulate_slotted: infeasible plan");
    if (spec.scheduler == Scheduler::max_age) {
        if (spec.variant == SlottedVariant::per_user)
            return evaluate_max_age_deterministic(spec, plan);
        return evaluate_joint_dp(spec, plan);
    }
    return evaluate_marginal(spec, plan);
}

SlottedResult simulate_slotted_mc(const SlottedSpec& spec, const BlockingPlan& plan,
                                  int replications) {
    spec.validate();
    if (!plan.feasible(spec)) throw std::invalid_argument("simulate_slotted_mc: infeasible plan");
    if (replications < 1) throw std::invalid_argument("simulate_slotted_mc: replications >= 1");
    const int T = spec.horizon;
    const int N = spec.n_users;
    std::mt19937_64 rng(spec.seed);
    auto draw = [&rng](int m) { return static_cast<int>(rng() % static_cast<std::uint64_t>(m)); };

    SlottedResult res;
    res.exact = false;
    res.per_user_average.assign(static_cast<std::size_t>(N), 0.0);
    std::vector<int> age(static_cast<std::size_t>(N));
    for (int rep = 0; rep < replications; ++rep) {
        std::fill(age.begin(), age.end(), 1);
        for (int t = 1; t <= T; ++t) {
            int pick;
            switch (spec.scheduler) {
                case Scheduler::round_robin: pick = (t - 1) % N; break;
                case Scheduler::uniform_random: pick = draw(N); break;
                case Scheduler::max_age:
                    pick = 0;
                    for (int u = 1; u < N; ++u)
                        if (age[static_cast<std::size_t>(u)] > age[static_cast<std::size_t>(pick)])
                            pick = u;
                    break;
            }
            const int act = plan.action[static_cast<std::size_t>(t - 1)];
            bool success;
            if (spec.variant == SlottedVariant::per_user) {
                success = act != pick;
            } else {
                const int carrier = draw(spec.n_sub);
                success = act != carrier;
            }
            for (int u = 0; u < N; ++u) ++age[static_cast<std::size_t>(u)];
            if (success) age[static_cast<std::size_t>(pick)] = 1;
            for (int u = 0; u < N; ++u)
                res.per_user_average[static_cast<std::size_t>(u)] +=
                    static_cast<double>(age[static_cast<std::size_t>(u)]);
        }
    }
    double total = 0.0;
    for (double& v : res.per_user_average) {
        v /= static_cast<double>(T) * replications;
        total += v;
    }
    res.average_age = total / static_cast<double>(N);
    return res;
}

BlockingPlan central_block_plan(const SlottedSpec& spec, int victim) {
    spec.validate();
    const int limit = spec.variant == SlottedVariant::per_user ? spec.n_users : spec.n_sub;
    if (victim < 0 || victim >= limit)
        throw std::invalid_argument("central_block_plan: invalid victim");
    const int B = spec.budget();
    const int first = (spec.horizon - B) / 2 + 1;  // 1-indexed
    BlockingPlan plan;
    plan.action.assign(static_cast<std::size_t>(spec.horizon), -1);
    for (int t = first; t < first + B; ++t) plan.action[static_cast<std::size_t>(t - 1)] = victim;
    return plan;
}

OracleResult brute_force_oracle(const SlottedSpec& spec) {
    spec.validate();
    const int T = spec.horizon;
    const int A = spec.variant == SlottedVariant::per_user ? spec.n_users : spec.n_sub;
    const int B = spec.budget();

    double candidates = 1.0;
    for (int t = 0; t < T; ++t) candidates *= static_cast<double>(A) + 1.0;
    if (candidates > 1e7)
        throw std::invalid_argument("brute_force_oracle: instance too large to enumerate");

    OracleResult out;
    out.value = -1.0;
    BlockingPlan plan;
    plan.action.assign(static_cast<std::size_t>(T), -1);

    // depth-first enumeration with budget pruning
    const double tie_tol = 1e-12;
    auto recurse = [&](auto&& self, int slot, int used) -> void {
        if (slot == T) {
            const double v = simulate_slotted(spec, plan).average_age;
            if (v > out.value + tie_tol) {
                out.value = v;
                out.maximizers.clear();
                out.maximizers.push_back(plan);
            } else if (v >= out.value - tie_tol) {
                out.maximizers.push_back(plan);
            }
            return;
        }
        plan.action[static_cast<std::size_t>(slot)] = -1;
        self(self, slot + 1, used);
        if (used < B) {
            for (int a = 0; a < A; ++a) {
                plan.action[static_cast<std::size_t>(slot)] = a;
                self(self, slot + 1, used + 1);
            }
            plan.action[static_cast<std::size_t>(slot)] = -1;
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

}  // namespace aoi
