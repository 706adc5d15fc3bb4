#include "aoi/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace aoi {

void AdversaryConfig::validate(int n) const {
    auto check_prob = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument(std::string("AdversaryConfig: ") + name + " not in [0,1]");
    };
    check_prob(p_out, "p_out");
    check_prob(q_in, "q_in");
    check_prob(p_mut, "p_mut");
    if (kind == AdversaryKind::timestomp_node && (infected_node < 0 || infected_node >= n))
        throw std::invalid_argument("AdversaryConfig: infected_node must be a user node");
    if (kind == AdversaryKind::timestomp_source_link && (victim_node < 0 || victim_node >= n))
        throw std::invalid_argument("AdversaryConfig: victim_node must be a user node");
}

void GossipScenario::validate() const {
    if (horizon <= 0.0) throw std::invalid_argument("GossipScenario: horizon must be positive");
    if (warmup_fraction < 0.0 || warmup_fraction >= 1.0)
        throw std::invalid_argument("GossipScenario: warmup_fraction must be in [0,1)");
    if (mode == SimMode::version && source_version_rate <= 0.0)
        throw std::invalid_argument("GossipScenario: version mode requires source_version_rate > 0");
    adversary.validate(topology.n);
}

double MetricsReport::mean_age() const {
    double s = 0.0;
    for (double v : node_avg_age) s += v;
    return s / static_cast<double>(node_avg_age.size());
}

double MetricsReport::mean_age_excluding(int node) const {
    double s = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < node_avg_age.size(); ++i) {
        if (static_cast<int>(i) == node) continue;
        s += node_avg_age[i];
        ++count;
    }
    return s / static_cast<double>(count);
}

double MetricsReport::median_age() const {
    std::vector<double> v = node_avg_age;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

namespace {

bool incoming_wins_timestamp(const Packet& incumbent, const Packet& incoming) {
    return incoming.marked_ts > incumbent.marked_ts;
}

bool incoming_wins_version(const Packet& incumbent, const Packet& incoming) {
    if (incoming.version != incumbent.version) return incoming.version > incumbent.version;
    return incoming.accurate && !incumbent.accurate;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Packet accept_timestamp(const Packet& incumbent, const Packet& incoming) {
    return incoming_wins_timestamp(incumbent, incoming) ? incoming : incumbent;
}

Packet accept_version(const Packet& incumbent, const Packet& incoming) {
    return incoming_wins_version(incumbent, incoming) ? incoming : incumbent;
}

Packet timestomp(Packet packet, StompDirection direction, const AdversaryConfig& config,
                 double now, std::mt19937_64& rng) {
    const double prob = direction == StompDirection::outgoing ? config.p_out : config.q_in;
    const StompTarget target =
        direction == StompDirection::outgoing ? config.target_out : config.target_in;
    if (prob > 0.0 && uniform01(rng) < prob)
        packet.marked_ts = target == StompTarget::current_time ? now : 0.0;
    return packet;
}

Packet mutate(Packet packet, double p_mut, std::mt19937_64& rng) {
    if (packet.accurate && p_mut > 0.0 && uniform01(rng) < p_mut) packet.accurate = false;
    return packet;
}

EventSampler::EventSampler(const Topology& topology, SimMode mode, double source_version_rate) {
    double cum = 0.0;
    auto push = [&](const Event& e, double rate) {
        if (rate <= 0.0) return;
        cum += rate;
        cum_.push_back(cum);
        flat_.push_back(e);
    };
    for (int i = 0; i < topology.n; ++i)
        push(Event{EventKind::source_to_user, -1, i}, topology.source_rates[static_cast<std::size_t>(i)]);
    for (const Edge& e : topology.edges)
        push(Event{EventKind::user_to_user, e.from, e.to}, e.rate);
    if (mode == SimMode::version) {
        source_self_rate_ = source_version_rate;
        push(Event{EventKind::source_self_update, -1, -1}, source_version_rate);
    }
    total_rate_ = cum;
    if (!std::isfinite(total_rate_))
        throw std::invalid_argument("EventSampler: total event rate must be finite");
}

std::optional<std::pair<double, Event>> EventSampler::sample_next_event(
    std::mt19937_64& rng) const {
    if (total_rate_ <= 0.0) return std::nullopt;
    double u = uniform01(rng);
    const double dt = -std::log1p(-u) / total_rate_;
    const double pick = uniform01(rng) * total_rate_;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), pick);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cum_.begin()), flat_.size() - 1);
    return std::make_pair(dt, flat_[idx]);
}

namespace {

double window_overlap(const SimState& s, double a, double b) {
    return std::max(0.0, std::min(b, s.horizon) - std::max(a, s.window_start));
}

void flush_node(SimState& s, int i, double t) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double b = std::max(s.last_change[k], s.window_start);
    const double e = std::min(t, s.horizon);
    if (e > b) {
        const double a0 = b - s.node_packet[k].true_gen_time;
        const double d = e - b;
        s.metrics.age_integral[k] += a0 * d + 0.5 * d * d;
        s.node_version_integral[k] += static_cast<double>(s.node_packet[k].version) * d;
    }
    s.last_change[k] = t;
}

void flush_source(SimState& s, double t) {
    s.source_version_integral +=
        static_cast<double>(s.source_version) * window_overlap(s, s.source_last_change, t);
    s.source_last_change = t;
}

void flush_accuracy(SimState& s, double t) {
    s.metrics.accurate_integral +=
        static_cast<double>(s.accurate_count) * window_overlap(s, s.last_acc_flush, t);
    s.last_acc_flush = t;
}

}  // namespace

void apply_event(SimState& state, const Event& event, const GossipScenario& scenario,
                 std::mt19937_64& rng, const TraceSink* sink) {
    const AdversaryConfig& adv = scenario.adversary;
    const double now = state.now;

    flush_accuracy(state, now);

    if (event.kind == EventKind::source_self_update) {
        flush_source(state, now);
        ++state.source_version;
        return;
    }

    const int receiver = event.to;
    const std::size_t rk = static_cast<std::size_t>(receiver);
    Packet offered;

    if (event.kind == EventKind::source_to_user) {
        // The source always transmits a current, accurate sample.
        offered = Packet{now, now, state.source_version, true};
        // An infected node's incoming rewrite targets gossip only; source
        // deliveries reach it untouched, so its copy still renews. The
        // link interceptor, by contrast, sits on this very link.
        const bool intercepted = adv.kind == AdversaryKind::timestomp_source_link &&
                                 receiver == adv.victim_node;
        if (intercepted)
            offered = timestomp(offered, StompDirection::incoming, adv, now, rng);
    } else {
        offered = state.node_packet[static_cast<std::size_t>(event.from)];
        if (adv.kind == AdversaryKind::timestomp_node && event.from == adv.infected_node)
            offered = timestomp(offered, StompDirection::outgoing, adv, now, rng);
        if (scenario.mode == SimMode::version && adv.kind == AdversaryKind::mutation)
            offered = mutate(offered, adv.p_mut, rng);
        if (adv.kind == AdversaryKind::timestomp_node && receiver == adv.infected_node)
            offered = timestomp(offered, StompDirection::incoming, adv, now, rng);
    }

    const Packet& incumbent = state.node_packet[rk];
    const bool wins = scenario.mode == SimMode::timestamp
                          ? incoming_wins_timestamp(incumbent, offered)
                          : incoming_wins_version(incumbent, offered);

    if (sink) {
        TraceRecord rec;
        rec.time = now;
        rec.event = event;
        rec.offered = offered;
        rec.pre = incumbent;
        rec.post = wins ? offered : incumbent;
        rec.accepted = wins;
        (*sink)(rec);
    }

    if (wins) {
        const bool was_accurate = incumbent.accurate;
        flush_node(state, receiver, now);
        if (was_accurate != offered.accurate) state.accurate_count += offered.accurate ? 1 : -1;
        state.node_packet[rk] = offered;
    }
}

MetricsReport run(const GossipScenario& scenario, const TraceSink* sink) {
    scenario.validate();
    const int n = scenario.topology.n;
    const double horizon = scenario.horizon;
    const double window_start = scenario.warmup_fraction * horizon;

    SimState state;
    state.now = 0.0;
    state.node_packet.assign(static_cast<std::size_t>(n), Packet{0.0, 0.0, 0, true});
    state.source_version = 0;
    state.metrics.init(n);
    state.window_start = window_start;
    state.horizon = horizon;
    state.last_change.assign(static_cast<std::size_t>(n), 0.0);
    state.node_version_integral.assign(static_cast<std::size_t>(n), 0.0);
    state.accurate_count = n;

    EventSampler sampler(scenario.topology, scenario.mode, scenario.source_version_rate);
    std::mt19937_64 rng(scenario.seed);

    while (true) {
        auto next = sampler.sample_next_event(rng);
        if (!next) break;  // zero total rate: degenerate run, ages grow linearly
        const double t_next = state.now + next->first;
        if (t_next >= horizon) break;
        state.now = t_next;
        apply_event(state, next->second, scenario, rng, sink);
    }

    // final flush to the horizon
    state.now = horizon;
    flush_accuracy(state, horizon);
    flush_source(state, horizon);
    for (int i = 0; i < n; ++i) flush_node(state, i, horizon);

    const double span = horizon - window_start;
    state.metrics.span = span;

    MetricsReport report;
    report.span = span;
    report.node_avg_age.resize(static_cast<std::size_t>(n));
    report.node_avg_version_age.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        report.node_avg_age[k] = state.metrics.age_integral[k] / span;
        state.metrics.version_age_integral[k] =
            state.source_version_integral - state.node_version_integral[k];
        report.node_avg_version_age[k] = state.metrics.version_age_integral[k] / span;
    }
    report.fraction_accurate =
        scenario.mode == SimMode::version ? fraction_accurate(state.metrics, n) : 1.0;
    return report;
}

std::string trace_to_ndjson(const TraceRecord& rec) {
    nlohmann::json j;
    j["t"] = rec.time;
    switch (rec.event.kind) {
        case EventKind::source_to_user: j["edge"] = {"source", rec.event.to}; break;
        case EventKind::user_to_user: j["edge"] = {rec.event.from, rec.event.to}; break;
        case EventKind::source_self_update: j["edge"] = "source_self_update"; break;
        case EventKind::none: j["edge"] = nullptr; break;
    }
    auto pack = [](const Packet& p) {
        return nlohmann::json{{"gen", p.true_gen_time},
                              {"marked", p.marked_ts},
                              {"version", p.version},
                              {"accurate", p.accurate}};
    };
    j["offered"] = pack(rec.offered);
    j["pre"] = pack(rec.pre);
    j["post"] = pack(rec.post);
    j["accepted"] = rec.accepted;
    return j.dump();
}

}  // namespace aoi
