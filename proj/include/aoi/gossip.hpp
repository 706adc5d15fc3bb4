#ifndef AOI_GOSSIP_HPP
#define AOI_GOSSIP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "aoi/metrics.hpp"
#include "aoi/net_model.hpp"

namespace aoi {

enum class SimMode { timestamp, version };

enum class AdversaryKind { none, timestomp_node, timestomp_source_link, mutation };

enum class StompTarget { current_time, zero };

struct AdversaryConfig {
    AdversaryKind kind = AdversaryKind::none;
    int infected_node = -1;  // timestomp_node
    int victim_node = -1;    // timestomp_source_link
    double p_out = 0.0;
    StompTarget target_out = StompTarget::current_time;
    double q_in = 0.0;
    StompTarget target_in = StompTarget::zero;
    double p_mut = 0.0;  // mutation, per user-to-user transfer

    void validate(int n) const;
};

struct GossipScenario {
    Topology topology;
    SimMode mode = SimMode::timestamp;
    double source_version_rate = 0.0;  // lambda_e, version mode only
    AdversaryConfig adversary;
    double horizon = 0.0;
    double warmup_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MetricsReport {
    std::vector<double> node_avg_age;          // timestamp mode (true age)
    std::vector<double> node_avg_version_age;  // version mode
    double fraction_accurate = 1.0;            // version mode
    double span = 0.0;

    double mean_age() const;
    double mean_age_excluding(int node) const;
    double median_age() const;
};

enum class EventKind { source_to_user, user_to_user, source_self_update, none };

struct Event {
    EventKind kind = EventKind::none;
    int from = -1;  // user_to_user only
    int to = -1;    // receiver (source_to_user / user_to_user)
};

// Full mutable simulation state; confined to a single run. Integrals are
// accumulated lazily: a node's contribution is flushed only when its packet
// is replaced, and once more at the horizon.
struct SimState {
    double now = 0.0;
    std::vector<Packet> node_packet;
    std::uint64_t source_version = 0;
    MetricsAccumulator metrics;

    // lazy-integration bookkeeping
    double window_start = 0.0;
    double horizon = 0.0;
    std::vector<double> last_change;            // per node, time of last replacement
    std::vector<double> node_version_integral;  // per node, over the window
    double source_version_integral = 0.0;
    double source_last_change = 0.0;
    int accurate_count = 0;
    double last_acc_flush = 0.0;
};

// Acceptance rules. Ties keep the incumbent; version ties prefer truth.
Packet accept_timestamp(const Packet& incumbent, const Packet& incoming);
Packet accept_version(const Packet& incumbent, const Packet& incoming);

enum class StompDirection { outgoing, incoming };

Packet timestomp(Packet packet, StompDirection direction, const AdversaryConfig& config,
                 double now, std::mt19937_64& rng);

Packet mutate(Packet packet, double p_mut, std::mt19937_64& rng);

// Precomputed superposition sampler over source edges, user edges and the
// version-mode source self-update pseudo-edge.
class EventSampler {
public:
    EventSampler(const Topology& topology, SimMode mode, double source_version_rate);

    double total_rate() const { return total_rate_; }

    // Returns nullopt when the total rate is zero (no-event: run to horizon).
    std::optional<std::pair<double, Event>> sample_next_event(std::mt19937_64& rng) const;

private:
    double total_rate_ = 0.0;
    double source_self_rate_ = 0.0;
    std::vector<double> cum_;       // cumulative rate over flat event list
    std::vector<Event> flat_;
};

struct TraceRecord {
    double time = 0.0;
    Event event;
    Packet offered;   // packet as presented to the acceptance rule
    Packet pre;       // receiver packet before the event
    Packet post;      // receiver packet after the event
    bool accepted = false;
};

using TraceSink = std::function<void(const TraceRecord&)>;

void apply_event(SimState& state, const Event& event, const GossipScenario& scenario,
                 std::mt19937_64& rng, const TraceSink* sink = nullptr);

MetricsReport run(const GossipScenario& scenario, const TraceSink* sink = nullptr);

std::string trace_to_ndjson(const TraceRecord& rec);

}  // namespace aoi

#endif  // AOI_GOSSIP_HPP
