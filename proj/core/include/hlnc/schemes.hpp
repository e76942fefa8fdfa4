#pragma once

#include "hlnc/broadcast.hpp"
#include "hlnc/hypergraph.hpp"
#include "hlnc/linear.hpp"
#include "hlnc/rng.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hlnc {

enum class SchemeKind { Rlnc, HlncFull, HlncSemi, HlncOffline, Gidnc, Perfect };

/// "rlnc", "hlnc-full", "hlnc-semi", "hlnc-offline", "gidnc", "perfect".
std::string_view scheme_name(SchemeKind kind);
/// Throws InvalidInput on an unknown name.
SchemeKind parse_scheme(std::string_view name);
std::vector<SchemeKind> all_schemes();

enum class FeedbackDiscipline { FullyOnline, SemiOnline, Offline, None };
/// How receivers treat a packet: keep it for later elimination, or
/// (IDNC) decode at once or throw it away.
enum class Delivery { Linear, Memoryless };

struct Packet {
    CodingVector vector;
    PacketSet coding_set;
    /// Built on a minimal vertex cover of the sender's hypergraph; such
    /// packets carry the innovativeness and instant-decoding guarantees.
    bool from_cover = false;
};

/// Receiver state as reported by a feedback round: for each receiver, the
/// slots it received since the previous round.
struct FeedbackReport {
    std::vector<std::vector<int>> received_slots;
};

/// The sender's picture of the receivers.
///
/// Shadows are exact right after a feedback round. Between rounds a scheme
/// may update them speculatively (assume_received); apply_feedback then
/// rebuilds them from the last exact state by replaying the reported slots.
class SenderView {
public:
    SenderView(const Sfm& sfm, Delivery delivery);

    const Sfm& sfm() const { return *sfm_; }
    const std::vector<ReceiverDecoder>& shadows() const { return shadows_; }

    /// Record a transmitted packet; must be called once per slot.
    void record_sent(const Packet& p, int slot);
    /// Speculative update: every receiver got p.
    void assume_received(const Packet& p, int slot);
    void apply_feedback(const FeedbackReport& report);

    /// True receiver states, exposed only to emulate a large field when
    /// checking random coefficients of RLNC-style packets. Schemes must not
    /// use it for coding decisions.
    std::span<const ReceiverDecoder> actual() const { return actual_; }
    void attach_actual(std::span<const ReceiverDecoder> actual) { actual_ = actual; }

private:
    void deliver(ReceiverDecoder& r, const Packet& p, int slot) const;

    const Sfm* sfm_;
    Delivery delivery_;
    std::vector<ReceiverDecoder> synced_;
    std::vector<ReceiverDecoder> shadows_;
    std::vector<std::pair<int, Packet>> sent_since_sync_;
    std::span<const ReceiverDecoder> actual_;
    bool speculated_ = false;
};

/// Random nonzero coefficients on exactly `coding_set`, resampled until the
/// vector is innovative to every unfinished receiver in `against`.
/// Throws ContractViolation if some unfinished receiver has nothing left to
/// learn from coding_set, or after kMaxCoefficientAttempts failed draws.
inline constexpr int kMaxCoefficientAttempts = 64;
CodingVector verified_innovative_vector(PacketSet coding_set, std::span<const ReceiverDecoder> against, Rng& rng);

class Scheme {
public:
    virtual ~Scheme() = default;

    virtual SchemeKind kind() const = 0;
    virtual FeedbackDiscipline discipline() const = 0;
    virtual Delivery delivery() const { return Delivery::Linear; }

    /// Called before the first packet of a block.
    virtual void reset(const Sfm&) {}
    /// Never returns the zero vector while a receiver is unfinished.
    virtual Packet next_packet(const SenderView& view, Rng& rng) = 0;
    /// Called after each transmission. Returns true to poll feedback now.
    virtual bool after_transmission(SenderView& view, const Packet& sent, int slot) = 0;
};

std::unique_ptr<Scheme> make_scheme(SchemeKind kind);

/// RLNC: all packets still wanted by anyone, every slot.
Packet rlnc_next(const SenderView& view, Rng& rng);
/// HLNC: a verified coded packet on a minimal vertex cover of the shadow hypergraph.
Packet hlnc_next(const SenderView& view, Rng& rng);
/// G-IDNC: XOR of the packets in a greedy maximum-degree clique of the IDNC graph.
Packet gidnc_next(const SenderView& view, Rng& rng);

/// Sends a fixed list of vectors in order; used to replay hand-built schedules.
class ScriptedScheme final : public Scheme {
public:
    explicit ScriptedScheme(std::vector<CodingVector> script);

    SchemeKind kind() const override { return SchemeKind::Rlnc; }
    FeedbackDiscipline discipline() const override { return FeedbackDiscipline::None; }
    Packet next_packet(const SenderView& view, Rng& rng) override;
    bool after_transmission(SenderView&, const Packet&, int) override { return false; }

private:
    std::vector<CodingVector> script_;
    std::size_t next_ = 0;
};

struct RunOptions {
    bool check_contracts = true;
    TransmissionLog* log = nullptr;
    int max_slots = 10000;
};

/// Simulate one block until every receiver is finished. Applies the
/// scheme's feedback policy, counts feedback rounds and, when enabled,
/// checks the coding guarantees of cover packets against true state.
BlockMetrics run_block(Scheme& scheme, const Sfm& sfm, ErasureChannel& channel, Rng& rng,
                       const RunOptions& options = {});
/// Streams derived from channel.seed().
BlockMetrics run_block(Scheme& scheme, const Sfm& sfm, const ChannelModel& channel,
                       const RunOptions& options = {});

/// Counterfactual lower-bound scheme: each slot, every unfinished receiver
/// whose channel is on decodes one more wanted packet.
BlockMetrics perfect_oracle_block(const Sfm& sfm, ErasureChannel& channel, TransmissionLog* log = nullptr);
BlockMetrics perfect_oracle_block(const Sfm& sfm, const ChannelModel& channel);

/// Any scheme by kind, including the perfect oracle.
BlockMetrics run_scheme_block(SchemeKind kind, const Sfm& sfm, ErasureChannel& channel, Rng& rng,
                              const RunOptions& options = {});

/// Every pair of packets wanted by its own receiver: K(K-1)/2 receivers.
Sfm build_a1(int packets);
/// build_a1 plus `per_packet` single-packet receivers for each packet,
/// listed first.
Sfm build_a2(int packets, int per_packet);
/// Two packets: r1 wants p1, r2 wants p2, the other N-2 want both.
Sfm build_two_packet_instance(int receivers);
/// r1 has p1, r2 has p2, both want the rest of {p1, p2, p3}.
Sfm example_two_receivers();
/// r1:{p1,p4}, r2:{p2,p5}, r3:{p3,p6}, r4:{p1,p2,p3} over six packets.
Sfm example_walkthrough();

struct BruteforceLimits {
    int max_packets = 5;
    int max_receivers = 12;
};

/// Fewest erasure-free XOR transmissions that finish every receiver under
/// memoryless decoding, by breadth-first search over receiver states.
/// Throws InstanceTooLarge past the limits.
int bruteforce_idnc_min_bct(const Sfm& sfm, const BruteforceLimits& limits = {});

} // namespace hlnc
