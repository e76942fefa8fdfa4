#pragma once

#include "hlnc/linear.hpp"
#include "hlnc/packet_set.hpp"
#include "hlnc/rational.hpp"
#include "hlnc/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace hlnc {

/// State feedback matrix: row n is the set of packets receiver n still wants.
class Sfm {
public:
    Sfm() = default;
    Sfm(int packets, std::vector<PacketSet> wants);
    /// Zero-based index lists, one per receiver.
    static Sfm from_rows(int packets, const std::vector<std::vector<int>>& rows);

    int packets() const { return packets_; }
    int receivers() const { return static_cast<int>(wants_.size()); }
    PacketSet wants(int n) const { return wants_[n]; }
    const std::vector<PacketSet>& rows() const { return wants_; }
    int w(int n) const { return wants_[n].size(); }
    std::vector<int> w_counts() const;
    /// sum(A): number of ones in the matrix.
    int total() const;
    bool operator()(int n, int k) const { return wants_[n].contains(k); }
    PacketSet wanted_by_anyone() const;

private:
    int packets_ = 0;
    std::vector<PacketSet> wants_;
};

/// Independent Bernoulli erasures, one probability per receiver.
class ChannelModel {
public:
    ChannelModel(std::vector<double> erasure_probs, std::uint64_t seed);
    static ChannelModel uniform(int receivers, double erasure_prob, std::uint64_t seed);

    int receivers() const { return static_cast<int>(probs_.size()); }
    double erasure_prob(int n) const { return probs_[n]; }
    const std::vector<double>& erasure_probs() const { return probs_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<double> probs_;
    std::uint64_t seed_ = 0;
};

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// One realization of the erasure process. Every slot consumes exactly one
/// draw per receiver, so two schemes fed the same stream see the same
/// erasure pattern slot by slot.
class ErasureChannel {
public:
    ErasureChannel(const ChannelModel& model, Rng rng);

    /// erased[n] for the next slot.
    std::vector<bool> next_slot();

private:
    std::vector<double> probs_;
    Rng rng_;
};

/// One uncoded round of all K packets: A(n,k) = 1 with probability P_{e,n}.
Sfm generate_sfm(int packets, int receivers, const ChannelModel& channel, Rng& rng);
/// As above, with the generator seeded from channel.seed().
Sfm generate_sfm(int packets, int receivers, const ChannelModel& channel);

/// Receiver-side decoding state for one block.
class ReceiverDecoder {
public:
    ReceiverDecoder() = default;
    ReceiverDecoder(int packets, PacketSet wants);

    int packets() const { return km_.block_size(); }
    PacketSet initial_wants() const { return wants_; }
    PacketSet has() const { return PacketSet::first(packets()) - wants_; }
    PacketSet decoded() const { return km_.decoded(); }
    /// Generalized Wants set: wanted packets not yet decoded, including ones
    /// held only inside undecodable combinations.
    PacketSet wants_now() const { return wants_ - km_.decoded(); }
    bool finished() const { return wants_now().empty(); }
    const KnowledgeMatrix& knowledge() const { return km_; }

    /// Slot at which wanted packet k was decoded, 0 if not (yet) decoded.
    int decode_slot(int k) const { return decode_slot_[k]; }
    int last_slot() const { return last_slot_; }
    int receptions() const { return receptions_; }
    /// U_n; 0 for a receiver that wants nothing.
    int completion_slot() const;

    /// Linear-network-coding reception. Returns the packets decoded by it.
    /// Throws InvalidInput if slot does not exceed the previous slot.
    PacketSet deliver(const CodingVector& v, int slot, bool erased);

    /// Memoryless IDNC reception of an XOR of coding_set: decodes iff exactly
    /// one packet of coding_set is undecoded, otherwise discards it.
    PacketSet deliver_memoryless(PacketSet coding_set, int slot, bool erased);

    bool same_state(const ReceiverDecoder& other) const;

private:
    void advance_slot(int slot);
    PacketSet stamp_new(PacketSet before, int slot);

    PacketSet wants_;
    KnowledgeMatrix km_;
    std::vector<int> decode_slot_;
    int last_slot_ = 0;
    int receptions_ = 0;
};

/// Build one decoder per SFM row.
std::vector<ReceiverDecoder> make_decoders(const Sfm& sfm);

/// Counters for runtime checks of the coding guarantees.
struct ContractStats {
    long cover_packets = 0;           // packets emitted from a vertex cover
    long not_innovative = 0;          // unfinished receivers for which a cover packet was not innovative
    long no_instant_decoding = 0;     // cover packets that let nobody decode at once
    long subgraph_checks = 0;         // speculative-vs-true hypergraph comparisons
    long subgraph_violations = 0;     // shadow H not a same-size subgraph of true H
    long cover_not_minimal_in_true = 0;
    long shadow_mismatches = 0;       // shadow != truth right after a feedback round

    ContractStats& operator+=(const ContractStats& o);
    long violations() const { return not_innovative + no_instant_decoding + subgraph_violations + shadow_mismatches; }
};

struct BlockMetrics {
    std::vector<PacketSet> wants;
    /// decode_slot[n][k] = u_{n,k} for wanted k, 0 otherwise or if undecoded.
    std::vector<std::vector<int>> decode_slot;
    int slots_used = 0;
    int feedback_rounds = 0;
    ContractStats contracts;

    static BlockMetrics collect(const std::vector<ReceiverDecoder>& receivers, int slots_used,
                                int feedback_rounds);

    int receivers() const { return static_cast<int>(wants.size()); }
    int total_wanted() const;
    bool complete() const;
};

struct Apdd {
    Rational overall;
    /// D_n; empty for receivers that want nothing.
    std::vector<std::optional<Rational>> per_receiver;
};

/// Throws IncompleteBlock if a wanted packet is undecoded, InvalidInput if
/// nobody wants anything.
Apdd apdd(const BlockMetrics& m);
/// U_n per receiver (0 when w_n = 0). Throws IncompleteBlock.
std::vector<int> completion_slots(const BlockMetrics& m);
/// U = max_n U_n. Throws IncompleteBlock.
int bct(const BlockMetrics& m);

struct SlotRecord {
    int slot = 0;
    PacketSet coding_set;
    std::vector<bool> erased;
    std::vector<PacketSet> newly_decoded;
};

/// Per-slot record of a block: what was sent, who lost it, who decoded what.
struct TransmissionLog {
    std::vector<SlotRecord> records;

    /// One JSON object per line:
    /// {"slot":1,"coding_set":[1,2,3],"erased":[0,1,...],"decoded":[[1],[],...]}
    /// Packet numbers are one-based.
    /// A non-empty `scheme` adds "scheme" and "receivers" keys to every line.
    void write_jsonl(std::ostream& os, std::string_view scheme = {}, int receivers = 0) const;
};

} // namespace hlnc
