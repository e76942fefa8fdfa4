#include "hlnc/broadcast.hpp"

#include "hlnc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <string>

namespace hlnc {

Sfm::Sfm(int packets, std::vector<PacketSet> wants) : packets_(packets), wants_(std::move(wants))
{
    if (packets < 1 || packets > kMaxPackets)
        throw InvalidInput("block size must be in [1, " + std::to_string(kMaxPackets) + "]");
    if (wants_.empty())
        throw InvalidInput("an SFM needs at least one receiver");
    const PacketSet all = PacketSet::first(packets);
    for (const auto& row : wants_)
        if (!row.is_subset_of(all))
            throw InvalidInput("SFM row references a packet outside the block");
}

Sfm Sfm::from_rows(int packets, const std::vector<std::vector<int>>& rows)
{
    std::vector<PacketSet> wants;
    wants.reserve(rows.size());
    for (const auto& r : rows)
        wants.push_back(PacketSet::from_indices(r));
    return Sfm(packets, std::move(wants));
}

std::vector<int> Sfm::w_counts() const
{
    std::vector<int> out;
    out.reserve(wants_.size());
    for (const auto& row : wants_)
        out.push_back(row.size());
    return out;
}

int Sfm::total() const
{
    int t = 0;
    for (const auto& row : wants_)
        t += row.size();
    return t;
}

PacketSet Sfm::wanted_by_anyone() const
{
    PacketSet u;
    for (const auto& row : wants_)
        u |= row;
    return u;
}

ChannelModel::ChannelModel(std::vector<double> erasure_probs, std::uint64_t seed)
    : probs_(std::move(erasure_probs)), seed_(seed)
{
    if (probs_.empty())
        throw InvalidInput("channel model needs at least one receiver");
    for (double p : probs_)
        if (!(p >= 0.0 && p < 1.0))
            throw InvalidInput("erasure probability must lie in [0, 1), got " + std::to_string(p));
}

ChannelModel ChannelModel::uniform(int receivers, double erasure_prob, std::uint64_t seed)
{
    if (receivers < 1)
        throw InvalidInput("receiver count must be positive");
    return ChannelModel(std::vector<double>(static_cast<std::size_t>(receivers), erasure_prob), seed);
}

ErasureChannel::ErasureChannel(const ChannelModel& model, Rng rng)
    : probs_(model.erasure_probs()), rng_(std::move(rng))
{
}

std::vector<bool> ErasureChannel::next_slot()
{
    std::vector<bool> erased(probs_.size());
    for (std::size_t n = 0; n < probs_.size(); ++n)
        erased[n] = uniform01(rng_) < probs_[n];
    return erased;
}

Sfm generate_sfm(int packets, int receivers, const ChannelModel& channel, Rng& rng)
{
    if (packets < 1)
        throw InvalidInput("block size must be positive");
    if (receivers < 1)
        throw InvalidInput("receiver count must be positive");
    if (channel.receivers() != receivers)
        throw InvalidInput("channel model covers " + std::to_string(channel.receivers()) + " receivers, expected " +
                           std::to_string(receivers));
    std::vector<PacketSet> wants(static_cast<std::size_t>(receivers));
    for (int n = 0; n < receivers; ++n)
        for (int k = 0; k < packets; ++k)
            if (uniform01(rng) < channel.erasure_prob(n))
                wants[n].insert(k);
    return Sfm(packets, std::move(wants));
}

Sfm generate_sfm(int packets, int receivers, const ChannelModel& channel)
{
    Rng rng = make_stream({channel.seed(), hash_name("sfm")});
    return generate_sfm(packets, receivers, channel, rng);
}

ReceiverDecoder::ReceiverDecoder(int packets, PacketSet wants)
    : wants_(wants), km_(packets, PacketSet::first(packets) - wants),
      decode_slot_(static_cast<std::size_t>(packets), 0)
{
    if (!wants.is_subset_of(PacketSet::first(packets)))
        throw InvalidInput("wants set references a packet outside the block");
}

int ReceiverDecoder::completion_slot() const
{
    int u = 0;
    wants_.for_each([&](int k) { u = std::max(u, decode_slot_[k]); });
    return u;
}

void ReceiverDecoder::advance_slot(int slot)
{
    if (slot < 1 || slot <= last_slot_)
        throw InvalidInput("slot " + std::to_string(slot) + " does not follow slot " + std::to_string(last_slot_));
    last_slot_ = slot;
}

PacketSet ReceiverDecoder::stamp_new(PacketSet before, int slot)
{
    const PacketSet fresh = (km_.decoded() - before) & wants_;
    fresh.for_each([&](int k) { decode_slot_[k] = slot; });
    return fresh;
}

PacketSet ReceiverDecoder::deliver(const CodingVector& v, int slot, bool erased)
{
    if (v.size() != packets())
        throw InvalidInput("coding vector length does not match block size");
    advance_slot(slot);
    if (erased)
        return {};
    ++receptions_;
    const PacketSet before = km_.decoded();
    km_.eliminate(v);
    return stamp_new(before, slot);
}

PacketSet ReceiverDecoder::deliver_memoryless(PacketSet coding_set, int slot, bool erased)
{
    advance_slot(slot);
    if (erased)
        return {};
    ++receptions_;
    const PacketSet unknown = coding_set - km_.decoded();
    if (unknown.size() != 1)
        return {};
    const PacketSet before = km_.decoded();
    km_.eliminate(CodingVector::unit(packets(), unknown.lowest()));
    return stamp_new(before, slot);
}

bool ReceiverDecoder::same_state(const ReceiverDecoder& other) const
{
    return wants_ == other.wants_ && decode_slot_ == other.decode_slot_ && km_ == other.km_;
}

std::vector<ReceiverDecoder> make_decoders(const Sfm& sfm)
{
    std::vector<ReceiverDecoder> out;
    out.reserve(static_cast<std::size_t>(sfm.receivers()));
    for (int n = 0; n < sfm.receivers(); ++n)
        out.emplace_back(sfm.packets(), sfm.wants(n));
    return out;
}

ContractStats& ContractStats::operator+=(const ContractStats& o)
{
    cover_packets += o.cover_packets;
    not_innovative += o.not_innovative;
    no_instant_decoding += o.no_instant_decoding;
    subgraph_checks += o.subgraph_checks;
    subgraph_violations += o.subgraph_violations;
    cover_not_minimal_in_true += o.cover_not_minimal_in_true;
    shadow_mismatches += o.shadow_mismatches;
    return *this;
}

BlockMetrics BlockMetrics::collect(const std::vector<ReceiverDecoder>& receivers, int slots_used,
                                   int feedback_rounds)
{
    BlockMetrics m;
    m.slots_used = slots_used;
    m.feedback_rounds = feedback_rounds;
    for (const auto& r : receivers) {
        m.wants.push_back(r.initial_wants());
        std::vector<int> row(static_cast<std::size_t>(r.packets()), 0);
        r.initial_wants().for_each([&](int k) { row[k] = r.decode_slot(k); });
        m.decode_slot.push_back(std::move(row));
    }
    return m;
}

int BlockMetrics::total_wanted() const
{
    int t = 0;
    for (const auto& w : wants)
        t += w.size();
    return t;
}

bool BlockMetrics::complete() const
{
    for (std::size_t n = 0; n < wants.size(); ++n) {
        bool ok = true;
        wants[n].for_each([&](int k) { ok = ok && decode_slot[n][k] > 0; });
        if (!ok)
            return false;
    }
    return true;
}

namespace {

void require_complete(const BlockMetrics& m)
{
    if (!m.complete())
        throw IncompleteBlock("block has undecoded wanted packets");
}

} // namespace

Apdd apdd(const BlockMetrics& m)
{
    require_complete(m);
    Apdd out;
    std::int64_t sum = 0;
    std::int64_t count = 0;
    for (std::size_t n = 0; n < m.wants.size(); ++n) {
        std::int64_t sn = 0;
        m.wants[n].for_each([&](int k) { sn += m.decode_slot[n][k]; });
        const int wn = m.wants[n].size();
        if (wn == 0) {
            out.per_receiver.emplace_back(std::nullopt);
            continue;
        }
        out.per_receiver.emplace_back(Rational(sn, wn));
        sum += sn;
        count += wn;
    }
    if (count == 0)
        throw InvalidInput("APDD is undefined when no receiver wants a packet");
    out.overall = Rational(sum, count);
    return out;
}

std::vector<int> completion_slots(const BlockMetrics& m)
{
    require_complete(m);
    std::vector<int> out;
    for (std::size_t n = 0; n < m.wants.size(); ++n) {
        int u = 0;
        m.wants[n].for_each([&](int k) { u = std::max(u, m.decode_slot[n][k]); });
        out.push_back(u);
    }
    return out;
}

int bct(const BlockMetrics& m)
{
    const auto u = completion_slots(m);
    return u.empty() ? 0 : *std::max_element(u.begin(), u.end());
}

void TransmissionLog::write_jsonl(std::ostream& os, std::string_view scheme, int receivers) const
{
    for (const auto& r : records) {
        nlohmann::json j;
        if (!scheme.empty()) {
            j["scheme"] = std::string(scheme);
            j["receivers"] = receivers;
        }
        j["slot"] = r.slot;
        auto one_based = [](PacketSet s) {
            std::vector<int> v;
            s.for_each([&](int k) { v.push_back(k + 1); });
            return v;
        };
        j["coding_set"] = one_based(r.coding_set);
        std::vector<int> erased;
        erased.reserve(r.erased.size());
        for (bool e : r.erased)
            erased.push_back(e ? 1 : 0);
        j["erased"] = erased;
        auto decoded = nlohmann::json::array();
        for (const auto& d : r.newly_decoded)
            decoded.push_back(one_based(d));
        j["decoded"] = decoded;
        os << j.dump() << '\n';
    }
}

} // namespace hlnc
