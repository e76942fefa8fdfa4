#include "hlnc/schemes.hpp"

#include "hlnc/errors.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <unordered_set>

namespace hlnc {

namespace {

constexpr std::array<std::pair<SchemeKind, std::string_view>, 6> kSchemeNames{{
    {SchemeKind::Rlnc, "rlnc"},
    {SchemeKind::HlncFull, "hlnc-full"},
    {SchemeKind::HlncSemi, "hlnc-semi"},
    {SchemeKind::HlncOffline, "hlnc-offline"},
    {SchemeKind::Gidnc, "gidnc"},
    {SchemeKind::Perfect, "perfect"},
}};

std::vector<const ReceiverDecoder*> unfinished(std::span<const ReceiverDecoder> receivers)
{
    std::vector<const ReceiverDecoder*> out;
    for (const auto& r : receivers)
        if (!r.finished())
            out.push_back(&r);
    return out;
}

PacketSet still_wanted(std::span<const ReceiverDecoder> receivers)
{
    PacketSet u;
    for (const auto& r : receivers)
        u |= r.wants_now();
    return u;
}

bool any_unfinished(std::span<const ReceiverDecoder> receivers)
{
    return std::any_of(receivers.begin(), receivers.end(), [](const ReceiverDecoder& r) { return !r.finished(); });
}

} // namespace

std::string_view scheme_name(SchemeKind kind)
{
    for (const auto& [k, name] : kSchemeNames)
        if (k == kind)
            return name;
    return "unknown";
}

SchemeKind parse_scheme(std::string_view name)
{
    for (const auto& [k, n] : kSchemeNames)
        if (n == name)
            return k;
    throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

std::vector<SchemeKind> all_schemes()
{
    std::vector<SchemeKind> out;
    for (const auto& [k, name] : kSchemeNames)
        out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------
// SenderView

SenderView::SenderView(const Sfm& sfm, Delivery delivery)
    : sfm_(&sfm), delivery_(delivery), synced_(make_decoders(sfm)), shadows_(synced_)
{
}

void SenderView::deliver(ReceiverDecoder& r, const Packet& p, int slot) const
{
    if (delivery_ == Delivery::Linear)
        r.deliver(p.vector, slot, false);
    else
        r.deliver_memoryless(p.coding_set, slot, false);
}

void SenderView::record_sent(const Packet& p, int slot)
{
    sent_since_sync_.emplace_back(slot, p);
}

void SenderView::assume_received(const Packet& p, int slot)
{
    for (auto& r : shadows_)
        deliver(r, p, slot);
    speculated_ = true;
}

void SenderView::apply_feedback(const FeedbackReport& report)
{
    if (report.received_slots.size() != synced_.size())
        throw InvalidInput("feedback report does not cover every receiver");
    for (std::size_t n = 0; n < synced_.size(); ++n) {
        const auto& slots = report.received_slots[n];
        auto sent = sent_since_sync_.begin();
        for (int slot : slots) {
            while (sent != sent_since_sync_.end() && sent->first < slot)
                ++sent;
            if (sent == sent_since_sync_.end() || sent->first != slot)
                throw InvalidInput("feedback reports slot " + std::to_string(slot) + " that was never sent");
            deliver(synced_[n], sent->second, slot);
        }
        // untouched shadows are still exact unless updated speculatively
        if (speculated_ || !slots.empty())
            shadows_[n] = synced_[n];
    }
    speculated_ = false;
    sent_since_sync_.clear();
}

// ---------------------------------------------------------------------------
// Packet construction

CodingVector verified_innovative_vector(PacketSet coding_set, std::span<const ReceiverDecoder> against, Rng& rng)
{
    if (against.empty())
        throw InvalidInput("no receivers to verify against");
    const int packets = against.front().packets();
    const auto targets = unfinished(against);
    for (const auto* r : targets)
        if (!r->wants_now().intersects(coding_set))
            throw ContractViolation("coding set {" + coding_set.to_string() +
                                    "} carries nothing new for an unfinished receiver");

    std::uniform_int_distribution<int> coefficient(1, Gf256::kOrder - 1);
    for (int attempt = 0; attempt < kMaxCoefficientAttempts; ++attempt) {
        CodingVector v(packets);
        coding_set.for_each([&](int k) { v[k] = Gf256(static_cast<std::uint8_t>(coefficient(rng))); });
        const bool ok = std::all_of(targets.begin(), targets.end(),
                                    [&](const ReceiverDecoder* r) { return r->knowledge().is_innovative(v); });
        if (ok)
            return v;
    }
    throw ContractViolation("no innovative coefficients found in " + std::to_string(kMaxCoefficientAttempts) +
                            " attempts");
}

namespace {

std::span<const ReceiverDecoder> truth_or_shadows(const SenderView& view)
{
    return view.actual().empty() ? std::span<const ReceiverDecoder>(view.shadows()) : view.actual();
}

} // namespace

Packet rlnc_next(const SenderView& view, Rng& rng)
{
    const auto receivers = truth_or_shadows(view);
    const PacketSet support = still_wanted(receivers);
    if (support.empty())
        throw ContractViolation("RLNC asked for a packet after every receiver finished");
    return {verified_innovative_vector(support, receivers, rng), support, false};
}

Packet hlnc_next(const SenderView& view, Rng& rng)
{
    const Hypergraph h = Hypergraph::from_states(view.shadows());
    if (h.empty())
        throw ContractViolation("HLNC asked for a packet after every receiver finished");
    const VertexCover cover = minimal_vertex_cover(h);
    return {verified_innovative_vector(cover.cover, view.shadows(), rng), cover.cover, true};
}

namespace {

/// Fixed-size bitset over the vertices of one IDNC graph.
class VertexBits {
public:
    explicit VertexBits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    bool none() const
    {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }
    int count_and(const VertexBits& o) const
    {
        int c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += std::popcount(words_[i] & o.words_[i]);
        return c;
    }
    VertexBits& operator|=(const VertexBits& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    VertexBits& operator&=(const VertexBits& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    friend VertexBits operator&(VertexBits a, const VertexBits& b) { return a &= b; }

private:
    std::vector<std::uint64_t> words_;
};

} // namespace

Packet gidnc_next(const SenderView& view, Rng&)
{
    const auto& rx = view.shadows();
    const int packets = view.sfm().packets();

    // One vertex per (receiver, wanted packet), in (receiver, packet) order.
    struct Vertex {
        int receiver;
        int packet;
    };
    std::vector<Vertex> vertices;
    for (std::size_t n = 0; n < rx.size(); ++n)
        rx[n].wants_now().for_each([&](int k) { vertices.push_back({static_cast<int>(n), k}); });
    if (vertices.empty())
        throw ContractViolation("G-IDNC asked for a packet after every receiver finished");

    const std::size_t nv = vertices.size();
    std::vector<VertexBits> wanting(static_cast<std::size_t>(packets), VertexBits(nv)); // vertices for packet k
    std::vector<VertexBits> own(rx.size(), VertexBits(nv));                              // vertices of receiver n
    for (std::size_t i = 0; i < nv; ++i) {
        wanting[vertices[i].packet].set(i);
        own[vertices[i].receiver].set(i);
    }
    // holders[k]: vertices whose receiver already has packet k.
    std::vector<VertexBits> holders(static_cast<std::size_t>(packets), VertexBits(nv));
    // sendable[n]: vertices whose packet receiver n already has.
    std::vector<VertexBits> sendable(rx.size(), VertexBits(nv));
    for (std::size_t n = 0; n < rx.size(); ++n) {
        const PacketSet known = rx[n].decoded();
        known.for_each([&](int k) {
            holders[k] |= own[n];
            sendable[n] |= wanting[k];
        });
    }

    // (n1,k1) ~ (n2,k2), n1 != n2: same packet, or each has the other's packet.
    std::vector<VertexBits> adj;
    adj.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        const auto [n, k] = vertices[i];
        VertexBits a = holders[k] & sendable[n];
        a |= wanting[k];
        // Other vertices of receiver n want other packets it lacks, so only
        // the vertex itself needs clearing.
        a.reset(i);
        adj.push_back(std::move(a));
    }

    VertexBits candidates(nv);
    for (std::size_t i = 0; i < nv; ++i)
        candidates.set(i);

    PacketSet coding_set;
    while (!candidates.none()) {
        std::size_t best = nv;
        int best_degree = -1;
        for (std::size_t i = 0; i < nv; ++i) {
            if (!candidates.test(i))
                continue;
            const int d = adj[i].count_and(candidates);
            if (d > best_degree) {
                best_degree = d;
                best = i;
            }
        }
        coding_set.insert(vertices[best].packet);
        candidates &= adj[best];
    }
    return {CodingVector::xor_of(packets, coding_set), coding_set, false};
}

// ---------------------------------------------------------------------------
// Schemes

namespace {

class RlncScheme final : public Scheme {
public:
    SchemeKind kind() const override { return SchemeKind::Rlnc; }
    FeedbackDiscipline discipline() const override { return FeedbackDiscipline::None; }
    Packet next_packet(const SenderView& view, Rng& rng) override { return rlnc_next(view, rng); }
    bool after_transmission(SenderView&, const Packet&, int) override { return false; }
};

class HlncScheme final : public Scheme {
public:
    explicit HlncScheme(FeedbackDiscipline mode) : mode_(mode) {}

    SchemeKind kind() const override
    {
        switch (mode_) {
        case FeedbackDiscipline::FullyOnline:
            return SchemeKind::HlncFull;
        case FeedbackDiscipline::SemiOnline:
            return SchemeKind::HlncSemi;
        default:
            return SchemeKind::HlncOffline;
        }
    }
    FeedbackDiscipline discipline() const override { return mode_; }

    void reset(const Sfm&) override { rlnc_phase_ = false; }

    Packet next_packet(const SenderView& view, Rng& rng) override
    {
        if (!rlnc_phase_)
            return hlnc_next(view, rng);
        // Without feedback the sender only knows what the SFM asked for.
        const PacketSet support = view.sfm().wanted_by_anyone();
        return {verified_innovative_vector(support, truth_or_shadows(view), rng), support, false};
    }

    bool after_transmission(SenderView& view, const Packet& sent, int slot) override
    {
        if (mode_ == FeedbackDiscipline::FullyOnline)
            return true;
        if (rlnc_phase_)
            return false;
        // Semi-online round: keep going on speculative state until this
        // packet would let some receiver finish.
        std::vector<bool> was_done;
        for (const auto& r : view.shadows())
            was_done.push_back(r.finished());
        view.assume_received(sent, slot);
        bool someone_finishes = false;
        for (std::size_t n = 0; n < was_done.size(); ++n)
            someone_finishes = someone_finishes || (!was_done[n] && view.shadows()[n].finished());
        if (!someone_finishes)
            return false;
        if (mode_ == FeedbackDiscipline::Offline) {
            rlnc_phase_ = true;
            return false;
        }
        return true;
    }

private:
    FeedbackDiscipline mode_;
    bool rlnc_phase_ = false;
};

class GidncScheme final : public Scheme {
public:
    SchemeKind kind() const override { return SchemeKind::Gidnc; }
    FeedbackDiscipline discipline() const override { return FeedbackDiscipline::FullyOnline; }
    Delivery delivery() const override { return Delivery::Memoryless; }
    Packet next_packet(const SenderView& view, Rng& rng) override { return gidnc_next(view, rng); }
    bool after_transmission(SenderView&, const Packet&, int) override { return true; }
};

} // namespace

std::unique_ptr<Scheme> make_scheme(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::Rlnc:
        return std::make_unique<RlncScheme>();
    case SchemeKind::HlncFull:
        return std::make_unique<HlncScheme>(FeedbackDiscipline::FullyOnline);
    case SchemeKind::HlncSemi:
        return std::make_unique<HlncScheme>(FeedbackDiscipline::SemiOnline);
    case SchemeKind::HlncOffline:
        return std::make_unique<HlncScheme>(FeedbackDiscipline::Offline);
    case SchemeKind::Gidnc:
        return std::make_unique<GidncScheme>();
    case SchemeKind::Perfect:
        break;
    }
    throw InvalidInput("the perfect oracle is not a transmitting scheme; use perfect_oracle_block");
}

ScriptedScheme::ScriptedScheme(std::vector<CodingVector> script) : script_(std::move(script)) {}

Packet ScriptedScheme::next_packet(const SenderView& view, Rng&)
{
    if (next_ >= script_.size())
        throw ContractViolation("scripted schedule ran out before the block completed");
    const CodingVector& v = script_[next_++];
    if (v.size() != view.sfm().packets())
        throw InvalidInput("scripted vector length does not match block size");
    return {v, v.support(), false};
}

// ---------------------------------------------------------------------------
// Block simulation

namespace {

void check_cover_packet(const Packet& p, const Scheme& scheme, const SenderView& view,
                        const std::vector<ReceiverDecoder>& truth, ContractStats& stats)
{
    ++stats.cover_packets;
    bool instant = false;
    std::vector<const ReceiverDecoder*> innovative_to;
    for (const auto& r : truth) {
        if (r.finished())
            continue;
        if (!r.knowledge().is_innovative(p.vector)) {
            ++stats.not_innovative;
            continue;
        }
        innovative_to.push_back(&r);
        // One undecoded packet in the coding set: decodes on reception.
        if ((r.wants_now() & p.coding_set).size() == 1)
            instant = true;
    }
    if (!instant) {
        // Slow path: stored combinations may still yield a packet.
        for (const auto* r : innovative_to) {
            KnowledgeMatrix km = r->knowledge();
            km.eliminate(p.vector);
            if (!((km.decoded() - r->decoded()) & r->initial_wants()).empty()) {
                instant = true;
                break;
            }
        }
    }
    if (!instant)
        ++stats.no_instant_decoding;

    const auto mode = scheme.discipline();
    if (mode == FeedbackDiscipline::SemiOnline || mode == FeedbackDiscipline::Offline) {
        ++stats.subgraph_checks;
        const Hypergraph speculative = Hypergraph::from_states(view.shadows());
        const Hypergraph actual = Hypergraph::from_states(truth);
        if (!speculative.is_subgraph_of(actual))
            ++stats.subgraph_violations;
        if (!is_minimal_cover(actual, p.coding_set))
            ++stats.cover_not_minimal_in_true;
    }
}

} // namespace

BlockMetrics run_block(Scheme& scheme, const Sfm& sfm, ErasureChannel& channel, Rng& rng, const RunOptions& options)
{
    const auto N = static_cast<std::size_t>(sfm.receivers());
    scheme.reset(sfm);
    std::vector<ReceiverDecoder> truth = make_decoders(sfm);
    SenderView view(sfm, scheme.delivery());
    view.attach_actual(truth);

    FeedbackReport pending{std::vector<std::vector<int>>(N)};
    ContractStats stats;
    int slot = 0;
    int rounds = 0;

    while (any_unfinished(truth)) {
        if (slot >= options.max_slots)
            throw ContractViolation("block did not complete within " + std::to_string(options.max_slots) + " slots");
        const Packet p = scheme.next_packet(view, rng);
        if (p.vector.is_zero())
            throw ContractViolation("scheme emitted the zero vector");
        ++slot;
        if (options.check_contracts && p.from_cover)
            check_cover_packet(p, scheme, view, truth, stats);

        const std::vector<bool> erased = channel.next_slot();
        if (erased.size() != N)
            throw InvalidInput("channel model and SFM disagree on the receiver count");
        view.record_sent(p, slot);

        SlotRecord rec;
        for (std::size_t n = 0; n < N; ++n) {
            const PacketSet fresh = scheme.delivery() == Delivery::Linear
                                        ? truth[n].deliver(p.vector, slot, erased[n])
                                        : truth[n].deliver_memoryless(p.coding_set, slot, erased[n]);
            if (!erased[n])
                pending.received_slots[n].push_back(slot);
            if (options.log)
                rec.newly_decoded.push_back(fresh);
        }
        if (options.log) {
            rec.slot = slot;
            rec.coding_set = p.coding_set;
            rec.erased = erased;
            options.log->records.push_back(std::move(rec));
        }

        if (scheme.after_transmission(view, p, slot)) {
            view.apply_feedback(pending);
            for (auto& s : pending.received_slots)
                s.clear();
            ++rounds;
            if (options.check_contracts)
                for (std::size_t n = 0; n < N; ++n)
                    if (!view.shadows()[n].same_state(truth[n]))
                        ++stats.shadow_mismatches;
        }
    }

    BlockMetrics m = BlockMetrics::collect(truth, slot, rounds);
    m.contracts = stats;
    return m;
}

BlockMetrics run_block(Scheme& scheme, const Sfm& sfm, const ChannelModel& channel, const RunOptions& options)
{
    ErasureChannel erasures(channel, make_stream({channel.seed(), hash_name("erasures")}));
    Rng rng = make_stream({channel.seed(), hash_name("coefficients")});
    return run_block(scheme, sfm, erasures, rng, options);
}

BlockMetrics perfect_oracle_block(const Sfm& sfm, ErasureChannel& channel, TransmissionLog* log)
{
    const auto N = static_cast<std::size_t>(sfm.receivers());
    std::vector<PacketSet> remaining = sfm.rows();
    BlockMetrics m;
    m.wants = sfm.rows();
    m.decode_slot.assign(N, std::vector<int>(static_cast<std::size_t>(sfm.packets()), 0));

    int slot = 0;
    auto busy = [&] {
        return std::any_of(remaining.begin(), remaining.end(), [](PacketSet s) { return !s.empty(); });
    };
    while (busy()) {
        ++slot;
        const std::vector<bool> erased = channel.next_slot();
        if (erased.size() != N)
            throw InvalidInput("channel model and SFM disagree on the receiver count");
        SlotRecord rec;
        for (std::size_t n = 0; n < N; ++n) {
            PacketSet fresh;
            if (!remaining[n].empty() && !erased[n]) {
                const int k = remaining[n].lowest();
                m.decode_slot[n][k] = slot;
                remaining[n].erase(k);
                fresh.insert(k);
                rec.coding_set |= fresh;
            }
            rec.newly_decoded.push_back(fresh);
        }
        if (log) {
            rec.slot = slot;
            rec.erased = erased;
            log->records.push_back(std::move(rec));
        }
    }
    m.slots_used = slot;
    return m;
}

BlockMetrics perfect_oracle_block(const Sfm& sfm, const ChannelModel& channel)
{
    ErasureChannel erasures(channel, make_stream({channel.seed(), hash_name("erasures")}));
    return perfect_oracle_block(sfm, erasures);
}

BlockMetrics run_scheme_block(SchemeKind kind, const Sfm& sfm, ErasureChannel& channel, Rng& rng,
                              const RunOptions& options)
{
    if (kind == SchemeKind::Perfect)
        return perfect_oracle_block(sfm, channel, options.log);
    auto scheme = make_scheme(kind);
    return run_block(*scheme, sfm, channel, rng, options);
}

// ---------------------------------------------------------------------------
// Instances

Sfm build_a1(int packets)
{
    if (packets < 2)
        throw InvalidInput("A1 needs at least two packets");
    std::vector<PacketSet> rows;
    for (int i = 0; i < packets; ++i)
        for (int j = i + 1; j < packets; ++j)
            rows.push_back(PacketSet{i, j});
    return Sfm(packets, std::move(rows));
}

Sfm build_a2(int packets, int per_packet)
{
    if (packets < 2)
        throw InvalidInput("A2 needs at least two packets");
    if (per_packet < 0)
        throw InvalidInput("per-packet receiver count must be non-negative");
    std::vector<PacketSet> rows;
    for (int k = 0; k < packets; ++k)
        for (int m = 0; m < per_packet; ++m)
            rows.push_back(PacketSet{k});
    for (const auto& pair : build_a1(packets).rows())
        rows.push_back(pair);
    return Sfm(packets, std::move(rows));
}

Sfm build_two_packet_instance(int receivers)
{
    if (receivers < 2)
        throw InvalidInput("need at least two receivers");
    std::vector<PacketSet> rows{PacketSet{0}, PacketSet{1}};
    rows.resize(static_cast<std::size_t>(receivers), PacketSet{0, 1});
    return Sfm(2, std::move(rows));
}

Sfm example_two_receivers()
{
    return Sfm(3, {PacketSet{1, 2}, PacketSet{0, 2}});
}

Sfm example_walkthrough()
{
    return Sfm(6, {PacketSet{0, 3}, PacketSet{1, 4}, PacketSet{2, 5}, PacketSet{0, 1, 2}});
}

// ---------------------------------------------------------------------------
// Exhaustive IDNC completion time

int bruteforce_idnc_min_bct(const Sfm& sfm, const BruteforceLimits& limits)
{
    const int K = sfm.packets();
    const int N = sfm.receivers();
    if (K > limits.max_packets || N > limits.max_receivers)
        throw InstanceTooLarge("exhaustive IDNC search limited to " + std::to_string(limits.max_packets) +
                               " packets and " + std::to_string(limits.max_receivers) + " receivers");
    if (K * N > 64)
        throw InstanceTooLarge("exhaustive IDNC search packs state into 64 bits; K*N must not exceed 64");

    // State: remaining wants of each receiver, K bits apiece.
    auto pack = [&](const std::vector<PacketSet>& rows) {
        std::uint64_t s = 0;
        for (int n = 0; n < N; ++n)
            s |= rows[n].bits() << (n * K);
        return s;
    };
    const std::uint64_t row_mask = (K == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << K) - 1);

    const PacketSet universe = sfm.wanted_by_anyone();
    std::vector<PacketSet> codings;
    for (std::uint64_t m = 1; m <= universe.bits(); ++m)
        if ((m & ~universe.bits()) == 0)
            codings.emplace_back(m);

    const std::uint64_t start = pack(sfm.rows());
    if (start == 0)
        return 0;
    std::unordered_set<std::uint64_t> seen{start};
    std::deque<std::pair<std::uint64_t, int>> frontier{{start, 0}};
    while (!frontier.empty()) {
        const auto [state, depth] = frontier.front();
        frontier.pop_front();
        for (PacketSet m : codings) {
            std::uint64_t next = 0;
            for (int n = 0; n < N; ++n) {
                PacketSet rest((state >> (n * K)) & row_mask);
                if ((rest & m).size() == 1)
                    rest -= m;
                next |= rest.bits() << (n * K);
            }
            if (next == 0)
                return depth + 1;
            if (seen.insert(next).second)
                frontier.emplace_back(next, depth + 1);
        }
    }
    throw ContractViolation("exhaustive IDNC search exhausted its state space without finishing");
}

} // namespace hlnc
