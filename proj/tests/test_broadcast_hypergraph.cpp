#include "hlnc/broadcast.hpp"
#include "hlnc/errors.hpp"
#include "hlnc/hypergraph.hpp"
#include "hlnc/schemes.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace hlnc;

namespace {

std::string fixture(const std::string& name) { return std::string(HLNC_FIXTURE_DIR) + "/" + name; }

std::vector<PacketSet> random_edges(Rng& rng, int vertices, int edges, int max_size)
{
    std::uniform_int_distribution<int> pick(0, vertices - 1);
    std::uniform_int_distribution<int> size(1, std::min(max_size, vertices));
    std::vector<PacketSet> out;
    for (int e = 0; e < edges; ++e) {
        PacketSet s;
        const int want = size(rng);
        while (s.size() < want)
            s.insert(pick(rng));
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST(Sfm, Validation)
{
    EXPECT_THROW(Sfm(0, {PacketSet{}}), InvalidInput);
    EXPECT_THROW(Sfm(65, {PacketSet{}}), InvalidInput);
    EXPECT_THROW(Sfm(3, {}), InvalidInput);
    EXPECT_THROW(Sfm(3, {PacketSet{3}}), InvalidInput);
    const auto s = Sfm::from_rows(4, {{0, 2}, {}, {1, 2, 3}});
    EXPECT_EQ(s.total(), 5);
    EXPECT_EQ(s.w_counts(), (std::vector<int>{2, 0, 3}));
    EXPECT_EQ(s.wanted_by_anyone(), (PacketSet{0, 1, 2, 3}));
    EXPECT_TRUE(s(2, 3));
    EXPECT_FALSE(s(1, 0));
}

TEST(Channel, Validation)
{
    EXPECT_THROW(ChannelModel::uniform(3, 1.0, 1), InvalidInput);
    EXPECT_THROW(ChannelModel::uniform(3, -0.1, 1), InvalidInput);
    EXPECT_THROW(ChannelModel::uniform(0, 0.2, 1), InvalidInput);
    EXPECT_NO_THROW(ChannelModel::uniform(3, 0.0, 1));
}

TEST(Channel, SfmDensityMatchesErasureProbability)
{
    const auto model = ChannelModel::uniform(200, 0.3, 11);
    Rng rng = make_stream({11});
    const Sfm s = generate_sfm(50, 200, model, rng);
    const double frac = s.total() / 10000.0;
    // binomial sd = sqrt(0.21 / 10000) ~ 0.0046
    EXPECT_NEAR(frac, 0.3, 0.02);
    EXPECT_THROW(generate_sfm(50, 100, model, rng), InvalidInput);
}

TEST(Channel, SameStreamSamePattern)
{
    const auto model = ChannelModel::uniform(5, 0.4, 3);
    ErasureChannel a(model, make_stream({3, 9}));
    ErasureChannel b(model, make_stream({3, 9}));
    for (int s = 0; s < 20; ++s)
        EXPECT_EQ(a.next_slot(), b.next_slot());
    ErasureChannel clean(ChannelModel::uniform(5, 0.0, 3), make_stream({1}));
    for (int s = 0; s < 20; ++s)
        for (bool e : clean.next_slot())
            EXPECT_FALSE(e);
}

TEST(Decoder, LinearAndMemoryless)
{
    ReceiverDecoder r(4, PacketSet{1, 2});
    EXPECT_EQ(r.has(), (PacketSet{0, 3}));
    EXPECT_EQ(r.deliver(CodingVector::xor_of(4, {0, 1, 2}), 1, false), PacketSet{});
    EXPECT_EQ(r.wants_now(), (PacketSet{1, 2}));
    EXPECT_EQ(r.deliver(CodingVector::unit(4, 1), 2, true), PacketSet{});
    EXPECT_THROW(r.deliver(CodingVector::unit(4, 1), 2, false), InvalidInput);
    EXPECT_EQ(r.deliver(CodingVector::unit(4, 1), 3, false), (PacketSet{1, 2}));
    EXPECT_EQ(r.decode_slot(1), 3);
    EXPECT_EQ(r.decode_slot(2), 3);
    EXPECT_TRUE(r.finished());
    EXPECT_EQ(r.completion_slot(), 3);

    ReceiverDecoder m(4, PacketSet{1, 2});
    EXPECT_EQ(m.deliver_memoryless({1, 2}, 1, false), PacketSet{});
    EXPECT_EQ(m.knowledge().rank(), 2); // discarded
    EXPECT_EQ(m.deliver_memoryless({0, 2}, 2, false), PacketSet{2});
    EXPECT_EQ(m.deliver_memoryless({1, 2}, 3, false), PacketSet{1});
}

TEST(Metrics, ApddFromHandBuiltBlock)
{
    BlockMetrics m;
    m.wants = {PacketSet{0, 1}, PacketSet{}, PacketSet{2}};
    m.decode_slot = {{1, 3, 0}, {0, 0, 0}, {0, 0, 2}};
    const auto d = apdd(m);
    EXPECT_EQ(d.overall, Rational(6, 3));
    EXPECT_EQ(*d.per_receiver[0], Rational(2, 1));
    EXPECT_FALSE(d.per_receiver[1].has_value());
    EXPECT_EQ(completion_slots(m), (std::vector<int>{3, 0, 2}));
    EXPECT_EQ(bct(m), 3);

    m.decode_slot[2][2] = 0;
    EXPECT_THROW(apdd(m), IncompleteBlock);
    BlockMetrics none;
    none.wants = {PacketSet{}};
    none.decode_slot = {{0}};
    EXPECT_THROW(apdd(none), InvalidInput);
}

TEST(Log, JsonLinesAreOneBased)
{
    TransmissionLog log;
    log.records.push_back({1, PacketSet{0, 2}, {false, true}, {PacketSet{2}, PacketSet{}}});
    std::ostringstream os;
    log.write_jsonl(os, "rlnc", 2);
    const auto j = nlohmann::json::parse(os.str());
    EXPECT_EQ(j["slot"], 1);
    EXPECT_EQ(j["coding_set"], nlohmann::json({1, 3}));
    EXPECT_EQ(j["erased"], nlohmann::json({0, 1}));
    EXPECT_EQ(j["decoded"][0], nlohmann::json({3}));
    EXPECT_EQ(j["scheme"], "rlnc");
}

TEST(Hypergraph, WalkthroughCover)
{
    const auto h = Hypergraph::from_sfm(example_walkthrough());
    const auto vc = minimal_vertex_cover(h);
    EXPECT_EQ(vc.cover, (PacketSet{0, 1, 2}));
    EXPECT_EQ(single_incidence_receivers(h, vc.cover), (std::vector<int>{0, 1, 2}));
    EXPECT_THROW(minimal_vertex_cover(Hypergraph{}), InvalidInput);
    EXPECT_THROW(Hypergraph(std::vector<PacketSet>{PacketSet{}}), InvalidInput);
}

// The greedy cover is a cover, no vertex can be dropped, and some edge
// meets it once; minimality judged against every subset of the vertices.
TEST(Hypergraph, GreedyCoverIsMinimalAgainstEnumeration)
{
    Rng rng = make_stream({21});
    for (int trial = 0; trial < 400; ++trial) {
        const auto edges = random_edges(rng, 3 + trial % 8, 1 + trial % 7, 4);
        const Hypergraph h(edges);
        const auto vc = minimal_vertex_cover(h);
        const auto all = oracle::all_covers(edges, h.vertices());
        ASSERT_NE(std::find(all.begin(), all.end(), vc.cover), all.end());
        for (const auto& other : all)
            ASSERT_FALSE(other != vc.cover && other.is_subset_of(vc.cover)) << "proper sub-cover exists";
        ASSERT_TRUE(is_minimal_cover(h, vc.cover));
        ASSERT_FALSE(single_incidence_receivers(h, vc.cover).empty());
    }
}

TEST(Hypergraph, SubgraphRelation)
{
    const Hypergraph big({PacketSet{0, 1}, PacketSet{2, 3}});
    const Hypergraph small({PacketSet{0}, PacketSet{2, 3}});
    EXPECT_TRUE(small.is_subgraph_of(big));
    EXPECT_FALSE(big.is_subgraph_of(small));
    EXPECT_FALSE(Hypergraph({PacketSet{0}}).is_subgraph_of(big));
}

TEST(StrongColoring, AgreesWithBruteForce)
{
    Rng rng = make_stream({33});
    for (int trial = 0; trial < 300; ++trial) {
        const auto edges = random_edges(rng, 3 + trial % 6, 1 + trial % 6, 3);
        const Hypergraph h(edges);
        for (int colors = 1; colors <= 4; ++colors) {
            const auto got = strong_coloring_bruteforce(h, colors);
            ASSERT_EQ(got.has_value(), oracle::strong_colorable_bruteforce(edges, h.vertices(), colors));
            if (got) {
                ASSERT_TRUE(is_strong_coloring(h, *got));
                ASSERT_LE(static_cast<int>(got->classes.size()), colors);
                PacketSet all;
                for (const auto& c : got->classes)
                    all |= c;
                ASSERT_EQ(all, h.vertices());
            }
        }
    }
}

TEST(StrongColoring, Limits)
{
    std::vector<PacketSet> edges;
    for (int v = 0; v < 21; v += 3)
        edges.push_back(PacketSet{v, v + 1, v + 2});
    EXPECT_THROW(strong_coloring_bruteforce(Hypergraph(edges), 3), InstanceTooLarge);
    EXPECT_THROW(strong_coloring_bruteforce(Hypergraph({PacketSet{0}}), 0), InvalidInput);
}

TEST(PerfectSolution, Basics)
{
    EXPECT_TRUE(perfect_solution_exists(Sfm::from_rows(3, {{}, {}})).exists);
    EXPECT_THROW(perfect_solution_exists(Sfm::from_rows(3, {{0}, {1, 2}})), NotSupported);
    // triangle of pairs needs three colors, two are too few
    EXPECT_FALSE(perfect_solution_exists(build_a1(3)).exists);
    const auto ok = perfect_solution_exists(Sfm::from_rows(4, {{0, 1}, {2, 3}, {0, 3}}));
    ASSERT_TRUE(ok.exists);
    EXPECT_EQ(ok.coding_sets.size(), 2U);
}

TEST(EdgeList, ParseAndWrite)
{
    const auto edges = parse_edge_list("# comment\n1 4\n\n2 5 # trailing\n");
    EXPECT_EQ(edges, (std::vector<PacketSet>{PacketSet{0, 3}, PacketSet{1, 4}}));
    EXPECT_THROW(parse_edge_list("1 x\n"), InvalidInput);
    EXPECT_THROW(parse_edge_list("0 1\n"), InvalidInput);
    EXPECT_THROW(parse_edge_list("65\n"), InvalidInput);
    std::ostringstream os;
    write_edge_list(os, edges);
    EXPECT_EQ(parse_edge_list(os.str()), edges);
}

TEST(EdgeList, WalkthroughFixture)
{
    std::ifstream in(fixture("walkthrough.txt"));
    ASSERT_TRUE(in);
    const auto rows = parse_edge_list(in);
    EXPECT_EQ(Sfm(6, rows).rows(), example_walkthrough().rows());
}
