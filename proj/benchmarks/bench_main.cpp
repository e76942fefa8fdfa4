#include "hlnc/field.hpp"
#include "hlnc/hypergraph.hpp"
#include "hlnc/linear.hpp"
#include "hlnc/schemes.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hlnc;

static void BM_GfMul(benchmark::State& state)
{
    std::uint8_t a = 3;
    for (auto _ : state) {
        for (unsigned b = 0; b < 256; ++b)
            a = gf_mul(Gf256(a), Gf256(static_cast<std::uint8_t>(b | 1))).value();
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_GfMul);

// Fill a K x K matrix from random dense vectors.
static void BM_Eliminate(benchmark::State& state)
{
    const int k = static_cast<int>(state.range(0));
    Rng rng = make_stream({1});
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<CodingVector> rows;
    for (int i = 0; i < k; ++i) {
        std::vector<std::uint8_t> r(static_cast<std::size_t>(k));
        for (auto& x : r)
            x = static_cast<std::uint8_t>(byte(rng));
        rows.push_back(CodingVector::from_bytes(r));
    }
    for (auto _ : state) {
        KnowledgeMatrix km(k);
        for (const auto& r : rows)
            km.eliminate(r);
        benchmark::DoNotOptimize(km.rank());
    }
}
BENCHMARK(BM_Eliminate)->Arg(15)->Arg(64);

static void BM_MinimalCover(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto model = ChannelModel::uniform(n, 0.2, 1);
    Rng rng = make_stream({2});
    const Hypergraph h = Hypergraph::from_sfm(generate_sfm(15, n, model, rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(minimal_vertex_cover(h));
}
BENCHMARK(BM_MinimalCover)->Arg(20)->Arg(100);

// One full block at K=15, pe=0.2.
static void BM_Block(benchmark::State& state)
{
    const auto kind = static_cast<SchemeKind>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const auto model = ChannelModel::uniform(n, 0.2, 3);
    std::uint64_t block = 0;
    for (auto _ : state) {
        Rng sfm_rng = make_stream({3, block});
        const Sfm sfm = generate_sfm(15, n, model, sfm_rng);
        ErasureChannel channel(model, make_stream({4, block}));
        Rng rng = make_stream({5, block});
        benchmark::DoNotOptimize(run_scheme_block(kind, sfm, channel, rng, {}));
        ++block;
    }
    state.SetLabel(std::string(scheme_name(kind)));
}
BENCHMARK(BM_Block)->ArgsProduct({{static_cast<long>(SchemeKind::Perfect), static_cast<long>(SchemeKind::Rlnc),
                                   static_cast<long>(SchemeKind::HlncFull), static_cast<long>(SchemeKind::HlncSemi),
                                   static_cast<long>(SchemeKind::HlncOffline), static_cast<long>(SchemeKind::Gidnc)},
                                  {20, 100}});
BENCHMARK_MAIN();
