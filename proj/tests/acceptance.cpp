// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// values and the wall time. Exit status is 0 when every criterion passes,
// or when the only failures are criteria listed with --known-red; those
// still print FAIL.
//
//   hlnc-acceptance [--blocks N] [--out-dir DIR] [--only 1,5,...] [--known-red 5]

#include "hlnc/analytics.hpp"
#include "hlnc/campaign.hpp"
#include "hlnc/hypergraph.hpp"
#include "hlnc/schemes.hpp"

#include "support/oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hlnc;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_seconds;
    std::function<void(Outcome&)> body;
};

struct Shared {
    long blocks = 10000;
    std::string out_dir;
    ContractStats hlnc_contracts; // filled by criteria 3, 5 and 7
    bool contracts_seen[3] = {false, false, false};
};

ContractStats hlnc_contracts_of(const CampaignResult& r)
{
    ContractStats s;
    for (const auto& d : r.details)
        if (d.scheme.rfind("hlnc", 0) == 0)
            s += d.contracts;
    return s;
}

void save(const Shared& sh, const std::string& name, const CampaignResult& r)
{
    if (sh.out_dir.empty())
        return;
    std::ofstream f(sh.out_dir + "/" + name);
    write_csv(f, r.rows);
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

std::string pct(double x)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << 100.0 * x << "%";
    return os.str();
}

BlockMetrics erasure_free(SchemeKind kind, const Sfm& sfm, TransmissionLog* log = nullptr)
{
    const auto model = ChannelModel::uniform(sfm.receivers(), 0.0, 1);
    ErasureChannel ch(model, make_stream({1, 1}));
    Rng rng = make_stream({1, 2});
    RunOptions opts;
    opts.log = log;
    return run_scheme_block(kind, sfm, ch, rng, opts);
}

Rational scripted(const Sfm& sfm, std::vector<CodingVector> script)
{
    ScriptedScheme s(std::move(script));
    return apdd(run_block(s, sfm, ChannelModel::uniform(sfm.receivers(), 0.0, 1))).overall;
}

// 1 -------------------------------------------------------------------------
void worked_examples(Outcome& o)
{
    const Sfm ex = example_two_receivers();
    const auto s1 = scripted(ex, {CodingVector::xor_of(3, {0, 1}), CodingVector::unit(3, 2)});
    const auto s2 = scripted(ex, {CodingVector::from_bytes(std::vector<std::uint8_t>{1, 1, 1}),
                                  CodingVector::from_bytes(std::vector<std::uint8_t>{1, 2, 3})});
    TransmissionLog log;
    const auto m = erasure_free(SchemeKind::HlncFull, example_walkthrough(), &log);
    const auto d = apdd(m).overall;
    std::vector<PacketSet> sets;
    for (const auto& r : log.records)
        sets.push_back(r.coding_set);
    const std::vector<PacketSet> expect{PacketSet{0, 1, 2}, PacketSet{0, 3, 4, 5}, PacketSet{1}};
    o.detail << "scheme-1 " << s1 << ", scheme-2 " << s2 << ", walkthrough U=" << bct(m) << " D=" << d;
    o.require(s1 == Rational(3, 2), "scheme-1 = 3/2");
    o.require(s2 == Rational(2, 1), "scheme-2 = 2");
    o.require(bct(m) == 3, "U = 3");
    o.require(d == Rational(17, 9), "D = 17/9");
    o.require(sets == expect, "coding sets {1,2,3} {1,4,5,6} {2}");
}

// 2 -------------------------------------------------------------------------
void receiver_scale(Outcome& o, long blocks)
{
    const Sfm sfm(3, {PacketSet{0, 1, 2}});
    const auto model = ChannelModel::uniform(1, 0.2, 2);
    double sum_perfect = 0.0;
    double sum_rlnc = 0.0;
    for (long b = 0; b < blocks; ++b) {
        const auto key = static_cast<std::uint64_t>(b);
        ErasureChannel c1(model, make_stream({2, key}));
        Rng r1 = make_stream({3, key});
        sum_perfect += apdd(run_scheme_block(SchemeKind::Perfect, sfm, c1, r1)).overall.value();
        ErasureChannel c2(model, make_stream({2, key}));
        Rng r2 = make_stream({4, key});
        sum_rlnc += apdd(run_scheme_block(SchemeKind::Rlnc, sfm, c2, r2)).overall.value();
    }
    const double p = sum_perfect / static_cast<double>(blocks);
    const double r = sum_rlnc / static_cast<double>(blocks);
    o.detail << blocks << " blocks: perfect " << p << " (target 2.5, off " << pct(rel(p, 2.5)) << "), rlnc " << r
             << " (target 3.75, off " << pct(rel(r, 3.75)) << ")";
    o.require(rel(p, 2.5) <= 0.01, "perfect within 1%");
    o.require(rel(r, 3.75) <= 0.01, "rlnc within 1%");
}

// 3 -------------------------------------------------------------------------
void fig2(Outcome& o, Shared& sh)
{
    Campaign c = campaign_preset("fig2");
    c.blocks = std::max(sh.blocks, 10000L);
    c.threads = 0;
    const auto r = run_campaign(c);
    save(sh, "fig2.csv", r);
    sh.hlnc_contracts += hlnc_contracts_of(r);
    sh.contracts_seen[0] = true;
    for (auto [scheme, target] : {std::pair{"perfect", 3.0}, std::pair{"rlnc", 4.75}}) {
        double lo = 1e300;
        double hi = 0.0;
        o.detail << scheme << ":";
        for (int n : c.receivers) {
            const double v = r.find(scheme, n)->mean_apdd;
            o.detail << " N=" << n << " " << std::setprecision(5) << v;
            o.require(rel(v, target) <= 0.02, std::string(scheme) + " N=" + std::to_string(n) + " within 2%");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        o.detail << " (spread " << pct(hi / lo - 1.0) << ") ";
        o.require(hi / lo - 1.0 <= 0.02, std::string(scheme) + " flat within 2%");
    }
    o.detail << c.blocks << " blocks";
}

// 4 -------------------------------------------------------------------------
void ratio_property(Outcome& o)
{
    int checked = 0;
    for (int pe10 = 0; pe10 <= 9; ++pe10) {
        const double pe = pe10 / 10.0;
        double prev = 0.0;
        for (int w = 1; w <= 50; ++w) {
            const double ratio = rlnc_receiver(w, pe) / lower_bound_receiver(w, pe);
            const double expect = 2.0 * w / (w + 1.0);
            o.require(std::abs(ratio - expect) < 1e-12, "ratio = 2w/(w+1)");
            // w = 1 gives exactly 1, the closed lower end of the range
            o.require(w == 1 ? ratio == 1.0 : (ratio > 1.0 && ratio < 2.0), "ratio in (1, 2)");
            o.require(ratio > prev, "monotone in w");
            prev = ratio;
            ++checked;
        }
    }
    o.detail << checked << " (w, pe) pairs; ratio at w=1 is 1, at w=50 is " << 100.0 / 51.0;
}

// 5 and 6 share one campaign ------------------------------------------------
struct Fig4 {
    Campaign config;
    CampaignResult result;
};

const Fig4& fig4_data(Shared& sh)
{
    static std::optional<Fig4> cached;
    if (!cached) {
        Campaign c = campaign_preset("fig4");
        c.blocks = sh.blocks;
        c.threads = 0;
        cached = Fig4{c, run_campaign(c)};
        save(sh, "fig4.csv", cached->result);
        sh.hlnc_contracts += hlnc_contracts_of(cached->result);
        sh.contracts_seen[1] = true;
    }
    return *cached;
}

void fig4(Outcome& o, Shared& sh)
{
    const auto& f = fig4_data(sh);
    const auto& r = f.result;
    double prev_gidnc = 0.0;
    double lo = 1e300;
    double hi = 0.0;
    for (int n : f.config.receivers) {
        const auto* lb = r.find("lower-bound", n);
        const auto* full = r.find("hlnc-full", n);
        const auto* semi = r.find("hlnc-semi", n);
        const auto* off = r.find("hlnc-offline", n);
        const auto* rl = r.find("rlnc", n);
        const auto* gi = r.find("gidnc", n);
        const std::string at = " N=" + std::to_string(n);
        o.require(lb->mean_apdd < full->mean_apdd, "lower-bound < hlnc-full" + at);
        o.require(std::abs(full->mean_apdd - semi->mean_apdd) <= full->ci95 + semi->ci95,
                  "hlnc-full vs hlnc-semi CIs overlap" + at);
        o.require(semi->mean_apdd <= off->mean_apdd, "hlnc-semi <= hlnc-offline" + at);
        o.require(off->mean_apdd < rl->mean_apdd, "hlnc-offline < rlnc" + at);
        o.require(gi->mean_apdd > prev_gidnc, "gidnc strictly increasing" + at);
        prev_gidnc = gi->mean_apdd;
        lo = std::min(lo, full->mean_apdd);
        hi = std::max(hi, full->mean_apdd);
    }
    const int n_lo = f.config.receivers.front();
    const int n_hi = f.config.receivers.back();
    o.detail << std::setprecision(4) << "N=" << n_lo << "/" << n_hi << ": lower-bound "
             << r.find("lower-bound", n_lo)->mean_apdd << "/" << r.find("lower-bound", n_hi)->mean_apdd
             << ", hlnc-full " << r.find("hlnc-full", n_lo)->mean_apdd << "/" << r.find("hlnc-full", n_hi)->mean_apdd
             << ", hlnc-semi " << r.find("hlnc-semi", n_lo)->mean_apdd << "/" << r.find("hlnc-semi", n_hi)->mean_apdd
             << ", hlnc-offline " << r.find("hlnc-offline", n_lo)->mean_apdd << "/"
             << r.find("hlnc-offline", n_hi)->mean_apdd << ", rlnc " << r.find("rlnc", n_lo)->mean_apdd << "/"
             << r.find("rlnc", n_hi)->mean_apdd << ", gidnc " << r.find("gidnc", n_lo)->mean_apdd << "/"
             << r.find("gidnc", n_hi)->mean_apdd << "; hlnc-full spread over N " << pct(hi / lo - 1.0) << ", "
             << f.config.blocks << " blocks";
    o.require(hi / lo - 1.0 <= 0.05, "hlnc-full within 5% of flat");
}

void fig5(Outcome& o, Shared& sh)
{
    // fig5's schemes are a subset of fig4's with identical streams, so the
    // rows are the same numbers; reuse them.
    const auto& f = fig4_data(sh);
    const auto& r = f.result;
    double prev = 1.0;
    std::vector<double> red;
    for (int n : f.config.receivers) {
        const double full = r.find("hlnc-full", n)->mean_feedback_rounds;
        const double semi = r.find("hlnc-semi", n)->mean_feedback_rounds;
        const double reduction = 1.0 - semi / full;
        red.push_back(reduction);
        const std::string at = " N=" + std::to_string(n);
        o.require(semi <= full, "semi <= full" + at);
        o.require(reduction <= prev, "reduction non-increasing" + at);
        prev = reduction;
    }
    o.detail << "reduction by N:";
    for (std::size_t i = 0; i < red.size(); ++i)
        o.detail << " " << f.config.receivers[i] << ":" << pct(red[i]);
    o.require(red.front() >= 0.15, "reduction at smallest N >= 15%");
    o.require(red.back() < 0.05, "reduction at largest N < 5%");
}

// 7 -------------------------------------------------------------------------
void two_packet_instance(Outcome& o, Shared& sh)
{
    const Sfm sfm = build_two_packet_instance(100);
    const auto uncoded = scripted(sfm, {CodingVector::unit(2, 0), CodingVector::unit(2, 1)});
    const auto full = erasure_free(SchemeKind::HlncFull, sfm);
    const auto rl = erasure_free(SchemeKind::Rlnc, sfm);
    sh.hlnc_contracts += full.contracts;
    sh.contracts_seen[2] = true;
    const auto d_full = apdd(full).overall;
    const auto d_rlnc = apdd(rl).overall;
    o.detail << "uncoded " << uncoded << ", hlnc-full " << d_full << ", rlnc " << d_rlnc
             << " ((1+1+98*4)/198; 395/198 would need an extra slot)";
    o.require(uncoded == Rational(3, 2), "uncoded = 3/2");
    o.require(d_full == Rational(197, 99), "hlnc-full = 197/99");
    o.require(d_rlnc == Rational(197, 99), "rlnc = 197/99");
    double prev = 0.0;
    o.detail << "; ratio";
    for (int n : {10, 100, 1000, 10000}) {
        const double ratio = apdd(erasure_free(SchemeKind::HlncFull, build_two_packet_instance(n))).overall.value() / 1.5;
        o.detail << " N=" << n << ":" << std::setprecision(6) << ratio;
        o.require(ratio > prev && ratio < 4.0 / 3.0, "ratio increasing below 4/3");
        prev = ratio;
    }
    o.require(std::abs(prev - 4.0 / 3.0) < 1e-3, "ratio -> 4/3");
}

// 8 -------------------------------------------------------------------------
void pair_instance(Outcome& o)
{
    const Sfm a1 = build_a1(4);
    const int idnc = bruteforce_idnc_min_bct(a1);
    const int hl = bct(erasure_free(SchemeKind::HlncFull, a1));
    const int rl = bct(erasure_free(SchemeKind::Rlnc, a1));
    o.detail << "IDNC optimum " << idnc << " (ceil(log2 4)+1 = 3), hlnc-full " << hl << ", rlnc " << rl;
    o.require(idnc == 3, "IDNC optimum = 3");
    o.require(hl == 2 && rl == 2, "throughput-optimal schemes finish in 2");
}

// 9 -------------------------------------------------------------------------
void perfect_equivalence(Outcome& o)
{
    Rng rng = make_stream({9});
    std::uniform_int_distribution<int> vcount(4, 12);
    int agree = 0;
    int yes = 0;
    const int total = 200;
    for (int t = 0; t < total; ++t) {
        const int v = vcount(rng);
        std::uniform_int_distribution<int> ecount(2, 2 + v / 2);
        std::uniform_int_distribution<int> vert(0, v - 1);
        std::vector<PacketSet> rows;
        const int e = ecount(rng);
        for (int i = 0; i < e; ++i) {
            PacketSet s;
            while (s.size() < 3)
                s.insert(vert(rng));
            rows.push_back(s);
        }
        const Sfm sfm(v, rows);
        const bool lib = perfect_solution_exists(sfm).exists;
        const bool ref = oracle::perfect_sequence_search(rows).has_value();
        agree += lib == ref;
        yes += ref;
    }
    o.detail << agree << "/" << total << " agree (" << yes << " with a perfect sequence, " << total - yes
             << " without)";
    o.require(agree == total, "100% agreement");
    o.require(yes > 0 && yes < total, "both outcomes exercised");
}

// 10 ------------------------------------------------------------------------
void contracts(Outcome& o, const Shared& sh)
{
    const auto& s = sh.hlnc_contracts;
    o.detail << s.cover_packets << " HLNC cover packets checked: not innovative " << s.not_innovative
             << ", no instant decoding " << s.no_instant_decoding << ", speculative H not a subgraph "
             << s.subgraph_violations << ", shadow mismatch " << s.shadow_mismatches
             << "; cover not minimal in true H (informational) " << s.cover_not_minimal_in_true;
    o.require(sh.contracts_seen[0] && sh.contracts_seen[1] && sh.contracts_seen[2], "criteria 3, 5, 7 ran");
    o.require(s.cover_packets > 0, "packets were checked");
    o.require(s.violations() == 0, "zero violations");
}

// 11 ------------------------------------------------------------------------
void pattern_checks(Outcome& o)
{
    for (int w = 1; w <= 5; ++w) {
        const auto pa = oracle::perfect_apdd_by_patterns(w, 0, 1, w);
        o.require(pa.mass == Rational(1, 1) && pa.expectation == Rational(w + 1, 2),
                  "w=" + std::to_string(w) + " pattern average = (w+1)/2");
        o.require(lower_bound_receiver(w, 0.0) == Rational(w + 1, 2).value(), "closed form agrees");
    }
    Rng rng = make_stream({11});
    const auto est = estimate_sum_sq_ratio(15, 100, 0.2, 20000, rng);
    o.detail << "pattern averages exact for w=1..5; E[sum w^2/sum w] = " << est.mean << " +- " << est.std_error
             << " (target 3.8, off " << pct(rel(est.mean, 3.8)) << ")";
    o.require(rel(est.mean, 3.8) <= 0.02, "MC ratio within 2% of 3.8");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite"};
    Shared sh;
    std::vector<int> only;
    std::vector<int> known_red;
    app.add_option("--blocks", sh.blocks, "Blocks per campaign cell (criteria 3, 5, 6)");
    app.add_option("--out-dir", sh.out_dir, "Write campaign CSVs here");
    app.add_option("--only", only, "Run a subset of criteria")->delimiter(',');
    app.add_option("--known-red", known_red, "Criteria whose failure does not fail the exit status")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {1, "worked examples", 1.0, worked_examples},
        {2, "receiver-scale closed forms", 10.0, [](Outcome& o) { receiver_scale(o, 100000); }},
        {3, "fig2 reproduction", 300.0, [&](Outcome& o) { fig2(o, sh); }},
        {4, "RLNC / lower-bound ratio", 1.0, ratio_property},
        {5, "fig4 ordering", 900.0, [&](Outcome& o) { fig4(o, sh); }},
        {6, "fig5 feedback reduction", 300.0, [&](Outcome& o) { fig5(o, sh); }},
        {7, "two-packet instance", 1.0, [&](Outcome& o) { two_packet_instance(o, sh); }},
        {8, "IDNC pair instance", 60.0, pair_instance},
        {9, "perfect-solution equivalence", 120.0, perfect_equivalence},
        {10, "HLNC packet contract", 1.0, [&](Outcome& o) { contracts(o, sh); }},
        {11, "pattern enumeration and MC ratio", 30.0, pattern_checks},
    };
    const std::set<int> wanted(only.begin(), only.end());

    int failed = 0;
    int unexpected = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id))
            continue;
        if (c.id == 10 && !wanted.empty() && !(wanted.count(3) && wanted.count(5) && wanted.count(7)))
            continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream limit;
        limit << "runtime over " << c.limit_seconds << " s";
        o.require(secs <= c.limit_seconds, limit.str());
        for (const auto& f : o.failures)
            o.detail << " [failed: " << f << "]";
        if (!o.pass) {
            ++failed;
            if (std::find(known_red.begin(), known_red.end(), c.id) == known_red.end())
                ++unexpected;
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ", "
                  << std::fixed << std::setprecision(2) << secs << " s): " << std::defaultfloat
                  << std::setprecision(6) << o.detail.str() << std::endl;
    }
    if (failed == 0)
        std::cout << "all criteria passed" << std::endl;
    else
        std::cout << failed << " criteria failed, " << failed - unexpected << " of them known red" << std::endl;
    return unexpected == 0 ? 0 : 1;
}
