// hlnc-lab: run broadcast coding campaigns, evaluate closed forms and
// query the exact oracles from the command line.
//
// Exit codes: 0 success, 2 bad configuration or input, 3 a coding
// guarantee was violated, 1 anything else.

#include "hlnc/analytics.hpp"
#include "hlnc/campaign.hpp"
#include "hlnc/errors.hpp"
#include "hlnc/hypergraph.hpp"
#include "hlnc/schemes.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;

struct SimulateArgs {
    std::string preset;
    std::vector<std::string> schemes;
    int packets = 15;
    std::vector<int> receivers;
    std::vector<double> erasure;
    long blocks = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string format = "csv";
    std::string log;
    bool no_checks = false;
};

struct AnalyticArgs {
    std::string formula;
    std::vector<int> w;
    std::vector<double> pe;
    int packets = 15;
    int receivers = 0;
    long samples = 20000;
    std::uint64_t seed = 1;
};

struct OracleArgs {
    std::string check;
    std::string input;
    int colors = 0;
    int packets = 0;
};

std::vector<hlnc::PacketSet> read_rows(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw hlnc::InvalidInput("cannot open '" + path + "'");
    return hlnc::parse_edge_list(in);
}

hlnc::Sfm read_sfm(const OracleArgs& a)
{
    auto rows = read_rows(a.input);
    int k = a.packets;
    if (k == 0)
        for (const auto& r : rows)
            if (!r.empty())
                k = std::max(k, r.indices().back() + 1);
    return hlnc::Sfm(k, std::move(rows));
}

int run_simulate(const SimulateArgs& a, const CLI::App& cmd)
{
    hlnc::Campaign c;
    if (!a.preset.empty())
        c = hlnc::campaign_preset(a.preset);
    if (!a.schemes.empty())
        c.schemes = a.schemes;
    if (cmd.count("--packets") || a.preset.empty())
        c.packets = a.packets;
    if (!a.receivers.empty())
        c.receivers = a.receivers;
    if (a.erasure.size() == 1)
        c.erasure_prob = a.erasure.front();
    else if (a.erasure.size() > 1)
        c.per_receiver_erasure = a.erasure;
    if (cmd.count("--blocks") || a.preset.empty())
        c.blocks = a.blocks;
    c.seed = a.seed;
    c.threads = a.threads;
    c.check_contracts = !a.no_checks;
    c.log_first_block = !a.log.empty();

    const auto result = hlnc::run_campaign(c);

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file)
            throw hlnc::InvalidInput("cannot write '" + a.out + "'");
    }
    std::ostream& os = a.out.empty() ? std::cout : file;
    if (a.format == "csv")
        hlnc::write_csv(os, result.rows);
    else
        hlnc::write_structured(os, result);

    if (!a.log.empty()) {
        std::ofstream log(a.log);
        if (!log)
            throw hlnc::InvalidInput("cannot write '" + a.log + "'");
        for (const auto& d : result.details)
            if (d.first_block_log)
                d.first_block_log->write_jsonl(log, d.scheme, d.receivers);
    }

    const auto contracts = result.total_contracts();
    if (contracts.violations() > 0) {
        std::cerr << "coding guarantee violated: not innovative " << contracts.not_innovative
                  << ", no instant decoding " << contracts.no_instant_decoding << ", subgraph "
                  << contracts.subgraph_violations << ", shadow mismatch " << contracts.shadow_mismatches << '\n';
        return kExitContract;
    }
    return 0;
}

double scalar_pe(const AnalyticArgs& a)
{
    if (a.pe.size() != 1)
        throw hlnc::InvalidInput(a.formula + " takes a single --pe");
    return a.pe.front();
}

int scalar_w(const AnalyticArgs& a)
{
    if (a.w.size() != 1)
        throw hlnc::InvalidInput(a.formula + " takes a single --w");
    return a.w.front();
}

int run_analytic(const AnalyticArgs& a)
{
    if (a.pe.empty())
        throw hlnc::InvalidInput("--pe is required");
    std::cout << std::setprecision(17);
    const auto& f = a.formula;
    if (f == "eq4") {
        std::cout << hlnc::lower_bound_receiver(scalar_w(a), scalar_pe(a)) << '\n';
    } else if (f == "eq8") {
        std::cout << hlnc::rlnc_receiver(scalar_w(a), scalar_pe(a)) << '\n';
    } else if (f == "eq5" || f == "eq9") {
        if (a.w.empty())
            throw hlnc::InvalidInput("--w is required");
        const bool lower = f == "eq5";
        double v = 0.0;
        if (a.pe.size() == 1)
            v = lower ? hlnc::lower_bound_sfm(a.w, a.pe.front()) : hlnc::rlnc_sfm(a.w, a.pe.front());
        else
            v = lower ? hlnc::lower_bound_sfm(a.w, a.pe) : hlnc::rlnc_sfm(a.w, a.pe);
        std::cout << v << '\n';
    } else if (f == "eq7" || f == "eq11") {
        const double pe = scalar_pe(a);
        const bool lower = f == "eq7";
        std::cout << (lower ? hlnc::lower_bound_approx(a.packets, pe) : hlnc::rlnc_approx(a.packets, pe)) << '\n';
        if (a.receivers > 0) {
            hlnc::SystemParams p;
            p.packets = a.packets;
            p.receivers = a.receivers;
            p.erasure_prob = pe;
            hlnc::Rng rng = hlnc::make_stream({a.seed, hlnc::hash_name("analytic")});
            const auto b = hlnc::system_bounds(p, a.samples, rng);
            if (b.degenerate) {
                std::cout << "finite-N: degenerate (pe = 0, nothing is ever wanted)\n";
            } else {
                std::cout << "finite-N (N=" << a.receivers << ", " << b.ratio.samples
                          << " samples): " << (lower ? b.lower_exact_mc : b.rlnc_exact_mc) << " +- "
                          << 1.96 * b.ratio.std_error / (lower ? 2.0 * (1.0 - pe) : 1.0 - pe) << '\n';
            }
        }
    } else {
        throw hlnc::InvalidInput("unknown formula '" + f + "'");
    }
    return 0;
}

std::string one_based(hlnc::PacketSet s)
{
    std::ostringstream os;
    bool first = true;
    s.for_each([&](int k) {
        os << (first ? "" : " ") << k + 1;
        first = false;
    });
    return os.str();
}

int run_oracle(const OracleArgs& a)
{
    if (a.check == "strong-coloring") {
        if (a.colors < 1)
            throw hlnc::InvalidInput("--colors must be positive");
        const hlnc::Hypergraph h(read_rows(a.input));
        const auto col = hlnc::strong_coloring_bruteforce(h, a.colors);
        if (!col) {
            std::cout << "no strong coloring with " << a.colors << " colors\n";
            return 0;
        }
        std::cout << "strong coloring with " << col->classes.size() << " classes\n";
        for (const auto& c : col->classes)
            std::cout << one_based(c) << '\n';
    } else if (a.check == "perfect-solution") {
        const auto sol = hlnc::perfect_solution_exists(read_sfm(a));
        std::cout << (sol.exists ? "perfect solution exists" : "no perfect solution") << '\n';
        for (const auto& c : sol.coding_sets)
            std::cout << one_based(c) << '\n';
    } else if (a.check == "idnc-bct") {
        std::cout << hlnc::bruteforce_idnc_min_bct(read_sfm(a)) << '\n';
    } else {
        throw hlnc::InvalidInput("unknown check '" + a.check + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Broadcast network coding lab"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo campaign");
    simulate->add_option("--preset", sim.preset, "fig2, fig4 or fig5");
    simulate->add_option("--scheme", sim.schemes,
                         "rlnc, hlnc-full, hlnc-semi, hlnc-offline, gidnc, perfect, lower-bound, rlnc-formula")
        ->delimiter(',');
    simulate->add_option("--packets,-K", sim.packets, "Block size K")->check(CLI::Range(1, 64));
    simulate->add_option("--receivers,-N", sim.receivers, "Receiver counts")->delimiter(',');
    simulate->add_option("--erasure", sim.erasure, "P_e, or one value per receiver")->delimiter(',');
    simulate->add_option("--blocks", sim.blocks, "Blocks per (scheme, N)");
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--threads", sim.threads, "Worker threads, 0 for all cores");
    simulate->add_option("--out", sim.out, "Output file (default stdout)");
    simulate->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "structured"}));
    simulate->add_option("--log", sim.log, "Write the first block's transmissions as JSON lines");
    simulate->add_flag("--no-contract-checks", sim.no_checks);

    AnalyticArgs an;
    auto* analytic = app.add_subcommand("analytic", "Evaluate a closed form");
    analytic->add_option("--formula", an.formula)
        ->required()
        ->check(CLI::IsMember({"eq4", "eq5", "eq7", "eq8", "eq9", "eq11"}));
    analytic->add_option("--w", an.w, "Wanted-packet count(s)")->delimiter(',');
    analytic->add_option("--pe", an.pe, "Erasure probability, or one per receiver")->delimiter(',');
    analytic->add_option("--packets,-K", an.packets);
    analytic->add_option("--receivers,-N", an.receivers, "Also estimate the finite-N value");
    analytic->add_option("--samples", an.samples);
    analytic->add_option("--seed", an.seed);

    OracleArgs orc;
    auto* oracle = app.add_subcommand("oracle", "Exact small-instance oracles");
    oracle->add_option("--check", orc.check)
        ->required()
        ->check(CLI::IsMember({"strong-coloring", "perfect-solution", "idnc-bct"}));
    oracle->add_option("--input", orc.input, "One receiver / hyperedge per line, one-based")->required();
    oracle->add_option("--colors", orc.colors);
    oracle->add_option("--packets,-K", orc.packets, "Block size (default: largest index)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate)
            return run_simulate(sim, *simulate);
        if (*analytic)
            return run_analytic(an);
        return run_oracle(orc);
    } catch (const hlnc::ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kExitContract;
    } catch (const hlnc::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hlnc::InstanceTooLarge& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hlnc::NotSupported& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
