#include "hlnc/campaign.hpp"

#include "hlnc/analytics.hpp"
#include "hlnc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace hlnc {

namespace {

bool is_analytic(std::string_view name) { return name == kLowerBoundRow || name == kRlncFormulaRow; }

double pairwise_sum(const double* first, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += first[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(first, half) + pairwise_sum(first + half, n - half);
}

struct Moments {
    double mean = 0.0;
    double ci95 = 0.0;
};

Moments moments(const std::vector<double>& xs)
{
    Moments m;
    if (xs.empty())
        return m;
    const auto n = xs.size();
    m.mean = pairwise_sum(xs.data(), n) / static_cast<double>(n);
    if (n < 2)
        return m;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
    const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    m.ci95 = 1.96 * std::sqrt(var / static_cast<double>(n));
    return m;
}

double mean_of(const std::vector<double>& xs)
{
    return xs.empty() ? std::numeric_limits<double>::quiet_NaN()
                      : pairwise_sum(xs.data(), xs.size()) / static_cast<double>(xs.size());
}

ChannelModel channel_for(const Campaign& c, int receivers)
{
    if (!c.per_receiver_erasure.empty())
        return ChannelModel(c.per_receiver_erasure, c.seed);
    return ChannelModel::uniform(receivers, c.erasure_prob, c.seed);
}

double reported_pe(const Campaign& c)
{
    if (c.per_receiver_erasure.empty())
        return c.erasure_prob;
    const auto& p = c.per_receiver_erasure;
    return std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
}

Sfm block_sfm(const Campaign& c, const ChannelModel& model, int receivers, long block)
{
    Rng rng = make_stream({c.seed, hash_name("sfm"), static_cast<std::uint64_t>(receivers),
                           static_cast<std::uint64_t>(block)});
    return generate_sfm(c.packets, receivers, model, rng);
}

// One simulated block.
struct BlockOutcome {
    bool excluded = false;
    double apdd = 0.0;
    double bct = 0.0;
    double feedback = 0.0;
    ContractStats contracts;
    std::optional<TransmissionLog> log;
};

BlockOutcome simulate_block(const Campaign& c, SchemeKind kind, int receivers, long block)
{
    const ChannelModel model = channel_for(c, receivers);
    const Sfm sfm = block_sfm(c, model, receivers, block);
    BlockOutcome out;
    if (sfm.total() == 0) {
        out.excluded = true;
        return out;
    }
    const auto n = static_cast<std::uint64_t>(receivers);
    const auto b = static_cast<std::uint64_t>(block);
    ErasureChannel channel(model, make_stream({c.seed, hash_name("erasures"), n, b}));
    Rng coeffs = make_stream({c.seed, hash_name("coefficients"), hash_name(scheme_name(kind)), n, b});

    TransmissionLog log;
    RunOptions opts;
    opts.check_contracts = c.check_contracts;
    if (c.log_first_block && block == 0)
        opts.log = &log;
    const BlockMetrics m = run_scheme_block(kind, sfm, channel, coeffs, opts);
    out.apdd = apdd(m).overall.value();
    out.bct = bct(m);
    out.feedback = m.feedback_rounds;
    out.contracts = m.contracts;
    if (opts.log)
        out.log = std::move(log);
    return out;
}

template <typename Fn>
void parallel_for(long count, int threads, Fn fn)
{
    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<long>(threads, std::max(1L, count)));
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (long i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure)
                    failure = std::current_exception();
                next = count;
            }
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
}

void analytic_cell(const Campaign& c, std::string_view name, int receivers, ResultRow& row, CellDetail& detail)
{
    const bool lower = name == kLowerBoundRow;
    row.mean_bct = std::numeric_limits<double>::quiet_NaN();
    row.mean_feedback_rounds = std::numeric_limits<double>::quiet_NaN();
    const ChannelModel model = channel_for(c, receivers);
    const auto& pe = model.erasure_probs();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(c.blocks));
    for (long b = 0; b < c.blocks; ++b) {
        const Sfm sfm = block_sfm(c, model, receivers, b);
        if (sfm.total() == 0) {
            ++detail.blocks_excluded;
            continue;
        }
        const auto w = sfm.w_counts();
        values.push_back(lower ? lower_bound_sfm(w, pe) : rlnc_sfm(w, pe));
    }
    const Moments m = moments(values);
    row.mean_apdd = values.empty() ? std::numeric_limits<double>::quiet_NaN() : m.mean;
    row.ci95 = m.ci95;
    row.blocks = static_cast<long>(values.size());
    if (c.per_receiver_erasure.empty())
        detail.large_n_approx =
            lower ? lower_bound_approx(c.packets, c.erasure_prob) : rlnc_approx(c.packets, c.erasure_prob);
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InvalidInput("bad number in CSV: '" + std::string(s) + "'");
    return x;
}

template <typename Int>
Int parse_int(std::string_view s)
{
    Int x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InvalidInput("bad integer in CSV: '" + std::string(s) + "'");
    return x;
}

nlohmann::json contracts_json(const ContractStats& s)
{
    return {{"cover_packets", s.cover_packets},
            {"not_innovative", s.not_innovative},
            {"no_instant_decoding", s.no_instant_decoding},
            {"subgraph_checks", s.subgraph_checks},
            {"subgraph_violations", s.subgraph_violations},
            {"cover_not_minimal_in_true", s.cover_not_minimal_in_true},
            {"shadow_mismatches", s.shadow_mismatches},
            {"violations", s.violations()}};
}

nlohmann::json number_or_null(double x)
{
    return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x);
}

} // namespace

void Campaign::validate() const
{
    if (schemes.empty())
        throw InvalidInput("campaign has no schemes");
    for (const auto& s : schemes)
        if (!is_analytic(s))
            parse_scheme(s);
    if (packets < 1 || packets > kMaxPackets)
        throw InvalidInput("block size must be in [1, " + std::to_string(kMaxPackets) + "]");
    if (receivers.empty())
        throw InvalidInput("campaign has no receiver counts");
    for (int n : receivers)
        if (n < 1)
            throw InvalidInput("receiver counts must be positive");
    if (!(erasure_prob >= 0.0 && erasure_prob < 1.0))
        throw InvalidInput("erasure probability must lie in [0, 1)");
    if (!per_receiver_erasure.empty()) {
        if (receivers.size() != 1 || static_cast<int>(per_receiver_erasure.size()) != receivers.front())
            throw InvalidInput("per-receiver erasure probabilities need exactly one N equal to their count");
        for (double p : per_receiver_erasure)
            if (!(p >= 0.0 && p < 1.0))
                throw InvalidInput("erasure probability must lie in [0, 1)");
    }
    if (blocks < 1)
        throw InvalidInput("block count must be positive");
}

Campaign campaign_preset(std::string_view name)
{
    Campaign c;
    c.packets = 15;
    c.erasure_prob = 0.2;
    c.blocks = 10000;
    if (name == "fig2") {
        c.schemes = {"perfect", "rlnc", std::string(kLowerBoundRow), std::string(kRlncFormulaRow)};
        c.receivers = {20, 50, 100};
    } else if (name == "fig4") {
        c.schemes = {std::string(kLowerBoundRow), "hlnc-full", "hlnc-semi", "hlnc-offline", "gidnc", "rlnc",
                     std::string(kRlncFormulaRow)};
        c.receivers = {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    } else if (name == "fig5") {
        c.schemes = {"hlnc-full", "hlnc-semi"};
        c.receivers = {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    } else {
        throw InvalidInput("unknown preset '" + std::string(name) + "' (fig2, fig4, fig5)");
    }
    return c;
}

const ResultRow* CampaignResult::find(std::string_view scheme, int receivers) const
{
    for (const auto& r : rows)
        if (r.scheme == scheme && r.receivers == receivers)
            return &r;
    return nullptr;
}

ContractStats CampaignResult::total_contracts() const
{
    ContractStats s;
    for (const auto& d : details)
        s += d.contracts;
    return s;
}

CampaignResult run_campaign(const Campaign& c)
{
    c.validate();
    CampaignResult result;
    result.config = c;

    struct Cell {
        std::string scheme;
        int receivers;
        std::vector<BlockOutcome> outcomes;
    };
    std::vector<Cell> cells;
    for (const auto& s : c.schemes)
        for (int n : c.receivers)
            cells.push_back({s, n, {}});

    std::vector<std::pair<std::size_t, long>> jobs;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (is_analytic(cells[i].scheme))
            continue;
        cells[i].outcomes.resize(static_cast<std::size_t>(c.blocks));
        for (long b = 0; b < c.blocks; ++b)
            jobs.emplace_back(i, b);
    }
    parallel_for(static_cast<long>(jobs.size()), c.threads, [&](long j) {
        const auto [i, b] = jobs[static_cast<std::size_t>(j)];
        cells[i].outcomes[static_cast<std::size_t>(b)] =
            simulate_block(c, parse_scheme(cells[i].scheme), cells[i].receivers, b);
    });

    for (auto& cell : cells) {
        ResultRow row;
        row.scheme = cell.scheme;
        row.packets = c.packets;
        row.receivers = cell.receivers;
        row.erasure_prob = reported_pe(c);
        CellDetail detail;
        detail.scheme = cell.scheme;
        detail.receivers = cell.receivers;
        detail.blocks_run = c.blocks;
        if (is_analytic(cell.scheme)) {
            analytic_cell(c, cell.scheme, cell.receivers, row, detail);
        } else {
            std::vector<double> apdds, bcts, rounds;
            for (auto& o : cell.outcomes) {
                detail.contracts += o.contracts;
                if (o.log)
                    detail.first_block_log = std::move(o.log);
                if (o.excluded) {
                    ++detail.blocks_excluded;
                    continue;
                }
                apdds.push_back(o.apdd);
                bcts.push_back(o.bct);
                rounds.push_back(o.feedback);
            }
            const Moments m = moments(apdds);
            row.mean_apdd = apdds.empty() ? std::numeric_limits<double>::quiet_NaN() : m.mean;
            row.ci95 = m.ci95;
            row.mean_bct = mean_of(bcts);
            row.mean_feedback_rounds = mean_of(rounds);
            row.blocks = static_cast<long>(apdds.size());
        }
        result.rows.push_back(std::move(row));
        result.details.push_back(std::move(detail));
    }
    return result;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    if (rows.empty())
        throw InvalidInput("refusing to write an empty result table");
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.scheme << ',' << r.packets << ',' << r.receivers << ',' << format_double(r.erasure_prob) << ','
           << format_double(r.mean_apdd) << ',' << format_double(r.ci95) << ',' << format_double(r.mean_bct) << ','
           << format_double(r.mean_feedback_rounds) << ',' << r.blocks << '\n';
}

std::vector<ResultRow> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw InvalidInput("CSV header does not match");
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string_view> f;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 9)
            throw InvalidInput("CSV row has " + std::to_string(f.size()) + " fields, expected 9");
        ResultRow r;
        r.scheme = std::string(f[0]);
        r.packets = parse_int<int>(f[1]);
        r.receivers = parse_int<int>(f[2]);
        r.erasure_prob = parse_double(f[3]);
        r.mean_apdd = parse_double(f[4]);
        r.ci95 = parse_double(f[5]);
        r.mean_bct = parse_double(f[6]);
        r.mean_feedback_rounds = parse_double(f[7]);
        r.blocks = parse_int<long>(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_structured(std::ostream& os, const CampaignResult& result)
{
    if (result.rows.empty())
        throw InvalidInput("refusing to write an empty result table");
    const Campaign& c = result.config;
    nlohmann::json doc;
    doc["config"] = {{"schemes", c.schemes},
                     {"packets", c.packets},
                     {"receivers", c.receivers},
                     {"erasure_prob", c.erasure_prob},
                     {"per_receiver_erasure", c.per_receiver_erasure},
                     {"blocks", c.blocks},
                     {"seed", c.seed},
                     {"check_contracts", c.check_contracts}};
    auto rows = nlohmann::json::array();
    for (const auto& r : result.rows)
        rows.push_back({{"scheme", r.scheme},
                        {"K", r.packets},
                        {"N", r.receivers},
                        {"P_e", r.erasure_prob},
                        {"mean_apdd", number_or_null(r.mean_apdd)},
                        {"ci95_half_width", number_or_null(r.ci95)},
                        {"mean_bct", number_or_null(r.mean_bct)},
                        {"mean_feedback_rounds", number_or_null(r.mean_feedback_rounds)},
                        {"blocks", r.blocks}});
    doc["rows"] = rows;
    auto cells = nlohmann::json::array();
    for (const auto& d : result.details) {
        nlohmann::json j = {{"scheme", d.scheme},
                            {"N", d.receivers},
                            {"blocks_run", d.blocks_run},
                            {"blocks_excluded", d.blocks_excluded},
                            {"contracts", contracts_json(d.contracts)}};
        if (d.large_n_approx)
            j["large_n_approx"] = *d.large_n_approx;
        cells.push_back(std::move(j));
    }
    doc["cells"] = cells;
    doc["contracts_total"] = contracts_json(result.total_contracts());
    os << doc.dump(2) << '\n';
}

} // namespace hlnc
