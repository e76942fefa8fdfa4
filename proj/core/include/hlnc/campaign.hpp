#pragma once

#include "hlnc/broadcast.hpp"
#include "hlnc/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hlnc {

/// Rows produced from closed forms rather than simulation. Each block's
/// SFM is fed to the per-SFM expected-APDD expression, so these rows are
/// exact expectations at the campaign's N, on the same SFMs the simulated
/// schemes see.
inline constexpr std::string_view kLowerBoundRow = "lower-bound";
inline constexpr std::string_view kRlncFormulaRow = "rlnc-formula";

struct Campaign {
    /// Simulated scheme names plus optional "lower-bound" / "rlnc-formula".
    std::vector<std::string> schemes;
    int packets = 15;
    std::vector<int> receivers;
    double erasure_prob = 0.2;
    /// Optional per-receiver probabilities; requires a single N.
    std::vector<double> per_receiver_erasure;
    long blocks = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    bool check_contracts = true;
    /// Keep the transmission log of block 0 for every (scheme, N).
    bool log_first_block = false;

    /// Throws InvalidInput describing the first problem found.
    void validate() const;
};

/// Named presets: "fig2", "fig4", "fig5". Throws InvalidInput otherwise.
Campaign campaign_preset(std::string_view name);

struct ResultRow {
    std::string scheme;
    int packets = 0;
    int receivers = 0;
    double erasure_prob = 0.0;
    double mean_apdd = 0.0;
    double ci95 = 0.0; // half-width, normal approximation over per-block APDD
    double mean_bct = 0.0;
    double mean_feedback_rounds = 0.0;
    long blocks = 0; // blocks that entered the averages

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Per (scheme, N) bookkeeping for the structured output.
struct CellDetail {
    std::string scheme;
    int receivers = 0;
    long blocks_run = 0;
    long blocks_excluded = 0; // nobody wanted anything after the uncoded round
    ContractStats contracts;
    /// Analytic rows with one P_e: the large-N closed form.
    std::optional<double> large_n_approx;
    std::optional<TransmissionLog> first_block_log;
};

struct CampaignResult {
    Campaign config;
    std::vector<ResultRow> rows;
    std::vector<CellDetail> details;

    const ResultRow* find(std::string_view scheme, int receivers) const;
    ContractStats total_contracts() const;
};

/// Runs every (scheme, N) cell. Each block draws its SFM and erasure
/// pattern from streams keyed by (seed, N, block), shared by all schemes,
/// and its coefficients from a stream that also keys on the scheme, so the
/// output does not depend on the worker count.
CampaignResult run_campaign(const Campaign& c);

inline constexpr std::string_view kCsvHeader =
    "scheme,K,N,P_e,mean_apdd,ci95_half_width,mean_bct,mean_feedback_rounds,blocks";

/// Throws InvalidInput on an empty row set.
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& is);
/// JSON document with the campaign config, rows and per-cell details.
void write_structured(std::ostream& os, const CampaignResult& result);

} // namespace hlnc
