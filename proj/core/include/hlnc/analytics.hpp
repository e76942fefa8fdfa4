#pragma once

#include "hlnc/rng.hpp"

#include <span>
#include <vector>

namespace hlnc {

// Closed-form expected APDD of the perfect (lower-bound) scheme and of RLNC.
// w is a wanted-packet count, pe an erasure probability in [0, 1).

/// (w + 1) / (2 (1 - pe))
double lower_bound_receiver(int w, double pe);
/// sum_n (w_n^2 + w_n) / (2 (1 - pe_n)) / sum_n w_n
double lower_bound_sfm(std::span<const int> w, std::span<const double> pe);
double lower_bound_sfm(std::span<const int> w, double pe);

/// w / (1 - pe)
double rlnc_receiver(int w, double pe);
/// sum_n w_n^2 / (1 - pe_n) / sum_n w_n
double rlnc_sfm(std::span<const int> w, std::span<const double> pe);
double rlnc_sfm(std::span<const int> w, double pe);

/// Large-N approximations after one uncoded round of K packets:
/// (K pe - pe + 2) / (2 - 2 pe) and (K pe - pe + 1) / (1 - pe).
double lower_bound_approx(int packets, double pe);
double rlnc_approx(int packets, double pe);

/// E[sum w^2 / sum w] with w_n ~ B(K, pe) i.i.d.; its large-N value is K pe - pe + 1.
double sum_sq_ratio_approx(int packets, double pe);

struct SystemParams {
    int packets = 15;
    int receivers = 100;
    double erasure_prob = 0.2;
    /// Optional per-receiver probabilities; when set, system_bounds_bracket
    /// evaluates at their min and max.
    std::vector<double> per_receiver;
};

struct RatioEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
    long resampled = 0; // all-zero draws thrown away
};

/// Monte-Carlo estimate of E[sum w^2 / sum w]; draws with sum w = 0 are
/// redrawn.
RatioEstimate estimate_sum_sq_ratio(int packets, int receivers, double pe, long samples, Rng& rng);

struct SystemBounds {
    double lower_exact_mc = 0.0; // (1 + E[ratio]) / (2 (1 - pe))
    double lower_approx = 0.0;
    double rlnc_exact_mc = 0.0; // E[ratio] / (1 - pe)
    double rlnc_approx = 0.0;
    RatioEstimate ratio;
    /// pe == 0: every w_n is 0, nothing to estimate; the exact fields
    /// hold the approximations' limits.
    bool degenerate = false;
};

SystemBounds system_bounds(const SystemParams& p, long samples, Rng& rng);

struct SystemBoundsBracket {
    SystemBounds at_min_pe;
    SystemBounds at_max_pe;
};

/// Heterogeneous channels: evaluate the homogeneous forms at the smallest
/// and largest per-receiver probability.
SystemBoundsBracket system_bounds_bracket(const SystemParams& p, long samples, Rng& rng);

} // namespace hlnc
