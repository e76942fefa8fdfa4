#include "hlnc/analytics.hpp"

#include "hlnc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hlnc {

namespace {

void check_pe(double pe)
{
    if (!(pe >= 0.0 && pe < 1.0))
        throw InvalidInput("erasure probability must lie in [0, 1), got " + std::to_string(pe));
}

void check_w(int w)
{
    if (w < 1)
        throw InvalidInput("wanted-packet count must be at least 1");
}

template <typename Term>
double weighted_sfm(std::span<const int> w, std::span<const double> pe, Term term)
{
    if (w.size() != pe.size())
        throw InvalidInput("w and pe must have the same length");
    double num = 0.0;
    long den = 0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        if (w[n] < 0)
            throw InvalidInput("wanted-packet counts must be non-negative");
        check_pe(pe[n]);
        num += term(w[n], pe[n]);
        den += w[n];
    }
    if (den == 0)
        throw InvalidInput("at least one receiver must want a packet");
    return num / static_cast<double>(den);
}

} // namespace

double lower_bound_receiver(int w, double pe)
{
    check_w(w);
    check_pe(pe);
    return (w + 1.0) / (2.0 * (1.0 - pe));
}

double lower_bound_sfm(std::span<const int> w, std::span<const double> pe)
{
    return weighted_sfm(w, pe, [](int wn, double p) { return (double(wn) * wn + wn) / (2.0 * (1.0 - p)); });
}

double lower_bound_sfm(std::span<const int> w, double pe)
{
    const std::vector<double> all(w.size(), pe);
    return lower_bound_sfm(w, all);
}

double rlnc_receiver(int w, double pe)
{
    check_w(w);
    check_pe(pe);
    return w / (1.0 - pe);
}

double rlnc_sfm(std::span<const int> w, std::span<const double> pe)
{
    return weighted_sfm(w, pe, [](int wn, double p) { return double(wn) * wn / (1.0 - p); });
}

double rlnc_sfm(std::span<const int> w, double pe)
{
    const std::vector<double> all(w.size(), pe);
    return rlnc_sfm(w, all);
}

double sum_sq_ratio_approx(int packets, double pe)
{
    check_pe(pe);
    return packets * pe - pe + 1.0;
}

double lower_bound_approx(int packets, double pe)
{
    check_pe(pe);
    return (packets * pe - pe + 2.0) / (2.0 - 2.0 * pe);
}

double rlnc_approx(int packets, double pe)
{
    check_pe(pe);
    return (packets * pe - pe + 1.0) / (1.0 - pe);
}

RatioEstimate estimate_sum_sq_ratio(int packets, int receivers, double pe, long samples, Rng& rng)
{
    if (packets < 1 || receivers < 1)
        throw InvalidInput("K and N must be positive");
    if (samples < 1)
        throw InvalidInput("sample count must be positive");
    check_pe(pe);
    if (pe == 0.0)
        throw InvalidInput("E[sum w^2 / sum w] is undefined at pe = 0");

    std::binomial_distribution<int> draw(packets, pe);
    RatioEstimate est;
    double mean = 0.0;
    double m2 = 0.0;
    for (long s = 0; s < samples; ++s) {
        long sum = 0;
        long sum_sq = 0;
        while (true) {
            sum = 0;
            sum_sq = 0;
            for (int n = 0; n < receivers; ++n) {
                const long w = draw(rng);
                sum += w;
                sum_sq += w * w;
            }
            if (sum > 0)
                break;
            ++est.resampled;
        }
        const double x = static_cast<double>(sum_sq) / static_cast<double>(sum);
        const double delta = x - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (x - mean);
    }
    est.samples = samples;
    est.mean = mean;
    est.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
    return est;
}

SystemBounds system_bounds(const SystemParams& p, long samples, Rng& rng)
{
    SystemBounds b;
    b.lower_approx = lower_bound_approx(p.packets, p.erasure_prob);
    b.rlnc_approx = rlnc_approx(p.packets, p.erasure_prob);
    if (p.erasure_prob == 0.0) {
        b.degenerate = true;
        b.lower_exact_mc = b.lower_approx;
        b.rlnc_exact_mc = b.rlnc_approx;
        return b;
    }
    b.ratio = estimate_sum_sq_ratio(p.packets, p.receivers, p.erasure_prob, samples, rng);
    const double q = 1.0 - p.erasure_prob;
    b.lower_exact_mc = (1.0 + b.ratio.mean) / (2.0 * q);
    b.rlnc_exact_mc = b.ratio.mean / q;
    return b;
}

SystemBoundsBracket system_bounds_bracket(const SystemParams& p, long samples, Rng& rng)
{
    if (p.per_receiver.empty())
        throw InvalidInput("bracketing needs per-receiver erasure probabilities");
    const auto [lo, hi] = std::minmax_element(p.per_receiver.begin(), p.per_receiver.end());
    SystemParams at = p;
    SystemBoundsBracket out;
    at.erasure_prob = *lo;
    out.at_min_pe = system_bounds(at, samples, rng);
    at.erasure_prob = *hi;
    out.at_max_pe = system_bounds(at, samples, rng);
    return out;
}

} // namespace hlnc
