#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fina/core.hpp"

namespace fina {

// Sample coefficient of variation with the 1/(N-1) convention. A single
// value and an all-zero vector both return 0.
inline double cov(const std::vector<double>& values) {
    if (values.empty())
        throw std::invalid_argument("cov: empty input");
    for (double x : values)
        if (x < 0)
            throw std::invalid_argument("cov: negative input");
    if (values.size() < 2) return 0.0;
    const double m = detail::mean(values);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : values) s += (x - m) * (x - m) / (m * m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

// Jain-style fairness index: 1/(1+CoV^2), in (0, 1].
inline double fairness_index(const std::vector<double>& values) {
    const double c = cov(values);
    return 1.0 / (1.0 + c * c);
}

// Percentage of window samples at or below the comfort threshold.
inline double satisfaction_rate(const AdverseHistory& history, double threshold = 2.5) {
    if (history.empty())
        throw std::invalid_argument("satisfaction_rate: empty history");
    std::size_t hits = 0;
    for (std::size_t j = 0; j < history.size(); ++j)
        if (history[j] <= threshold) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(history.size());
}

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;

    Histogram(std::vector<double> edges, std::vector<std::size_t> bin_counts)
        : bin_edges(std::move(edges)), counts(std::move(bin_counts)) {
        if (bin_edges.size() < 2 || counts.size() != bin_edges.size() - 1)
            throw std::invalid_argument("Histogram: counts/edges size mismatch");
        for (std::size_t i = 1; i < bin_edges.size(); ++i)
            if (!(bin_edges[i] > bin_edges[i - 1]))
                throw std::invalid_argument("Histogram: edges not strictly increasing");
    }

    // Uniform bins over [lo, hi]; out-of-range samples land in the edge bins.
    static Histogram collect(const std::vector<double>& samples, double lo, double hi,
                             std::size_t bins) {
        if (bins == 0 || !(hi > lo))
            throw std::invalid_argument("Histogram::collect: bad range");
        std::vector<double> edges(bins + 1);
        for (std::size_t i = 0; i <= bins; ++i)
            edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
        std::vector<std::size_t> counts(bins, 0);
        for (double x : samples) {
            double pos = (x - lo) / (hi - lo) * static_cast<double>(bins);
            auto bin = static_cast<long>(std::floor(pos));
            bin = std::max(0L, std::min(static_cast<long>(bins) - 1, bin));
            ++counts[static_cast<std::size_t>(bin)];
        }
        return Histogram{std::move(edges), std::move(counts)};
    }

    std::size_t total() const {
        std::size_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }

    std::vector<double> normalized() const {
        const std::size_t t = total();
        if (t == 0)
            throw std::invalid_argument("Histogram: cannot normalize empty histogram");
        std::vector<double> p(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            p[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
        return p;
    }
};

namespace detail {

inline std::vector<std::vector<double>> normalize_aligned(const std::vector<Histogram>& hs,
                                                          const char* where) {
    if (hs.size() < 2)
        throw std::invalid_argument(std::string(where) + ": need at least two histograms");
    for (const auto& h : hs)
        if (h.bin_edges != hs.front().bin_edges)
            throw std::invalid_argument(std::string(where) + ": bin edge mismatch");
    std::vector<std::vector<double>> ps;
    ps.reserve(hs.size());
    for (const auto& h : hs) ps.push_back(h.normalized());
    return ps;
}

inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0) h -= x * std::log2(x);
    return h;
}

} // namespace detail

// Generalized Jensen-Shannon divergence with uniform weights, base 2:
// H(mixture) - mean of H. Zero iff all distributions identical; <= log2(k).
inline double jsd(const std::vector<Histogram>& histograms) {
    const auto ps = detail::normalize_aligned(histograms, "jsd");
    const std::size_t bins = ps.front().size();
    std::vector<double> mix(bins, 0.0);
    double mean_h = 0.0;
    for (const auto& p : ps) {
        for (std::size_t i = 0; i < bins; ++i) mix[i] += p[i] / static_cast<double>(ps.size());
        mean_h += detail::entropy_bits(p) / static_cast<double>(ps.size());
    }
    return std::max(0.0, detail::entropy_bits(mix) - mean_h);
}

// 100 x sum over bins of the minimum normalized frequency across histograms.
inline double histogram_overlap(const std::vector<Histogram>& histograms) {
    const auto ps = detail::normalize_aligned(histograms, "histogram_overlap");
    double overlap = 0.0;
    for (std::size_t i = 0; i < ps.front().size(); ++i) {
        double lo = ps.front()[i];
        for (const auto& p : ps) lo = std::min(lo, p[i]);
        overlap += lo;
    }
    return 100.0 * overlap;
}

} // namespace fina
