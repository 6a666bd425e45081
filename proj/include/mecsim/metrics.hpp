#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mecsim {

struct SampleSet {
    std::string label;
    std::vector<double> values;
};

namespace metrics_detail {

inline void require_finite(const std::vector<double>& values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

}  // namespace metrics_detail

struct Summary {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double p95 = 0.0;
};

// Nearest-rank percentile: sort ascending, take the 1-based element at
// ceil(p/100 * n). No interpolation; exact on small n.
inline double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile: no samples collected");
    if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentile: p must be in (0, 100]");
    metrics_detail::require_finite(values, "percentile");
    std::sort(values.begin(), values.end());
    auto n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return values[rank - 1];
}

inline Summary summarize(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("summarize: no samples collected");
    metrics_detail::require_finite(values, "summarize");
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double sum = std::accumulate(values.begin(), values.end(), 0.0);
    return Summary{values.size(), *mn, *mx, sum / static_cast<double>(values.size()),
                   percentile(values, 95.0)};
}

// Step-function points of the empirical CDF: sorted unique values with
// cumulative fractions k/n. The final fraction is exactly 1.0.
inline std::vector<std::pair<double, double>> ecdf(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("ecdf: no samples collected");
    metrics_detail::require_finite(values, "ecdf");
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    auto n = static_cast<double>(values.size());
    std::size_t seen = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ++seen;
        if (i + 1 == values.size() || values[i + 1] != values[i])
            out.emplace_back(values[i], static_cast<double>(seen) / n);
    }
    return out;
}

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

// Fixed-width binning over [min, max]; the last bin includes its upper edge.
inline std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                           std::size_t bins = 20) {
    if (values.empty()) throw std::invalid_argument("histogram: no samples collected");
    if (bins == 0) throw std::invalid_argument("histogram: bins must be > 0");
    auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double mn = *mn_it, mx = *mx_it;
    if (mn == mx) return {HistogramBin{mn, mx, values.size()}};
    double width = (mx - mn) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        out[i].lo = mn + width * static_cast<double>(i);
        out[i].hi = i + 1 == bins ? mx : mn + width * static_cast<double>(i + 1);
    }
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - mn) / width);
        if (idx >= bins) idx = bins - 1;
        ++out[idx].count;
    }
    return out;
}

}  // namespace mecsim
