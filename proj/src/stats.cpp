#include "unicollab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unicollab::stats {

namespace {

struct Moments {
    std::size_t n = 0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
};

// Two-pass centered sums.
Moments moments(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
    Moments m;
    m.n = x.size();
    if (m.n == 0) return m;
    for (std::size_t i = 0; i < m.n; ++i) {
        m.mean_x += x[i];
        m.mean_y += y[i];
    }
    m.mean_x /= static_cast<double>(m.n);
    m.mean_y /= static_cast<double>(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        const double dx = x[i] - m.mean_x;
        const double dy = y[i] - m.mean_y;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    return m;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> drop_undefined_pairs(
    std::span<const std::optional<double>> x, std::span<const std::optional<double>> y) {
    if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
    std::pair<std::vector<double>, std::vector<double>> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            out.first.push_back(*x[i]);
            out.second.push_back(*y[i]);
        }
    }
    return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const Moments m = moments(x, y);
    if (m.n < 3 || m.sxx <= 0.0 || m.syy <= 0.0) return std::nullopt;
    const double r = m.sxy / std::sqrt(m.sxx * m.syy);
    return std::clamp(r, -1.0, 1.0);
}

std::optional<OlsFit> ols_simple(std::span<const double> x, std::span<const double> y) {
    const Moments m = moments(x, y);
    if (m.n < 3 || m.sxx <= 0.0) return std::nullopt;
    OlsFit fit;
    fit.beta = m.sxy / m.sxx;
    fit.intercept = m.mean_y - fit.beta * m.mean_x;
    // Explained over total sum of squares: beta^2 Sxx / Syy = Sxy^2 / (Sxx Syy).
    fit.r_squared = m.syy > 0.0 ? std::min(1.0, (m.sxy * m.sxy) / (m.sxx * m.syy)) : 0.0;
    if (m.syy <= 0.0) fit.beta = 0.0;
    return fit;
}

AssociationResult associate(std::span<const std::optional<double>> x,
                            std::span<const std::optional<double>> y) {
    auto [xs, ys] = drop_undefined_pairs(x, y);
    AssociationResult result;
    result.n = xs.size();
    if (result.n < 3) {
        result.reason = "insufficient n (" + std::to_string(result.n) + " < 3)";
        return result;
    }
    const auto r = pearson(xs, ys);
    const auto fit = ols_simple(xs, ys);
    if (!r || !fit) {
        result.reason = "zero variance";
        return result;
    }
    result.stats = AssociationStats{*r, fit->beta, fit->r_squared, result.n};
    return result;
}

std::optional<double> concentration_index(double cell, double row_total, double col_total,
                                          double grand_total) {
    if (row_total <= 0.0 || col_total <= 0.0 || grand_total <= 0.0) return std::nullopt;
    return (cell / row_total) / (col_total / grand_total);
}

std::vector<std::uint8_t> quartile_bins(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) throw std::invalid_argument("quartile binning needs at least 4 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double cuts[3];
    for (std::size_t k = 1; k <= 3; ++k) {
        // ceil(k n / 4) observations must lie at or below the cut.
        const std::size_t need = (k * n + 3) / 4;
        cuts[k - 1] = sorted[need - 1];
    }
    std::vector<std::uint8_t> bins;
    bins.reserve(n);
    for (double v : values) {
        std::uint8_t b = 3;
        for (std::uint8_t k = 0; k < 3; ++k) {
            if (v <= cuts[k]) {
                b = k;
                break;
            }
        }
        bins.push_back(b);
    }
    return bins;
}

Descriptives descriptive(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("descriptive statistics need n >= 1");
    Descriptives d;
    d.n = values.size();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    d.min = sorted.front();
    d.max = sorted.back();
    const std::size_t mid = d.n / 2;
    d.median = d.n % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    double sum = 0.0;
    for (double v : values) sum += v;
    d.mean = sum / static_cast<double>(d.n);
    if (d.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - d.mean) * (v - d.mean);
        d.std = std::sqrt(ss / static_cast<double>(d.n - 1));
    }
    if (d.min == d.max) d.std = 0.0;
    if (d.mean > 0.0) d.cv = d.std / d.mean;
    return d;
}

}  // namespace unicollab::stats
