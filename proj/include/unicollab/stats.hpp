#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace unicollab::stats {

struct AssociationStats {
    double r = 0.0;
    double beta = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Either stats, or the reason they are undefined. `n` is the sample size
/// after pairwise removal of undefined entries in both cases.
struct AssociationResult {
    std::optional<AssociationStats> stats;
    std::string reason;
    std::size_t n = 0;
};

struct OlsFit {
    double beta = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct Descriptives {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std = 0.0;  // sample (n-1) standard deviation; 0 for n = 1
    std::optional<double> cv;
};

/// Pairs where both entries are defined, in input order.
std::pair<std::vector<double>, std::vector<double>> drop_undefined_pairs(
    std::span<const std::optional<double>> x, std::span<const std::optional<double>> y);

/// Sample Pearson correlation. Undefined for n < 3 or zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Least squares fit of y on x. Undefined for n < 3 or zero variance in x;
/// constant y gives beta = 0 and r_squared = 0.
std::optional<OlsFit> ols_simple(std::span<const double> x, std::span<const double> y);

/// Correlation plus regression of y (dependent) on x (independent).
AssociationResult associate(std::span<const std::optional<double>> x,
                            std::span<const std::optional<double>> y);

/// Observed over expected frequency: (cell / row_total) / (col_total / grand_total).
std::optional<double> concentration_index(double cell, double row_total, double col_total,
                                          double grand_total);

/// Quartile bin (0 = worst .. 3 = best) for each value. Cut k is the smallest
/// value v with at least k*n/4 observations <= v; values equal to a cut go
/// to the lower bin. Throws std::invalid_argument for n < 4.
std::vector<std::uint8_t> quartile_bins(std::span<const double> values);

/// Throws std::invalid_argument on an empty series.
Descriptives descriptive(std::span<const double> values);

}  // namespace unicollab::stats
