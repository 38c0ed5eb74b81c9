#pragma once

// Small statistics helpers shared by the verification suite and tests.

#include <cstddef>
#include <vector>

namespace ruinalloc::stats {

// Kolmogorov-Smirnov statistic of samples against Exp(rate). Sorts a copy.
double ks_statistic_exponential(std::vector<double> samples, double rate);

// Asymptotic critical value c(level)/sqrt(n) of the Kolmogorov distribution
// for any significance level in (0, 1), via c = sqrt(-ln(level/2) / 2).
double ks_critical_value(double level, std::size_t n);

// Pearson correlation coefficient; 0 for fewer than two samples.
double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);

}  // namespace ruinalloc::stats
