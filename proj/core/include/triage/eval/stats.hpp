#pragma once

#include <span>
#include <vector>

namespace triage::eval {

// Two-sided Welch's t-test p-value (unequal variances, Welch-Satterthwaite
// degrees of freedom). Requires n >= 2 and positive variance in each sample.
double welch_t(std::span<const double> sample_a, std::span<const double> sample_b);

// Pearson chi-square p-value for an r x k count table with (r-1)(k-1)
// degrees of freedom. All expected counts must be positive.
double chi_square(const std::vector<std::vector<double>>& contingency);

// Special functions behind the tests above; absolute error <= 1e-8.
double regularized_incomplete_beta(double a, double b, double x);
double regularized_gamma_q(double a, double x);  // upper tail
double student_t_sf_two_sided(double t, double df);

}  // namespace triage::eval
