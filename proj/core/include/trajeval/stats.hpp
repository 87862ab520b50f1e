#pragma once

#include <span>
#include <vector>

namespace trajeval::stats {

double mean(std::span<const double> values);

/// Population standard deviation (divides by n).
double stddev(std::span<const double> values);

/// Linear-interpolation percentile, q in [0, 100]. Sorts a copy.
double percentile(std::vector<double> values, double q);

double median(std::vector<double> values);

/// Summation over a sorted copy, so the result does not depend on input order.
double order_independent_sum(std::vector<double> values);

}  // namespace trajeval::stats
