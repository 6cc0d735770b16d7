#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace invperc::stats {

// Running mean/variance (Welford).
class Accumulator {
 public:
  void add(double x);
  long count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // sample variance, n-1 denominator
  double stddev() const;
  double stderr_mean() const;  // stddev / sqrt(n)

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int df);

// Two-sided p-value for a standard normal deviate.
double normal_two_sided_p(double z);

// Goodness of fit of observed counts against expected counts (same total).
// Bins with expected count below min_expected are pooled into one.
ChiSquareResult chi_square_goodness(const std::vector<double>& expected,
                                    const std::vector<long>& observed,
                                    double min_expected = 5.0);

// Two independent samples of categorical data, keyed by class code.
// Statistic: sum (a_i - b_i)^2 / (a_i + b_i) over pooled bins, df = bins-1,
// valid when both samples have the same total count.
struct TwoSampleResult {
  ChiSquareResult omnibus;
  int bins = 0;
  double min_bin_p = 1.0;  // smallest per-bin two-proportion p-value
  // Rejected if the omnibus test or any Bonferroni-corrected bin rejects.
  bool rejected(double alpha) const;
};

TwoSampleResult chi_square_two_sample(const std::map<std::uint64_t, long>& a,
                                      const std::map<std::uint64_t, long>& b,
                                      long min_pooled_count = 10);

}  // namespace invperc::stats
