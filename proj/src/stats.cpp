#include "invperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace invperc::stats {

void Accumulator::add(double x) {
  ++n_;
  double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

double Accumulator::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

double Accumulator::stddev() const { return std::sqrt(variance()); }

double Accumulator::stderr_mean() const {
  if (n_ < 1) return 0.0;
  return stddev() / std::sqrt(static_cast<double>(n_));
}

double chi_square_sf(double statistic, int df) {
  if (df <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

ChiSquareResult chi_square_goodness(const std::vector<double>& expected,
                                    const std::vector<long>& observed,
                                    double min_expected) {
  if (expected.size() != observed.size())
    throw std::invalid_argument("chi_square_goodness: size mismatch");
  // Pool small-expectation bins into a remainder bin.
  double pe = 0.0;
  long po = 0;
  double stat = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i] < min_expected) {
      pe += expected[i];
      po += observed[i];
    } else {
      double d = static_cast<double>(observed[i]) - expected[i];
      stat += d * d / expected[i];
      ++bins;
    }
  }
  if (pe > 0.0) {
    double d = static_cast<double>(po) - pe;
    stat += d * d / pe;
    ++bins;
  }
  ChiSquareResult r;
  r.statistic = stat;
  r.df = std::max(bins - 1, 1);
  r.p_value = chi_square_sf(stat, r.df);
  return r;
}

bool TwoSampleResult::rejected(double alpha) const {
  if (omnibus.p_value < alpha) return true;
  if (bins > 0 && min_bin_p < alpha / bins) return true;
  return false;
}

TwoSampleResult chi_square_two_sample(const std::map<std::uint64_t, long>& a,
                                      const std::map<std::uint64_t, long>& b,
                                      long min_pooled_count) {
  // Collect the union of class codes, pool rare classes.
  std::map<std::uint64_t, std::pair<long, long>> joint;
  for (auto& [k, v] : a) joint[k].first += v;
  for (auto& [k, v] : b) joint[k].second += v;

  long na = 0, nb = 0;
  for (auto& [k, v] : joint) {
    na += v.first;
    nb += v.second;
  }

  std::vector<std::pair<long, long>> cells;
  std::pair<long, long> rest{0, 0};
  for (auto& [k, v] : joint) {
    if (v.first + v.second < min_pooled_count) {
      rest.first += v.first;
      rest.second += v.second;
    } else {
      cells.push_back(v);
    }
  }
  if (rest.first + rest.second > 0) cells.push_back(rest);

  TwoSampleResult res;
  res.bins = static_cast<int>(cells.size());
  if (na == 0 || nb == 0 || cells.size() < 2) {
    res.omnibus = {0.0, 0, 1.0};
    return res;
  }

  // Homogeneity chi-square on the 2 x k contingency table.
  double total = static_cast<double>(na + nb);
  double stat = 0.0;
  for (auto& [ca, cb] : cells) {
    double col = static_cast<double>(ca + cb);
    double ea = col * na / total;
    double eb = col * nb / total;
    double da = ca - ea;
    double db = cb - eb;
    if (ea > 0) stat += da * da / ea;
    if (eb > 0) stat += db * db / eb;

    // Per-bin two-proportion z-test.
    double p_pool = col / total;
    double se = std::sqrt(p_pool * (1.0 - p_pool) * (1.0 / na + 1.0 / nb));
    if (se > 0) {
      double z = (static_cast<double>(ca) / na - static_cast<double>(cb) / nb) / se;
      res.min_bin_p = std::min(res.min_bin_p, normal_two_sided_p(z));
    }
  }
  res.omnibus.statistic = stat;
  res.omnibus.df = static_cast<int>(cells.size()) - 1;
  res.omnibus.p_value = chi_square_sf(stat, res.omnibus.df);
  return res;
}

}  // namespace invperc::stats
