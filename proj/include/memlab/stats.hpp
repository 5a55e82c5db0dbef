#ifndef MEMLAB_STATS_HPP
#define MEMLAB_STATS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>

namespace memlab {

enum class DistanceStatistic { KS, W1 };

struct DistanceReport {
  DistanceStatistic statistic = DistanceStatistic::KS;
  double value = 0.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;  // 0 when compared against an analytic CDF
  std::pair<double, double> bootstrap_ci{0.0, 0.0};
};

// Two-sample Kolmogorov-Smirnov distance, exact via merged sort, with a
// percentile bootstrap CI (default 200 resamples; 0 disables).
DistanceReport ks_distance(const Eigen::VectorXd& samples_a,
                           const Eigen::VectorXd& samples_b,
                           int bootstrap_resamples = 200,
                           std::uint64_t bootstrap_seed = 1);

// One-sample KS distance against an analytic CDF.
DistanceReport ks_distance_to_cdf(const Eigen::VectorXd& samples,
                                  const std::function<double(double)>& cdf,
                                  int bootstrap_resamples = 200,
                                  std::uint64_t bootstrap_seed = 1);

// Exact W1 for equal-size empirical measures (mean |Delta| of sorted
// samples); the larger set is deterministically subsampled if sizes differ.
DistanceReport wasserstein1(const Eigen::VectorXd& samples_a,
                            const Eigen::VectorXd& samples_b,
                            int bootstrap_resamples = 200,
                            std::uint64_t bootstrap_seed = 1);

// Asymptotic two-sample KS null quantile ~ c(alpha) sqrt((n+m)/(n m)),
// c(0.05) = 1.358.
double ks_null_threshold(std::int64_t n_a, std::int64_t n_b,
                         double alpha = 0.05);

struct SampleSummary {
  std::int64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;      // sd / sqrt(n)
  double median = 0.0;
};

SampleSummary summarize(const Eigen::VectorXd& samples);

double normal_cdf(double x);

}  // namespace memlab

#endif  // MEMLAB_STATS_HPP
