#include "memlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "memlab/errors.hpp"
#include "memlab/rng.hpp"

namespace memlab {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

double ks_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    double v = a[i] <= b[j] ? a[i] : b[j];
    while (i < n && a[i] <= v) ++i;
    while (j < m && b[j] <= v) ++j;
    double diff = std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m);
    if (diff > d) d = diff;
  }
  return d;
}

double ks_cdf_sorted(const std::vector<double>& a,
                     const std::function<double(double)>& cdf) {
  const std::size_t n = a.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(a[i]);
    double hi = std::abs(static_cast<double>(i + 1) / n - f);
    double lo = std::abs(f - static_cast<double>(i) / n);
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

std::vector<double> to_sorted(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> resample_sorted(const std::vector<double>& v, RngLane& lane) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t k = static_cast<std::size_t>(lane.next_uniform() * v.size());
    if (k >= v.size()) k = v.size() - 1;
    out[i] = v[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> percentile_ci(std::vector<double> values,
                                        double point) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  double lo = values[static_cast<std::size_t>(0.025 * (n - 1))];
  double hi = values[static_cast<std::size_t>(std::ceil(0.975 * (n - 1)))];
  // The CI must contain the point value.
  return {std::min(lo, point), std::max(hi, point)};
}

double w1_sorted(const std::vector<double>& a, const std::vector<double>& b,
                 std::vector<double>& scratch) {
  // equal-size pairing; subsample the larger set deterministically (strided)
  const std::vector<double>*pa = &a, *pb = &b;
  if (a.size() != b.size()) {
    const std::vector<double>& big = a.size() > b.size() ? a : b;
    std::size_t target = std::min(a.size(), b.size());
    scratch.resize(target);
    double stride = static_cast<double>(big.size()) / static_cast<double>(target);
    for (std::size_t i = 0; i < target; ++i)
      scratch[i] = big[static_cast<std::size_t>(i * stride)];
    if (a.size() > b.size())
      pa = &scratch;
    else
      pb = &scratch;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < pa->size(); ++i) s += std::abs((*pa)[i] - (*pb)[i]);
  return s / static_cast<double>(pa->size());
}

}  // namespace

double ks_null_threshold(std::int64_t n_a, std::int64_t n_b, double alpha) {
  double c = alpha <= 0.01 ? 1.628 : (alpha <= 0.05 ? 1.358 : 1.224);
  if (n_b <= 0)
    return c / std::sqrt(static_cast<double>(n_a));
  return c * std::sqrt(static_cast<double>(n_a + n_b) /
                       (static_cast<double>(n_a) * static_cast<double>(n_b)));
}

DistanceReport ks_distance(const Eigen::VectorXd& samples_a,
                           const Eigen::VectorXd& samples_b,
                           int bootstrap_resamples, std::uint64_t bootstrap_seed) {
  if (samples_a.size() == 0 || samples_b.size() == 0)
    raise(ErrorCode::EmptySample, "ks_distance needs nonempty samples");
  std::vector<double> a = to_sorted(samples_a);
  std::vector<double> b = to_sorted(samples_b);
  DistanceReport rep;
  rep.statistic = DistanceStatistic::KS;
  rep.n_a = samples_a.size();
  rep.n_b = samples_b.size();
  rep.value = ks_sorted(a, b);
  if (bootstrap_resamples > 0) {
    RngLane lane(bootstrap_seed, 0xB007);
    std::vector<double> vals(static_cast<std::size_t>(bootstrap_resamples));
    for (int r = 0; r < bootstrap_resamples; ++r)
      vals[static_cast<std::size_t>(r)] =
          ks_sorted(resample_sorted(a, lane), resample_sorted(b, lane));
    rep.bootstrap_ci = percentile_ci(std::move(vals), rep.value);
  } else {
    rep.bootstrap_ci = {rep.value, rep.value};
  }
  return rep;
}

DistanceReport ks_distance_to_cdf(const Eigen::VectorXd& samples,
                                  const std::function<double(double)>& cdf,
                                  int bootstrap_resamples,
                                  std::uint64_t bootstrap_seed) {
  if (samples.size() == 0)
    raise(ErrorCode::EmptySample, "ks_distance_to_cdf needs nonempty samples");
  std::vector<double> a = to_sorted(samples);
  DistanceReport rep;
  rep.statistic = DistanceStatistic::KS;
  rep.n_a = samples.size();
  rep.n_b = 0;
  rep.value = ks_cdf_sorted(a, cdf);
  if (bootstrap_resamples > 0) {
    RngLane lane(bootstrap_seed, 0xB008);
    std::vector<double> vals(static_cast<std::size_t>(bootstrap_resamples));
    for (int r = 0; r < bootstrap_resamples; ++r)
      vals[static_cast<std::size_t>(r)] = ks_cdf_sorted(resample_sorted(a, lane), cdf);
    rep.bootstrap_ci = percentile_ci(std::move(vals), rep.value);
  } else {
    rep.bootstrap_ci = {rep.value, rep.value};
  }
  return rep;
}

DistanceReport wasserstein1(const Eigen::VectorXd& samples_a,
                            const Eigen::VectorXd& samples_b,
                            int bootstrap_resamples, std::uint64_t bootstrap_seed) {
  if (samples_a.size() == 0 || samples_b.size() == 0)
    raise(ErrorCode::EmptySample, "wasserstein1 needs nonempty samples");
  std::vector<double> a = to_sorted(samples_a);
  std::vector<double> b = to_sorted(samples_b);
  std::vector<double> scratch;
  DistanceReport rep;
  rep.statistic = DistanceStatistic::W1;
  rep.n_a = samples_a.size();
  rep.n_b = samples_b.size();
  rep.value = w1_sorted(a, b, scratch);
  if (bootstrap_resamples > 0) {
    RngLane lane(bootstrap_seed, 0xB009);
    std::vector<double> vals(static_cast<std::size_t>(bootstrap_resamples));
    for (int r = 0; r < bootstrap_resamples; ++r)
      vals[static_cast<std::size_t>(r)] =
          w1_sorted(resample_sorted(a, lane), resample_sorted(b, lane), scratch);
    rep.bootstrap_ci = percentile_ci(std::move(vals), rep.value);
  } else {
    rep.bootstrap_ci = {rep.value, rep.value};
  }
  return rep;
}

SampleSummary summarize(const Eigen::VectorXd& samples) {
  SampleSummary s;
  s.n = samples.size();
  if (s.n == 0) raise(ErrorCode::EmptySample, "summarize needs samples");
  s.mean = samples.mean();
  double q = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    q += (samples[i] - s.mean) * (samples[i] - s.mean);
  s.sd = s.n > 1 ? std::sqrt(q / static_cast<double>(s.n - 1)) : 0.0;
  s.se = s.sd / std::sqrt(static_cast<double>(s.n));
  std::vector<double> v = to_sorted(samples);
  s.median = v.size() % 2 == 1 ? v[v.size() / 2]
                               : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  return s;
}

}  // namespace memlab
