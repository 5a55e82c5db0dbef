#include "memlab/path_bundle.hpp"

#include <algorithm>
#include <string>

#include "memlab/errors.hpp"

namespace memlab {

double sample_grid(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                   double s) {
  const Eigen::Index n = times.size();
  if (s <= times[0]) return values[0];
  if (s >= times[n - 1]) return values[n - 1];
  const double* begin = times.data();
  const double* it = std::upper_bound(begin, begin + n, s);
  Eigen::Index i = it - begin;  // times[i-1] <= s < times[i]
  double w = (s - times[i - 1]) / (times[i] - times[i - 1]);
  return values[i - 1] * (1.0 - w) + values[i] * w;
}

Eigen::VectorXd invert_time_change(const PathBundle& bundle,
                                   const Eigen::VectorXd& query_times) {
  const Eigen::VectorXd& a = bundle.a_functional;
  const Eigen::VectorXd& tt = bundle.times;
  const Eigen::Index n = a.size();
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(a[i] > a[i - 1]))
      raise(ErrorCode::ValidationError, "a_functional is not strictly increasing");

  Eigen::VectorXd out(query_times.size());
  for (Eigen::Index q = 0; q < query_times.size(); ++q) {
    double t = query_times[q];
    if (t < 0.0 || t > a[n - 1])
      raise(ErrorCode::QueryBeyondHorizon,
            "query t = " + std::to_string(t) + " outside [0, " +
                std::to_string(a[n - 1]) + "]");
    const double* begin = a.data();
    const double* it = std::lower_bound(begin, begin + n, t);
    Eigen::Index i = it - begin;
    if (i == 0) {
      out[q] = tt[0];
      continue;
    }
    double w = (t - a[i - 1]) / (a[i] - a[i - 1]);
    out[q] = tt[i - 1] + w * (tt[i] - tt[i - 1]);
  }
  return out;
}

Eigen::VectorXd local_time_sum_path(const PathBundle& bundle, double epsilon) {
  if (bundle.local_time_total.size() == 0)
    raise(ErrorCode::MissingLocalTimes, "bundle carries no local-time accumulation");
  return epsilon * bundle.local_time_total;
}

Eigen::VectorXd time_changed_x(const PathBundle& bundle,
                               const Eigen::VectorXd& query_times) {
  Eigen::VectorXd s = invert_time_change(bundle, query_times);
  Eigen::VectorXd out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    out[i] = sample_grid(bundle.times, bundle.x, s[i]);
  return out;
}

}  // namespace memlab
