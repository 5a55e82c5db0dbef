#include "memlab/exit_lab.hpp"

#include <cmath>
#include <vector>

#include "memlab/parallel.hpp"

namespace memlab {

double skew_exit_probability(double alpha, double a_minus, double a_plus) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    if (alpha == 1.0) return 1.0;
    if (alpha == 0.0) return 0.0;
    raise(ErrorCode::ConfigError, "alpha must lie in [0,1]");
  }
  if (!(a_minus > 0.0) || !(a_plus > 0.0))
    raise(ErrorCode::ConfigError, "strip half-widths must be positive");
  return alpha * a_minus / (alpha * a_minus + (1.0 - alpha) * a_plus);
}

double theory_exit_probability_up(double a_minus, double a_plus) {
  return a_minus / (a_minus + a_plus);
}
double theory_mean_local_time(double a_minus, double a_plus, double eps) {
  return 2.0 * a_minus * a_plus / (a_minus + a_plus) * eps;
}
double theory_mean_exit_time(double a_minus, double a_plus, double eps,
                             double sigma00) {
  return a_minus * a_plus / sigma00 * eps * eps;
}
double theory_mean_displacement(double a_minus, double a_plus, double eps,
                                double delta, double b0, double beta,
                                double sigma00) {
  return b0 / sigma00 * a_minus * a_plus * eps * eps +
         beta * 2.0 * a_minus * a_plus / (a_minus + a_plus) * eps * delta;
}

namespace {

struct PathRecord {
  double exit_time = 0.0;
  double local_time = 0.0;
  double displacement = 0.0;
  bool up = false;
  bool capped = false;
};

struct MeanCi {
  double mean = 0.0, ci = 0.0;
};

MeanCi mean_ci(const std::vector<double>& v) {
  MeanCi out;
  if (v.empty()) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(v.size());
  double q = 0.0;
  for (double x : v) q += (x - out.mean) * (x - out.mean);
  double sd = v.size() > 1 ? std::sqrt(q / static_cast<double>(v.size() - 1)) : 0.0;
  out.ci = 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
  return out;
}

}  // namespace

ExitStats single_membrane_exit_mc(const CoefficientField& field,
                                  const ScalingRegime& regime,
                                  const StepParams& step,
                                  const ExitLabCase& lab_case,
                                  std::uint64_t master_seed) {
  if (!(lab_case.a_minus > 0.0) || !(lab_case.a_plus > 0.0))
    raise(ErrorCode::ConfigError, "exit-lab strip half-widths must be positive");
  regime.validate(field.bounds().beta_norm);

  const double eps = regime.epsilon;
  const double lo = -eps * lab_case.a_minus;
  const double hi = eps * lab_case.a_plus;
  const double cap = 100.0 * eps * eps * lab_case.a_minus * lab_case.a_plus /
                     field.bounds().sigma00_floor;
  const double h = step.euler_h;

  MembraneFamily membrane = single_membrane(0.0, eps);
  std::vector<PathRecord> records(static_cast<std::size_t>(lab_case.n_paths));

  parallel_for(records.size(), lab_case.threads, [&](std::size_t i) {
    RngLane lane(master_seed, static_cast<std::uint64_t>(i));
    EulerMollifiedStepper stepper(field, membrane, regime, step);
    stepper.reset(0.0, 0.0, lab_case.start_y);
    PathRecord rec;
    double prev_x = 0.0;
    for (;;) {
      prev_x = stepper.x();
      double prev_sigma00 = step.bridge_correction ? stepper.sigma00_here() : 0.0;
      stepper.advance(h, lane);
      double x = stepper.x();
      if (x <= lo || x >= hi) {
        rec.up = x >= hi;
        rec.exit_time = stepper.t();
        rec.local_time = stepper.local_time_total();
        rec.displacement = rec.up ? hi : lo;
        break;
      }
      if (step.bridge_correction) {
        // Brownian-bridge crossing probabilities for both boundaries.
        double var = prev_sigma00 * h;
        double p_hi = std::exp(-2.0 * (hi - prev_x) * (hi - x) / var);
        double p_lo = std::exp(-2.0 * (prev_x - lo) * (x - lo) / var);
        bool cross_hi = lane.next_uniform() < p_hi;
        bool cross_lo = lane.next_uniform() < p_lo;
        if (cross_hi || cross_lo) {
          rec.up = cross_hi && (!cross_lo || p_hi >= p_lo);
          rec.exit_time = stepper.t();
          rec.local_time = stepper.local_time_total();
          rec.displacement = rec.up ? hi : lo;
          break;
        }
      }
      if (stepper.t() > cap) {
        rec.capped = true;
        break;
      }
    }
    records[i] = rec;
  });

  std::vector<double> times, ltimes, disps, ups;
  times.reserve(records.size());
  for (const PathRecord& r : records) {
    if (r.capped) continue;
    times.push_back(r.exit_time);
    ltimes.push_back(r.local_time);
    disps.push_back(r.displacement);
    ups.push_back(r.up ? 1.0 : 0.0);
  }
  if (times.empty())
    raise(ErrorCode::NoExitBeforeCap, "every path exceeded the exit-time cap");

  ExitStats st;
  st.n_paths = static_cast<std::int64_t>(times.size());
  st.n_capped = static_cast<std::int64_t>(records.size() - times.size());
  MeanCi p = mean_ci(ups);
  st.p_up = p.mean;
  st.p_up_ci = p.ci;
  MeanCi t = mean_ci(times);
  st.mean_exit_time = t.mean;
  st.mean_exit_time_ci = t.ci;
  MeanCi l = mean_ci(ltimes);
  st.mean_local_time = l.mean;
  st.mean_local_time_ci = l.ci;
  MeanCi dsp = mean_ci(disps);
  st.mean_displacement = dsp.mean;
  st.mean_displacement_ci = dsp.ci;
  return st;
}

}  // namespace memlab
