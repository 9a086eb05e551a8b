#pragma once

#ifdef __linux__
#include <sched.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expkin/dh.hpp"
#include "expkin/dynamics.hpp"
#include "expkin/kinematics.hpp"
#include "expkin/robots.hpp"

namespace expkin {

enum class Quantity { Fk, HybridJacobian, Mass, Gravity, Coriolis };
enum class Method { Poe, Dh };

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::Fk: return "fk";
    case Quantity::HybridJacobian: return "hybrid_jacobian";
    case Quantity::Mass: return "mass";
    case Quantity::Gravity: return "gravity";
    case Quantity::Coriolis: return "coriolis";
  }
  return "?";
}

inline const char* to_string(Method m) {
  return m == Method::Poe ? "poe" : "dh";
}

inline std::optional<Quantity> parse_quantity(const std::string& s) {
  if (s == "fk") return Quantity::Fk;
  if (s == "jacobian" || s == "hybrid_jacobian") return Quantity::HybridJacobian;
  if (s == "mass") return Quantity::Mass;
  if (s == "gravity") return Quantity::Gravity;
  if (s == "coriolis") return Quantity::Coriolis;
  return std::nullopt;
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "poe") return Method::Poe;
  if (s == "dh") return Method::Dh;
  return std::nullopt;
}

/// Gravity and Coriolis terms have no counterpart in the DH baseline.
inline bool supports(Quantity q, Method m) {
  if (m == Method::Dh) {
    return q == Quantity::Fk || q == Quantity::HybridJacobian || q == Quantity::Mass;
  }
  return true;
}

/// Robust per-evaluation timing statistics for one (quantity, method, dof).
struct BenchResult {
  Quantity quantity = Quantity::Fk;
  Method method = Method::Poe;
  int dof = 0;
  double median_ns = 0.0;
  double p10_ns = 0.0;
  double p90_ns = 0.0;
  int reps = 0;
};

/// Benchmark subject for one dof: the snake chain in both formulations plus
/// a fixed pseudo-random configuration seeded with the dof, so the measured
/// values (not the times) are reproducible across runs.
class BenchWorkload {
 public:
  explicit BenchWorkload(int dof)
      : poe_(make_snake(dof, 1.0, 1.0)), dh_(snake_to_dh(dof, 1.0, 1.0)) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(dof));
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_real_distribution<double> rate(-1.0, 1.0);
    q_.resize(dof);
    qdot_.resize(dof);
    for (int i = 0; i < dof; ++i) {
      q_(i) = angle(rng);
    }
    for (int i = 0; i < dof; ++i) {
      qdot_(i) = rate(rng);
    }
  }

  int dof() const { return poe_.dof(); }
  const Eigen::VectorXd& q() const { return q_; }
  const Eigen::VectorXd& qdot() const { return qdot_; }
  const RobotModel& poe_model() const { return poe_; }
  const DHModel& dh_model() const { return dh_; }

  /// One evaluation of the requested quantity at the stored configuration.
  Eigen::MatrixXd evaluate(Quantity quantity, Method method) const {
    if (!supports(quantity, method)) {
      throw ValidationError(std::string(to_string(quantity)) +
                            " is not available for the dh method");
    }
    switch (quantity) {
      case Quantity::Fk:
        return method == Method::Poe ? forward_kinematics(poe_, q_).matrix()
                                     : dh_forward_kinematics(dh_, q_).matrix();
      case Quantity::HybridJacobian:
        return method == Method::Poe ? hybrid_jacobian(poe_, q_).matrix
                                     : dh_hybrid_jacobian(dh_, q_).matrix;
      case Quantity::Mass:
        return method == Method::Poe ? mass_matrix(poe_, q_)
                                     : dh_mass_matrix(dh_, q_);
      case Quantity::Gravity:
        return gravity_vector(poe_, q_);
      case Quantity::Coriolis:
        return coriolis_matrix(poe_, q_, qdot_);
    }
    throw ValidationError("unknown quantity");
  }

 private:
  RobotModel poe_;
  DHModel dh_;
  Eigen::VectorXd q_;
  Eigen::VectorXd qdot_;
};

namespace detail {

template <typename T>
inline void do_not_optimize(const T& value) {
  asm volatile("" : : "g"(&value) : "memory");
}

/// Keeps the timing loop on one logical CPU for its whole duration.
inline void pin_to_current_cpu() {
#ifdef __linux__
  const int cpu = sched_getcpu();
  if (cpu >= 0) {
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(cpu, &set);
    sched_setaffinity(0, sizeof(set), &set);
  }
#endif
}

inline double percentile(const std::vector<double>& sorted, double p) {
  const auto idx = static_cast<std::size_t>(
      std::llround(p * static_cast<double>(sorted.size() - 1)));
  return sorted[idx];
}

}  // namespace detail

/// Times `reps` single evaluations (after `warmup` unrecorded ones) on one
/// logical thread. The optional out-parameter receives the value computed in
/// the timing loop, which is bit-identical to a direct evaluation.
inline BenchResult time_quantity(const BenchWorkload& workload, Quantity quantity,
                                 Method method, int reps, int warmup,
                                 Eigen::MatrixXd* value_out = nullptr) {
  if (reps < 3) {
    throw ValidationError("benchmark: reps must be >= 3, got " + std::to_string(reps));
  }
  if (warmup < 0) {
    throw ValidationError("benchmark: warmup must be >= 0");
  }
  detail::pin_to_current_cpu();
  // Warm for the requested repetitions and at least a few milliseconds of
  // sustained load, so clock ramp-up does not distort the first samples.
  const auto warm_until = std::chrono::steady_clock::now() + std::chrono::milliseconds(5);
  for (int i = 0; i < warmup || std::chrono::steady_clock::now() < warm_until; ++i) {
    const Eigen::MatrixXd v = workload.evaluate(quantity, method);
    detail::do_not_optimize(v);
  }
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(reps));
  Eigen::MatrixXd last;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    last = workload.evaluate(quantity, method);
    const auto t1 = std::chrono::steady_clock::now();
    detail::do_not_optimize(last);
    samples.push_back(static_cast<double>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
  }
  if (value_out != nullptr) {
    *value_out = last;
  }
  std::sort(samples.begin(), samples.end());
  return {quantity,
          method,
          workload.dof(),
          detail::percentile(samples, 0.5),
          detail::percentile(samples, 0.1),
          detail::percentile(samples, 0.9),
          reps};
}

/// Runs the timing grid for one quantity and method over a list of dofs.
inline std::vector<BenchResult> run_benchmark(Quantity quantity, Method method,
                                              const std::vector<int>& dof_list,
                                              int reps, int warmup) {
  std::vector<BenchResult> results;
  results.reserve(dof_list.size());
  for (int dof : dof_list) {
    if (dof < 1) {
      throw ValidationError("benchmark: dof must be >= 1, got " + std::to_string(dof));
    }
    results.push_back(time_quantity(BenchWorkload(dof), quantity, method, reps, warmup));
  }
  return results;
}

namespace detail {

inline bool bench_order(const BenchResult& a, const BenchResult& b) {
  if (a.quantity != b.quantity) return static_cast<int>(a.quantity) < static_cast<int>(b.quantity);
  if (a.method != b.method) return static_cast<int>(a.method) < static_cast<int>(b.method);
  return a.dof < b.dof;
}

}  // namespace detail

/// CSV document, rows ordered by (quantity, method, dof); byte-deterministic
/// for fixed inputs.
inline std::string emit_csv(std::vector<BenchResult> results) {
  std::sort(results.begin(), results.end(), detail::bench_order);
  std::string out = "quantity,method,dof,reps,median_ns,p10_ns,p90_ns\n";
  for (const BenchResult& r : results) {
    out += to_string(r.quantity);
    out += ',';
    out += to_string(r.method);
    out += ',' + std::to_string(r.dof) + ',' + std::to_string(r.reps) + ',';
    out += detail::format_g12(r.median_ns) + ',' + detail::format_g12(r.p10_ns) +
           ',' + detail::format_g12(r.p90_ns) + '\n';
  }
  return out;
}

/// Least-squares fit of median time against dof (fk, jacobian, gravity) or
/// dof^2 (mass, coriolis). `slope` is the coefficient of the regressor.
struct ScalingFit {
  Quantity quantity = Quantity::Fk;
  Method method = Method::Poe;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline std::vector<ScalingFit> emit_scaling_fit(std::vector<BenchResult> results) {
  std::sort(results.begin(), results.end(), detail::bench_order);
  std::vector<ScalingFit> fits;
  std::size_t start = 0;
  while (start < results.size()) {
    std::size_t stop = start;
    while (stop < results.size() && results[stop].quantity == results[start].quantity &&
           results[stop].method == results[start].method) {
      ++stop;
    }
    const std::size_t count = stop - start;
    if (count < 4) {
      throw ValidationError(std::string("scaling fit for ") +
                            to_string(results[start].quantity) + "/" +
                            to_string(results[start].method) +
                            ": need at least 4 dof points, got " + std::to_string(count));
    }
    const bool quadratic = results[start].quantity == Quantity::Mass ||
                           results[start].quantity == Quantity::Coriolis;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < stop; ++i) {
      const double x = quadratic ? static_cast<double>(results[i].dof) * results[i].dof
                                 : static_cast<double>(results[i].dof);
      const double y = results[i].median_ns;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(count);
    const double denom = n * sxx - sx * sx;
    ScalingFit fit;
    fit.quantity = results[start].quantity;
    fit.method = results[start].method;
    fit.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / n;
    for (std::size_t i = start; i < stop; ++i) {
      const double x = quadratic ? static_cast<double>(results[i].dof) * results[i].dof
                                 : static_cast<double>(results[i].dof);
      const double y = results[i].median_ns;
      ss_res += (y - (fit.intercept + fit.slope * x)) * (y - (fit.intercept + fit.slope * x));
      ss_tot += (y - mean_y) * (y - mean_y);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fits.push_back(fit);
    start = stop;
  }
  return fits;
}

/// Self-contained SVG line chart of median time against dof, one polyline
/// per (quantity, method) series.
inline std::string emit_scaling_svg(std::vector<BenchResult> results) {
  std::sort(results.begin(), results.end(), detail::bench_order);
  const int width = 860;
  const int height = 520;
  const int ml = 90, mr = 220, mt = 30, mb = 60;
  double max_dof = 1.0, max_ns = 1.0;
  for (const BenchResult& r : results) {
    max_dof = std::max(max_dof, static_cast<double>(r.dof));
    max_ns = std::max(max_ns, r.median_ns);
  }
  auto px = [&](double dof) {
    return ml + (width - ml - mr) * dof / max_dof;
  };
  auto py = [&](double ns) {
    return height - mb - (height - mt - mb) * ns / max_ns;
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#e377c2",
                                  "#7f7f7f", "#bcbd22"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-size=\"14\">dof</text>\n";
  svg << "<text x=\"20\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"14\" transform=\"rotate(-90 20 " << (mt + height - mb) / 2
      << ")\" text-anchor=\"middle\">median time [ns]</text>\n";
  svg << "<text x=\"" << ml << "\" y=\"" << height - mb + 18
      << "\" font-size=\"12\" text-anchor=\"middle\">0</text>\n";
  svg << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 18
      << "\" font-size=\"12\" text-anchor=\"middle\">" << detail::format_g12(max_dof)
      << "</text>\n";
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
      << "\" font-size=\"12\" text-anchor=\"end\">" << detail::format_g12(max_ns)
      << "</text>\n";
  std::size_t start = 0;
  int series = 0;
  while (start < results.size()) {
    std::size_t stop = start;
    while (stop < results.size() && results[stop].quantity == results[start].quantity &&
           results[stop].method == results[start].method) {
      ++stop;
    }
    const char* color = palette[series % 10];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = start; i < stop; ++i) {
      svg << px(results[i].dof) << "," << py(results[i].median_ns) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - mr + 12 << "\" y=\"" << mt + 16 + 18 * series
        << "\" font-size=\"13\" fill=\"" << color << "\">"
        << to_string(results[start].quantity) << " / "
        << to_string(results[start].method) << "</text>\n";
    ++series;
    start = stop;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace expkin
