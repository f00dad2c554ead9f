#pragma once

// Census-limit functionals: entropy fits, intersection forms I and J, their
// finite-difference derivatives along representation paths, pressure-metric
// speeds and path lengths, and the boundary-current mass estimator.
// Every limit R -> infinity is truncated at the label's completeness radius
// with the fit window [R*/2, R*].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hitchin/census.hpp"
#include "hitchin/errors.hpp"

namespace hitchin {

struct EntropyFit {
  double delta = 0;
  double std_error = 0;
  double window_lo = 0, window_hi = 0;
  int rows_used = 0;
};

namespace thermo_detail {

inline std::vector<double> sorted_label_lengths(const Census& c, int li) {
  std::vector<double> ls;
  ls.reserve(c.rows.size());
  for (const auto& r : c.rows) ls.push_back(r.l_F[static_cast<std::size_t>(li)]);
  std::sort(ls.begin(), ls.end());
  return ls;
}

}  // namespace thermo_detail

// Least-squares slope of log N(R) + log R over [R*/2, R*] at 20 sample
// radii.  Class counting obeys N(R) ~ e^{delta R} / (delta R), so a pure
// exponential fit underestimates delta by roughly 1/R across any finite
// window; folding the log R term into the ordinate removes that bias
// without changing how two window-matched fits compare (the term cancels
// in their difference).
inline EntropyFit entropy_estimate(const Census& c, const std::string& label) {
  int li = c.label_index(label);
  double r_star = c.r_star_label[static_cast<std::size_t>(li)];
  auto ls = thermo_detail::sorted_label_lengths(c, li);
  auto count_at = [&](double R) {
    return static_cast<double>(std::upper_bound(ls.begin(), ls.end(), R) - ls.begin());
  };
  int rows = static_cast<int>(count_at(r_star));
  if (rows < 50)
    throw InsufficientData("entropy_estimate: " + std::to_string(rows) + " rows within R* under '" + label + "'");

  std::vector<double> xs, ys;
  for (int j = 0; j < 20; ++j) {
    double R = r_star / 2 + (r_star / 2) * j / 19.0;
    double n = count_at(R);
    if (n <= 0) continue;  // empty lower window samples carry no information
    xs.push_back(R);
    ys.push_back(std::log(n) + std::log(R));
  }
  if (xs.size() < 3) throw InsufficientData("entropy_estimate: the fit window is essentially empty");

  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= static_cast<double>(xs.size());
  ym /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  EntropyFit fit;
  fit.delta = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - ym - fit.delta * (xs[i] - xm);
    ssr += r * r;
  }
  fit.std_error = xs.size() > 2 ? std::sqrt(ssr / (static_cast<double>(xs.size()) - 2) / sxx) : 0.0;
  fit.window_lo = r_star / 2;
  fit.window_hi = r_star;
  fit.rows_used = rows;
  return fit;
}

// Mean of l_to/l_from over the classes with l_from <= R* of the from-label.
inline double intersection_I(const Census& c, const std::string& from_label, const std::string& to_label) {
  auto lf = static_cast<std::size_t>(c.label_index(from_label));
  auto lt = static_cast<std::size_t>(c.label_index(to_label));
  double R = c.r_star_label[lf];
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : c.rows) {
    if (r.l_F[lf] > R) continue;
    sum += r.l_F[lt] / r.l_F[lf];
    ++n;
  }
  if (n == 0) throw InsufficientData("intersection_I: no rows within R* under '" + from_label + "'");
  return sum / static_cast<double>(n);
}

inline double normalized_J(const Census& c, const std::string& from_label, const std::string& to_label) {
  double hf = entropy_estimate(c, from_label).delta;
  double ht = entropy_estimate(c, to_label).delta;
  return ht / hf * intersection_I(c, from_label, to_label);
}

// A uniformly spaced path of census labels, one per parameter value.
struct PathSample {
  std::vector<double> ts;
  std::vector<std::string> labels;

  double step() const {
    if (ts.size() != labels.size() || ts.size() < 2) throw GridMismatch("path: need matching ts/labels, >= 2 nodes");
    double h = ts[1] - ts[0];
    if (h <= 0) throw GridMismatch("path: parameters must increase");
    for (std::size_t i = 1; i + 1 < ts.size(); ++i)
      if (std::abs(ts[i + 1] - ts[i] - h) > 1e-9 * std::max(1.0, std::abs(h)))
        throw GridMismatch("path: non-uniform parameter spacing");
    return h;
  }

  std::size_t index_of(double t) const {
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (std::abs(ts[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
    throw GridMismatch("path: parameter not on the grid");
  }
};

// Central difference of s -> I(rho_t, rho_{t+s}) at s = 0; the center value
// I(t, t) = 1 is exact, not estimated.  Order 2 is Richardson-extrapolated
// when two step sizes fit on the grid.
inline double dI_path(const Census& c, const PathSample& path, double t, int order) {
  if (order != 1 && order != 2) throw Error("dI_path: order must be 1 or 2");
  double h = path.step();
  std::size_t i = path.index_of(t);
  if (i == 0 || i + 1 >= path.ts.size()) throw GridMismatch("dI_path: need both neighbors on the grid");
  double ip = intersection_I(c, path.labels[i], path.labels[i + 1]);
  double im = intersection_I(c, path.labels[i], path.labels[i - 1]);
  if (order == 1) return (ip - im) / (2 * h);
  double d_h = (ip - 2.0 + im) / (h * h);
  if (i >= 2 && i + 2 < path.ts.size()) {
    double ip2 = intersection_I(c, path.labels[i], path.labels[i + 2]);
    double im2 = intersection_I(c, path.labels[i], path.labels[i - 2]);
    double d_2h = (ip2 - 2.0 + im2) / (4 * h * h);
    return (4 * d_h - d_2h) / 3;
  }
  return d_h;
}

struct EntropyDerivativeResidual {
  double residual = 0;     // |delta' + delta * dI|
  double delta_prime = 0;  // central difference of the entropy fits
  double coupling = 0;     // delta(t) * dI_path(order 1)
};

inline EntropyDerivativeResidual entropy_derivative_residual(const Census& c, const PathSample& path, double t) {
  double h = path.step();
  std::size_t i = path.index_of(t);
  if (i == 0 || i + 1 >= path.ts.size())
    throw GridMismatch("entropy_derivative_residual: need both neighbors on the grid");
  double dp = entropy_estimate(c, path.labels[i + 1]).delta;
  double dm = entropy_estimate(c, path.labels[i - 1]).delta;
  double d0 = entropy_estimate(c, path.labels[i]).delta;
  EntropyDerivativeResidual out;
  out.delta_prime = (dp - dm) / (2 * h);
  out.coupling = d0 * dI_path(c, path, t, 1);
  out.residual = std::abs(out.delta_prime + out.coupling);
  return out;
}

// Second difference of s -> J(rho_t, rho_{t+s}) at s = 0: the squared
// pressure-metric speed before clamping.  Semidefiniteness of the pressure
// form means this should never be substantially negative.
inline double pressure_form(const Census& c, const PathSample& path, double t) {
  double h = path.step();
  std::size_t i = path.index_of(t);
  if (i == 0 || i + 1 >= path.ts.size()) throw GridMismatch("pressure_form: need both neighbors on the grid");
  double d0 = entropy_estimate(c, path.labels[i]).delta;
  auto J = [&](std::size_t j) {
    return entropy_estimate(c, path.labels[j]).delta / d0 * intersection_I(c, path.labels[i], path.labels[j]);
  };
  double d_h = (J(i + 1) - 2.0 + J(i - 1)) / (h * h);
  if (i >= 2 && i + 2 < path.ts.size()) {
    double d_2h = (J(i + 2) - 2.0 + J(i - 2)) / (4 * h * h);
    return (4 * d_h - d_2h) / 3;
  }
  return d_h;
}

inline double pressure_speed(const Census& c, const PathSample& path, double t) {
  return std::sqrt(std::max(0.0, pressure_form(c, path, t)));
}

struct PressureProfileRow {
  double t = 0;
  double speed = 0;
  double cumulative = 0;
  double upper_bound = 0;
};

// Speeds at the interior nodes with the cumulative trapezoidal length and
// the running derivative-based upper bound
//   sqrt((t - a) * (I'(a) - I'(t) + int_a^t I'')).
inline std::vector<PressureProfileRow> pressure_profile(const Census& c, const PathSample& path) {
  double h = path.step();
  if (path.ts.size() < 3) throw GridMismatch("pressure_profile: need at least 3 nodes");
  std::vector<PressureProfileRow> rows;
  double cumulative = 0;
  double i1_a = dI_path(c, path, path.ts[1], 1);
  double int_i2 = 0;
  double prev_speed = 0, prev_i2 = 0;
  for (std::size_t i = 1; i + 1 < path.ts.size(); ++i) {
    PressureProfileRow row;
    row.t = path.ts[i];
    row.speed = pressure_speed(c, path, row.t);
    double i2 = dI_path(c, path, row.t, 2);
    if (i > 1) {
      cumulative += (prev_speed + row.speed) / 2 * h;
      int_i2 += (prev_i2 + i2) / 2 * h;
    }
    row.cumulative = cumulative;
    double i1_t = dI_path(c, path, row.t, 1);
    row.upper_bound = std::sqrt(std::max(0.0, (row.t - path.ts[1]) * (i1_a - i1_t + int_i2)));
    rows.push_back(row);
    prev_speed = row.speed;
    prev_i2 = i2;
  }
  return rows;
}

struct PressureLength {
  double length = 0;
  double upper_bound = 0;
  double a = 0, b = 0;  // effective interval (first/last interior node)
};

inline PressureLength pressure_length(const Census& c, const PathSample& path) {
  auto rows = pressure_profile(c, path);
  PressureLength out;
  out.a = rows.front().t;
  out.b = rows.back().t;
  out.length = rows.back().cumulative;
  out.upper_bound = rows.back().upper_bound;
  return out;
}

// Census estimate of the intersection of the normalized equilibrium current
// with the splitting curve: mean of iota/l over the classes within R*.
inline double boundary_mass(const Census& c, const std::string& label) {
  auto li = static_cast<std::size_t>(c.label_index(label));
  double R = c.r_star_label[li];
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : c.rows) {
    if (r.l_F[li] > R) continue;
    sum += r.iota / r.l_F[li];
    ++n;
  }
  if (n == 0) throw InsufficientData("boundary_mass: no rows within R* under '" + label + "'");
  return sum / static_cast<double>(n);
}

}  // namespace hitchin
