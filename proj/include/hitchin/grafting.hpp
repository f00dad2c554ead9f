#pragma once

// Grafting data, adapted frames in the centralizer of the boundary holonomy,
// evaluation of grafted representations by partial conjugation, cylinder
// heights, and grafting rays.

#include <cmath>
#include <utility>
#include <vector>

#include "hitchin/errors.hpp"
#include "hitchin/lie.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

// alpha0 as a linear functional on the Cartan subspace in frame order (no
// Weyl sorting; that is the norm's job).
inline double alpha0_value(const CartanVec& z, const Alpha0& a) {
  if (z.dim() != a.dim()) throw Error("alpha0_value: dimension mismatch");
  return a.c * a.weights.dot(z.v);
}

// Direction of the shearing flow: the Jordan direction of the diagonal
// one-parameter subgroup, already unit-size for every calibrated functional.
inline CartanVec shearing_direction(int d) { return {standard_weights(d) / 2.0, true}; }

struct GraftDatum {
  CartanVec z;
  bool in_kernel = false;
};

inline GraftDatum make_graft_datum(CartanVec z, const Alpha0& a, bool require_kernel) {
  if (std::abs(z.sum()) > 1e-9) throw Error("make_graft_datum: z must sum to zero");
  if (require_kernel && std::abs(alpha0_value(z, a)) > 1e-9)
    throw Error("make_graft_datum: z is not in ker alpha0");
  return {std::move(z), require_kernel};
}

// min over t of F(t u + z), a convex function of t; golden-section search on
// a bracket that must contain the minimizer since F(t u + z) >= |t| - F(z).
inline double cylinder_height(const CartanVec& z, const Alpha0& a) {
  if (std::abs(z.sum()) > 1e-9) throw Error("cylinder_height: z must sum to zero");
  Eigen::VectorXd u = standard_weights(a.dim()) / 2.0;
  auto g = [&](double t) { return finsler_norm({z.v + t * u, false}, a); };
  double fz = finsler_norm(z, a);
  double lo = -2.0 * fz - 1.0, hi = 2.0 * fz + 1.0;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 160; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = g(x2);
    }
  }
  return std::min(f1, f2);
}

// Frame whose columns are the eigenvectors of rho(c), descending eigenvalue
// order, unit determinant, positive first nonzero entry per column.  Gaps
// are checked through the exterior-power evaluator so large d stays honest;
// eigenvectors get two inverse-iteration polish steps.
inline MatD adapt_frame(const RepD& rep, const Word& c) {
  JordanEvaluator je(rep);
  CartanVec lambda = je.jordan(c);
  for (int i = 0; i + 1 < lambda.dim(); ++i)
    if (lambda.v[i] - lambda.v[i + 1] <= 1e-6) throw NotLoxodromic("adapt_frame: eigenvalue gap below threshold");

  MatD mc = rep.evaluate(c);
  const Eigen::MatrixXd& m = mc.m;
  int d = rep.d;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw EigenFailure("adapt_frame: eigenvalue solver failed");
  double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < d; ++i)
    if (std::abs(es.eigenvalues()[i].imag()) > 1e-8 * scale)
      throw ComplexSpectrum("adapt_frame: nonreal eigenvalue");

  std::vector<int> order(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[j]);
  });

  Eigen::MatrixXd P(d, d);
  for (int col = 0; col < d; ++col) {
    int src = order[static_cast<std::size_t>(col)];
    Eigen::VectorXd v = es.eigenvectors().col(src).real();
    double lam = es.eigenvalues()[src].real();
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::MatrixXd shifted = m - lam * Eigen::MatrixXd::Identity(d, d);
      Eigen::VectorXd y = shifted.partialPivLu().solve(v);
      if (y.allFinite() && y.norm() > 0) v = y / y.norm();
    }
    v /= v.norm();
    for (int i = 0; i < d; ++i) {
      if (std::abs(v[i]) > 1e-10) {
        if (v[i] < 0) v = -v;
        break;
      }
    }
    P.col(col) = v;
  }
  double det = P.determinant();
  if (std::abs(det) < 1e-12) throw EigenFailure("adapt_frame: frame is singular");
  P /= std::pow(std::abs(det), 1.0 / d);

  Eigen::MatrixXd diag = P.inverse() * m * P;
  double dmax = diag.diagonal().cwiseAbs().maxCoeff();
  Eigen::MatrixXd off = diag;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-8 * dmax) throw EigenFailure("adapt_frame: frame does not diagonalize");
  return MatD(std::move(P));
}

struct GraftedRep {
  RepD base;
  Splitting splitting;
  MatD P;
  GraftDatum datum;
  RepD effective;  // partial conjugation baked into the generator images
  // Conjugate of `effective` by P, where the grafting conjugator is exactly
  // diagonal: factor-2 images are entrywise scalings of P^-1 g P by
  // exp(z_r - z_c).  Products and wedge minors then carry the grafting
  // scales factored out of every term instead of through cancelling
  // conjugation blocks of condition ~ e^{2t}, so spectra of long mixed
  // words stay accurate at large t.  Same spectra as `effective` on every
  // word.
  RepD framed;

  MatD evaluate(const Word& w) const { return effective.evaluate(w); }
};

inline GraftedRep make_grafted(const RepD& base, const Splitting& splitting, GraftDatum datum) {
  if (datum.z.dim() != base.d) throw Error("make_grafted: datum dimension mismatch");
  if (std::abs(datum.z.sum()) > 1e-9) throw Error("make_grafted: z must sum to zero");
  GraftedRep g{base, splitting, adapt_frame(base, splitting.peripheral), std::move(datum), {}};

  Eigen::VectorXd expz = g.datum.z.v.array().exp();
  Eigen::MatrixXd pinv = g.P.m.inverse();
  MatD alpha(g.P.m * expz.asDiagonal() * pinv);
  MatD alpha_inv(g.P.m * expz.cwiseInverse().asDiagonal() * pinv);

  MatD mc = base.evaluate(splitting.peripheral);
  Eigen::MatrixXd comm_lhs = alpha.m * mc.m, comm_rhs = mc.m * alpha.m;
  if ((comm_lhs - comm_rhs).cwiseAbs().maxCoeff() > 1e-8 * comm_rhs.cwiseAbs().maxCoeff())
    throw EigenFailure("make_grafted: conjugator does not centralize the boundary holonomy");

  g.effective.d = base.d;
  g.framed.d = base.d;
  for (int i = 0; i < 4; ++i) {
    auto idx = static_cast<std::size_t>(i);
    MatD fg(pinv * base.gen[idx].m * g.P.m, base.gen[idx].logs);
    MatD fi(pinv * base.inv[idx].m * g.P.m, base.inv[idx].logs);
    if (splitting.factor_of(static_cast<Letter>(i + 1)) == 2) {
      g.effective.gen[idx] = alpha * base.gen[idx] * alpha_inv;
      g.effective.inv[idx] = alpha * base.inv[idx] * alpha_inv;
      for (int r = 0; r < base.d; ++r)
        for (int c = 0; c < base.d; ++c) {
          double s = std::exp(g.datum.z.v[r] - g.datum.z.v[c]);
          fg.m(r, c) *= s;
          fi.m(r, c) *= s;
        }
    } else {
      g.effective.gen[idx] = base.gen[idx];
      g.effective.inv[idx] = base.inv[idx];
    }
    fg.normalize();
    fi.normalize();
    g.framed.gen[idx] = std::move(fg);
    g.framed.inv[idx] = std::move(fi);
  }
  return g;
}

inline MatD graft_evaluate(const GraftedRep& g, const Word& w) { return g.evaluate(w); }

// Hitchin grafting ray: datum t * z_dir after normalizing z_dir to unit
// cylinder height, so heights along the ray equal t.
inline GraftedRep grafting_ray(const RepD& rep, const Splitting& splitting, const CartanVec& z_dir, double t,
                               const Alpha0& a) {
  if (t < 0) throw Error("grafting_ray: t must be nonnegative");
  double h = cylinder_height(z_dir, a);
  if (h < 1e-9) throw Error("grafting_ray: direction is parallel to the shearing direction");
  CartanVec z{z_dir.v * (t / h), false};
  bool kernel = std::abs(alpha0_value(z_dir, a)) <= 1e-9 * std::max(1.0, z_dir.v.cwiseAbs().maxCoeff());
  return make_grafted(rep, splitting, make_graft_datum(std::move(z), a, kernel));
}

}  // namespace hitchin
