#pragma once

// The irreducible representation into SL_d(R), Cartan-subspace vectors,
// Jordan/Cartan projections, the calibrated functional alpha0 with its
// Finsler norm and length, and exterior powers.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "hitchin/errors.hpp"
#include "hitchin/fuchsian.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

// d x d matrix carried as e^{logs} * m; the scale offset keeps long products
// of census words inside double range and cancels in all traceless outputs.
struct MatD {
  Eigen::MatrixXd m;
  double logs = 0;

  MatD() = default;
  explicit MatD(Eigen::MatrixXd mm, double ls = 0) : m(std::move(mm)), logs(ls) {}

  int dim() const { return static_cast<int>(m.rows()); }

  MatD operator*(const MatD& o) const { return MatD(m * o.m, logs + o.logs); }

  MatD inverse() const { return MatD(m.inverse(), -logs); }

  void normalize() {
    double s = m.cwiseAbs().maxCoeff();
    if (s > 0 && std::isfinite(s)) {
      m /= s;
      logs += std::log(s);
    }
  }

  static MatD identity(int d) { return MatD(Eigen::MatrixXd::Identity(d, d)); }
};

struct CartanVec {
  Eigen::VectorXd v;
  bool weyl_sorted = false;

  int dim() const { return static_cast<int>(v.size()); }

  double sum() const { return v.sum(); }
};

inline CartanVec cartan_vec(std::vector<double> entries) {
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(entries.data(), static_cast<Eigen::Index>(entries.size()));
  bool sorted = std::is_sorted(entries.rbegin(), entries.rend());
  return {v, sorted};
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Image of M under the irreducible representation on degree d-1 homogeneous
// polynomials, in the weighted monomial basis e_k = sqrt(C(d-1,k)) X^{d-1-k} Y^k
// with the substitution action X -> aX + cY, Y -> bX + dY.  The weights make
// rotations land in the orthogonal group.
inline MatD irreducible_rep(int d, const Mat2& M) {
  if (d < 2) throw Error("irreducible_rep: d must be >= 2");
  int n = d - 1;
  Eigen::MatrixXd out(d, d);
  std::vector<double> conv(static_cast<std::size_t>(d));
  for (int k = 0; k <= n; ++k) {
    std::fill(conv.begin(), conv.end(), 0.0);
    for (int i = 0; i <= n - k; ++i) {
      double p1 = binomial(n - k, i) * std::pow(M.a, n - k - i) * std::pow(M.c, i);
      for (int j = 0; j <= k; ++j) {
        double p2 = binomial(k, j) * std::pow(M.b, k - j) * std::pow(M.d, j);
        conv[static_cast<std::size_t>(i + j)] += p1 * p2;
      }
    }
    double wk = std::sqrt(binomial(n, k));
    for (int r = 0; r <= n; ++r) out(r, k) = conv[static_cast<std::size_t>(r)] * wk / std::sqrt(binomial(n, r));
  }
  return MatD(std::move(out));
}

// Weyl-sorted logs of eigenvalue moduli, mean-centered; the log-scale offset
// is uniform across components so centering removes it.
inline CartanVec jordan_projection(const MatD& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M.m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw EigenFailure("jordan_projection: eigenvalue solver failed");
  Eigen::VectorXd v(M.dim());
  for (int i = 0; i < M.dim(); ++i) {
    double mod = std::abs(es.eigenvalues()[i]);
    if (!(mod > 0) || !std::isfinite(mod)) throw EigenFailure("jordan_projection: degenerate eigenvalue modulus");
    v[i] = std::log(mod);
  }
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  v.array() -= v.mean();
  return {v, true};
}

// Weyl-sorted logs of singular values, mean-centered.
inline CartanVec cartan_projection(const MatD& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M.m);
  Eigen::VectorXd v(M.dim());
  for (int i = 0; i < M.dim(); ++i) {
    double s = svd.singularValues()[i];
    if (!(s > 0) || !std::isfinite(s)) throw EigenFailure("cartan_projection: degenerate singular value");
    v[i] = std::log(s);
  }
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  v.array() -= v.mean();
  return {v, true};
}

inline Eigen::VectorXd standard_weights(int d) {
  Eigen::VectorXd w(d);
  for (int i = 0; i < d; ++i) w[i] = static_cast<double>(d - 1 - 2 * i);
  return w;
}

struct Alpha0 {
  Eigen::VectorXd weights;  // strictly decreasing, antisymmetric under reversal
  double c = 1.0;           // calibration factor

  int dim() const { return static_cast<int>(weights.size()); }
};

// Calibrates c so that the norm of the diagonal one-parameter subgroup image
// matches hyperbolic translation length: c * <w, t/2 * w_std> = t.
inline Alpha0 calibrate_alpha0(int d, const Eigen::VectorXd* custom_weights = nullptr) {
  if (d < 2) throw Error("calibrate_alpha0: d must be >= 2");
  Eigen::VectorXd w = custom_weights ? *custom_weights : standard_weights(d);
  if (w.size() != d) throw Error("calibrate_alpha0: weight vector has wrong dimension");
  for (int i = 0; i + 1 < d; ++i)
    if (!(w[i] > w[i + 1])) throw Error("calibrate_alpha0: weights must be strictly decreasing");
  for (int i = 0; i < d; ++i)
    if (std::abs(w[i] + w[d - 1 - i]) > 1e-12) throw Error("calibrate_alpha0: weights must be antisymmetric");
  double pairing = w.dot(standard_weights(d));
  return {w, 2.0 / pairing};
}

inline double finsler_norm(const CartanVec& v, const Alpha0& a) {
  if (v.dim() != a.dim()) throw Error("finsler_norm: dimension mismatch");
  if (std::abs(v.sum()) > 1e-6) throw Error("finsler_norm: vector does not sum to zero");
  Eigen::VectorXd s = v.v;
  if (!v.weyl_sorted) std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return a.c * a.weights.dot(s);
}

inline double finsler_length(const MatD& M, const Alpha0& a) { return finsler_norm(jordan_projection(M), a); }

inline std::vector<double> loxodromy_gaps(const MatD& M) {
  CartanVec l = jordan_projection(M);
  std::vector<double> gaps(static_cast<std::size_t>(l.dim() - 1));
  for (int i = 0; i + 1 < l.dim(); ++i) gaps[static_cast<std::size_t>(i)] = l.v[i] - l.v[i + 1];
  return gaps;
}

// Induced action on the k-th exterior power in the lexicographic wedge basis;
// entries are k x k minors.
inline MatD exterior_power(const MatD& M, int k) {
  int d = M.dim();
  if (k < 1 || k > d - 1) throw Error("exterior_power: k out of range");
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur(static_cast<std::size_t>(k));
  auto gen = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      subsets.push_back(cur);
      return;
    }
    for (int i = start; i < d; ++i) {
      cur[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  gen(gen, 0, 0);
  int n = static_cast<int>(subsets.size());
  Eigen::MatrixXd out(n, n);
  Eigen::MatrixXd minor(k, k);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor(i, j) = M.m(subsets[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                            subsets[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)]);
      out(r, c) = minor.determinant();
    }
  return MatD(std::move(out), static_cast<double>(k) * M.logs);
}

// A d-dimensional representation of the genus-2 group given by generator
// images; evaluation renormalizes every 8 factors.
struct RepD {
  int d = 0;
  std::array<MatD, 4> gen, inv;

  const MatD& image(Letter l) const {
    int g = std::abs(static_cast<int>(l)) - 1;
    return l > 0 ? gen[static_cast<std::size_t>(g)] : inv[static_cast<std::size_t>(g)];
  }

  MatD evaluate(const Word& w) const {
    MatD m = MatD::identity(d);
    int since = 0;
    for (Letter l : w.letters) {
      m = m * image(l);
      if (++since % 8 == 0) m.normalize();
    }
    m.normalize();
    return m;
  }
};

inline RepD lift_rep(const SurfaceRep2& rep, int d) {
  RepD r;
  r.d = d;
  for (std::size_t i = 0; i < 4; ++i) {
    r.gen[i] = irreducible_rep(d, rep.gen[i]);
    r.inv[i] = irreducible_rep(d, rep.inv[i]);
  }
  return r;
}

inline double log_spectral_radius(const MatD& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M.m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw EigenFailure("log_spectral_radius: eigenvalue solver failed");
  double mod = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(mod > 0) || !std::isfinite(mod)) throw EigenFailure("log_spectral_radius: degenerate spectral radius");
  return std::log(mod) + M.logs;
}

// Jordan projections of long words via exterior powers.  The small
// eigenvalues of a long product are drowned by roundoff (absolute error
// scales with the matrix norm), but the spectral radius of each exterior
// level is well conditioned and log lambda_1(wedge^k g) = lambda_1 + ... +
// lambda_k; differencing the partial sums recovers the full projection.
// Exterior powers are taken of the generator images, where the minors are
// benign, and multiplied along the word.
struct JordanEvaluator {
  int d = 0;
  std::vector<RepD> levels;  // level k-1 carries the wedge^k generator images

  explicit JordanEvaluator(const RepD& base) : d(base.d) {
    levels.reserve(static_cast<std::size_t>(d - 1));
    for (int k = 1; k <= d - 1; ++k) {
      RepD lvl;
      if (k == 1) {
        lvl = base;
      } else {
        for (std::size_t i = 0; i < 4; ++i) {
          lvl.gen[i] = exterior_power(base.gen[i], k);
          lvl.inv[i] = exterior_power(base.inv[i], k);
        }
        lvl.d = lvl.gen[0].dim();
      }
      levels.push_back(std::move(lvl));
    }
  }

  CartanVec jordan(const Word& w) const {
    Eigen::VectorXd v(d);
    double prev = 0;
    for (int k = 1; k <= d - 1; ++k) {
      double s = log_spectral_radius(levels[static_cast<std::size_t>(k - 1)].evaluate(w));
      v[k - 1] = s - prev;
      prev = s;
    }
    v[d - 1] = -prev;
    return {v, true};
  }

  double length(const Word& w, const Alpha0& a) const { return finsler_norm(jordan(w), a); }
};

}  // namespace hitchin
