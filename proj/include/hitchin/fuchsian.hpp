#pragma once

// Explicit SL2(R) holonomies: one-holed tori from Fricke trace coordinates,
// gluing into a genus-2 Fuchsian representation with a twist parameter, and
// hyperbolic trigonometry utilities.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hitchin/errors.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  // Inverse of a determinant-one matrix.
  Mat2 inverse() const { return {d, -b, -c, a}; }

  static Mat2 identity() { return {}; }
  static Mat2 diag(double s, double t) { return {s, 0, 0, t}; }

  double max_abs_diff(const Mat2& o) const {
    return std::max(std::max(std::abs(a - o.a), std::abs(b - o.b)),
                    std::max(std::abs(c - o.c), std::abs(d - o.d)));
  }
};

inline double sl2_translation_length(const Mat2& m) {
  double t = std::abs(m.trace());
  return t > 2.0 ? 2.0 * std::acosh(t / 2.0) : 0.0;
}

// Embedded tube radius around a closed geodesic of length l.
inline double collar_width(double l) {
  if (!(l > 0)) throw Error("collar_width: length must be positive");
  return std::asinh(1.0 / std::sinh(l / 2.0));
}

// Eigenvector frame of a hyperbolic element, columns ordered by descending
// eigenvalue modulus, each column unit-norm with positive first nonzero
// entry.  This pins down the gluing conjugator and the twist flow.
inline Mat2 eigen_frame_desc(const Mat2& m) {
  double t = m.trace();
  if (std::abs(t) <= 2.0 + 1e-12) throw NotLoxodromic("eigen_frame_desc: |trace| <= 2");
  double root = std::sqrt(t * t - 4.0);
  double l1 = (t + (t > 0 ? root : -root)) / 2.0;  // |l1| > 1
  double l2 = 1.0 / l1;
  auto column = [&](double lam) -> std::array<double, 2> {
    // (b, lam-a) and (lam-d, c) both solve (m - lam)v = 0; take the better
    // conditioned one.
    double n1 = std::hypot(m.b, lam - m.a);
    double n2 = std::hypot(lam - m.d, m.c);
    std::array<double, 2> v{};
    if (n1 >= n2)
      v = {m.b / n1, (lam - m.a) / n1};
    else
      v = {(lam - m.d) / n2, m.c / n2};
    double lead = std::abs(v[0]) > 1e-12 ? v[0] : v[1];
    if (lead < 0) {
      v[0] = -v[0];
      v[1] = -v[1];
    }
    return v;
  };
  auto c1 = column(l1), c2 = column(l2);
  return {c1[0], c2[0], c1[1], c2[1]};
}

// Time-t translation along the axis of a hyperbolic element, oriented by its
// descending eigenframe.
inline Mat2 axis_translation(const Mat2& m, double t) {
  Mat2 p = eigen_frame_desc(m);
  Mat2 pd = p * Mat2::diag(std::exp(t / 2.0), std::exp(-t / 2.0));
  double det = p.det();
  Mat2 pinv = {p.d / det, -p.b / det, -p.c / det, p.a / det};
  return pd * pinv;
}

struct TorusParams {
  double x = 0, y = 0, z = 0;

  double boundary_trace() const { return x * x + y * y + z * z - x * y * z - 2.0; }
};

struct TwoGeneratorRep {
  Mat2 A, B;

  Mat2 evaluate(const Word& w) const {
    Mat2 m, ai = A.inverse(), bi = B.inverse();
    for (Letter l : w.letters) {
      switch (l) {
        case 1: m = m * A; break;
        case -1: m = m * ai; break;
        case 2: m = m * B; break;
        case -2: m = m * bi; break;
        default: throw Error("TwoGeneratorRep::evaluate: letter out of range");
      }
    }
    return m;
  }
};

// Fricke reconstruction: A = diag(alpha, 1/alpha) with alpha + 1/alpha = x
// and |alpha| > 1; B = [[p, 1], [p s - 1, s]] solves tr B = y, tr AB = z.
inline TwoGeneratorRep two_generator_rep_from_traces(double x, double y, double z) {
  if (std::abs(x) <= 2.0) throw NonHyperbolicGenerator("two_generator_rep_from_traces: |tr A| <= 2");
  if (std::abs(y) <= 2.0) throw NonHyperbolicGenerator("two_generator_rep_from_traces: |tr B| <= 2");
  double root = std::sqrt(x * x - 4.0);
  double alpha = (x > 0 ? x + root : x - root) / 2.0;
  double p = (z - y / alpha) / (alpha - 1.0 / alpha);
  double s = y - p;
  if (std::abs(p * s - 1.0) <= 1e-12) throw Reducible("two_generator_rep_from_traces: common eigenvector");
  Mat2 A = Mat2::diag(alpha, 1.0 / alpha);
  Mat2 B = {p, 1.0, p * s - 1.0, s};
  return {A, B};
}

struct TorusRep {
  Mat2 A, B;
  double boundary_length = 0;
};

// One-holed torus with geodesic boundary; returns the generator images and
// the boundary length solving -2 cosh(l/2) = x^2+y^2+z^2-xyz-2.
inline TorusRep one_holed_torus_rep(const TorusParams& t) {
  if (std::abs(t.x) <= 2.0) throw NonHyperbolicGenerator("one_holed_torus_rep: |x| <= 2");
  if (std::abs(t.y) <= 2.0) throw NonHyperbolicGenerator("one_holed_torus_rep: |y| <= 2");
  double k = t.boundary_trace();
  if (k >= -2.0) throw CuspedOrDegenerate("one_holed_torus_rep: boundary trace >= -2");
  auto rep = two_generator_rep_from_traces(t.x, t.y, t.z);
  return {rep.A, rep.B, 2.0 * std::acosh(-k / 2.0)};
}

struct SurfaceRep2 {
  std::array<Mat2, 4> gen;  // images of a1, b1, a2, b2
  std::array<Mat2, 4> inv;
  double boundary_length = 0;
  double twist = 0;
  bool discreteness_suspect = false;

  const Mat2& image(Letter l) const {
    int g = std::abs(static_cast<int>(l)) - 1;
    return l > 0 ? gen[static_cast<std::size_t>(g)] : inv[static_cast<std::size_t>(g)];
  }

  Mat2 evaluate(const Word& w) const {
    Mat2 m;
    for (Letter l : w.letters) m = m * image(l);
    return m;
  }
};

inline SurfaceRep2 make_surface_rep(const std::array<Mat2, 4>& images, double boundary_length, double twist) {
  SurfaceRep2 r;
  r.gen = images;
  for (std::size_t i = 0; i < 4; ++i) r.inv[i] = images[i].inverse();
  r.boundary_length = boundary_length;
  r.twist = twist;
  Word relator{1, 2, -1, -2, 3, 4, -3, -4};
  Mat2 rel = r.evaluate(relator);
  Mat2 id = Mat2::identity();
  Mat2 neg = {-1, 0, 0, -1};
  if (rel.max_abs_diff(id) > 1e-9 && rel.max_abs_diff(neg) > 1e-9)
    throw Error("make_surface_rep: relator image is not +-identity");
  Mat2 c = r.evaluate(Word{1, 2, -1, -2});
  if (std::abs(c.trace() + 2.0 * std::cosh(boundary_length / 2.0)) > 1e-9)
    throw Error("make_surface_rep: boundary trace mismatch");
  return r;
}

// Upper bound for the systole: minimum translation length over enumerated
// conjugacy classes up to the given word length.  Every class is represented
// by a cyclically reduced scan leaf, so the scan minimum equals the class
// minimum without canonicalization.
inline double systole_probe(const SurfaceRep2& rep, int max_word_len) {
  if (max_word_len < 2) throw Error("systole_probe: max_word_len must be >= 2");
  struct Visitor {
    const SurfaceRep2& rep;
    std::vector<Mat2> stack;
    double best = std::numeric_limits<double>::infinity();
    void push(Letter l) { stack.push_back(stack.back() * rep.image(l)); }
    void pop() { stack.pop_back(); }
    void leaf(std::span<const Letter>) { best = std::min(best, sl2_translation_length(stack.back())); }
  } v{rep, {Mat2::identity()}};
  scan_cyclic_words(4, max_word_len, v);
  return v.best;
}

// Post-conjugates the Gamma2 images by the time-t translation along the axis
// of rho([a1,b1]); gluing with twist s followed by apply_twist(t) equals
// gluing with twist s+t.
inline SurfaceRep2 apply_twist(const SurfaceRep2& rep, double t) {
  Mat2 c = rep.evaluate(Word{1, 2, -1, -2});
  Mat2 tw = axis_translation(c, t);
  Mat2 twi = tw.inverse();
  std::array<Mat2, 4> images = rep.gen;
  images[2] = tw * rep.gen[2] * twi;
  images[3] = tw * rep.gen[3] * twi;
  SurfaceRep2 out = make_surface_rep(images, rep.boundary_length, rep.twist + t);
  out.discreteness_suspect = rep.discreteness_suspect;
  return out;
}

// Glues two one-holed tori along their boundary, matching boundary
// holonomies inversely; the twist translates the second factor along the
// axis of rho([a1,b1]) before gluing.  probe_len > 0 runs a short-word
// census and flags suspiciously short elements.
inline SurfaceRep2 glue_genus2(const TorusParams& p1, const TorusParams& p2, double twist, int probe_len = 6) {
  TorusRep t1 = one_holed_torus_rep(p1);
  TorusRep t2 = one_holed_torus_rep(p2);
  if (std::abs(t1.boundary_length - t2.boundary_length) > 1e-9)
    throw BoundaryMismatch("glue_genus2: boundary lengths differ");

  auto comm = [](const Mat2& u, const Mat2& v) { return u * v * u.inverse() * v.inverse(); };
  Mat2 mc = comm(t1.A, t1.B);       // rho([a1,b1])
  Mat2 target = mc.inverse();       // required [rho(a2), rho(b2)]
  Mat2 m2 = comm(t2.A, t2.B);

  Mat2 pt = eigen_frame_desc(target);
  Mat2 p2f = eigen_frame_desc(m2);
  // The conjugator must preserve orientation, else the second handle lands on
  // the wrong side of the gluing axis; eigenvectors are sign-ambiguous, so
  // align the frame determinants.
  if (pt.det() * p2f.det() < 0) {
    p2f.b = -p2f.b;
    p2f.d = -p2f.d;
  }
  double det2 = p2f.det();
  Mat2 p2inv = {p2f.d / det2, -p2f.b / det2, -p2f.c / det2, p2f.a / det2};
  Mat2 g0 = pt * p2inv;
  Mat2 tw = axis_translation(mc, twist);
  Mat2 conj = tw * g0;
  // conj has unit determinant only up to the frame normalizations; conjugation
  // is scale-blind, so rescale explicitly to keep dets at one.
  double sc = std::sqrt(std::abs(conj.det()));
  conj = {conj.a / sc, conj.b / sc, conj.c / sc, conj.d / sc};
  Mat2 conj_inv = conj.inverse();

  std::array<Mat2, 4> images{t1.A, t1.B, conj * t2.A * conj_inv, conj * t2.B * conj_inv};
  SurfaceRep2 rep = make_surface_rep(images, t1.boundary_length, twist);
  if (probe_len >= 2) {
    double sys = systole_probe(rep, probe_len);
    rep.discreteness_suspect = sys < 1e-3;
  }
  return rep;
}

// Hyperbolic pair of pants with boundary lengths (a, b, c): the standard
// two-generator holonomy with all three traces negative.
inline TwoGeneratorRep pants_rep(double a, double b, double c) {
  if (!(a > 0) || !(b > 0) || !(c > 0)) throw Error("pants_rep: boundary lengths must be positive");
  double x = -2.0 * std::cosh(a / 2.0);
  double y = -2.0 * std::cosh(b / 2.0);
  double z = -2.0 * std::cosh(c / 2.0);
  auto rep = two_generator_rep_from_traces(x, y, z);
  return rep;
}

}  // namespace hitchin
