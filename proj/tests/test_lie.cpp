#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hitchin/lie.hpp"

using namespace hitchin;

namespace {

Mat2 random_sl2(std::mt19937_64& rng, double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (;;) {
    Mat2 m{u(rng), u(rng), u(rng), 0};
    if (std::abs(m.a) < 1e-3) continue;
    m.d = (1.0 + m.b * m.c) / m.a;
    return m;
  }
}

// Trace capped so the full spectrum of the lift stays well conditioned for
// the direct eigensolver (the evaluator path has no such restriction).
Mat2 random_hyperbolic(std::mt19937_64& rng) {
  for (;;) {
    Mat2 m = random_sl2(rng, 2.0);
    if (std::abs(m.trace()) > 2.1 && std::abs(m.trace()) < 6.0) return m;
  }
}

double frobenius(const Eigen::MatrixXd& m) { return m.norm(); }

}  // namespace

TEST_CASE("irreducible rep: defining cases") {
  Mat2 m{0.3, -1.2, 0.7, (1.0 + (-1.2) * 0.7) / 0.3};
  MatD t2 = irreducible_rep(2, m);
  CHECK(std::abs(t2.m(0, 0) - m.a) < 1e-15);
  CHECK(std::abs(t2.m(0, 1) - m.b) < 1e-15);
  CHECK(std::abs(t2.m(1, 0) - m.c) < 1e-15);
  CHECK(std::abs(t2.m(1, 1) - m.d) < 1e-15);

  double s = 1.7;
  MatD t3 = irreducible_rep(3, Mat2::diag(s, 1 / s));
  Eigen::Vector3d want(s * s, 1.0, 1.0 / (s * s));
  CHECK(frobenius(t3.m - Eigen::MatrixXd(want.asDiagonal())) < 1e-12);

  MatD u3 = irreducible_rep(3, {1, 1, 0, 1});
  Eigen::Matrix3d expect;
  double r2 = std::sqrt(2.0);
  expect << 1, r2, 1, 0, 1, r2, 0, 0, 1;
  CHECK(frobenius(u3.m - expect) < 1e-12);
}

TEST_CASE("irreducible rep: homomorphism over random pairs") {
  std::mt19937_64 rng(314159);
  for (int d = 3; d <= 6; ++d) {
    for (int trial = 0; trial < 250; ++trial) {
      Mat2 m = random_sl2(rng), n = random_sl2(rng);
      MatD lhs = irreducible_rep(d, m * n);
      MatD prod = irreducible_rep(d, m) * irreducible_rep(d, n);
      CHECK(frobenius(lhs.m - prod.m) <= 1e-9 * std::max(1.0, frobenius(prod.m)));
    }
  }
}

TEST_CASE("irreducible rep: rotations map to orthogonal matrices") {
  for (int d = 2; d <= 6; ++d) {
    for (double theta : {0.3, 1.1, 2.9}) {
      Mat2 rot{std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
      MatD t = irreducible_rep(d, rot);
      Eigen::MatrixXd gram = t.m.transpose() * t.m;
      CHECK(frobenius(gram - Eigen::MatrixXd::Identity(d, d)) < 1e-10);
    }
  }
}

TEST_CASE("jordan projection basics") {
  Eigen::Matrix3d diag = Eigen::Vector3d(2.0, 1.0, 0.5).asDiagonal();
  CartanVec l = jordan_projection(MatD(diag));
  CHECK(l.weyl_sorted);
  CHECK(std::abs(l.v[0] - std::log(2.0)) < 1e-12);
  CHECK(std::abs(l.v[1]) < 1e-12);
  CHECK(std::abs(l.v[2] + std::log(2.0)) < 1e-12);
  CHECK(std::abs(l.sum()) < 1e-9);

  Eigen::Matrix3d uni;
  uni << 1, 5, -2, 0, 1, 3, 0, 0, 1;
  CartanVec lu = jordan_projection(MatD(uni));
  CHECK(lu.v.cwiseAbs().maxCoeff() < 1e-9);

  MatD g(Eigen::MatrixXd(Eigen::Vector3d(3.0, 1.0, 1.0 / 3.0).asDiagonal()));
  CartanVec lg = jordan_projection(g);
  CartanVec lgi = jordan_projection(g.inverse());
  for (int i = 0; i < 3; ++i) CHECK(std::abs(lgi.v[i] + lg.v[2 - i]) < 1e-12);
}

TEST_CASE("jordan projection: conjugation invariance") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Mat2 h = random_hyperbolic(rng);
    MatD g = irreducible_rep(4, h);
    Eigen::Matrix4d c = Eigen::Matrix4d::Identity();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) c(i, j) += 0.3 * u(rng);
    if (std::abs(c.determinant()) < 1e-3) continue;
    MatD conj(c * g.m * c.inverse());
    CartanVec l1 = jordan_projection(g);
    CartanVec l2 = jordan_projection(conj);
    CHECK((l1.v - l2.v).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("cartan projection basics") {
  Eigen::Matrix3d diag = Eigen::Vector3d(2.0, 1.0, 0.5).asDiagonal();
  CartanVec k = cartan_projection(MatD(diag));
  CHECK(std::abs(k.v[0] - std::log(2.0)) < 1e-12);
  CHECK(std::abs(k.v[2] + std::log(2.0)) < 1e-12);

  double th = 0.77;
  MatD rot = irreducible_rep(5, {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)});
  CHECK(cartan_projection(rot).v.cwiseAbs().maxCoeff() < 1e-10);

  Eigen::Matrix2d shear;
  shear << 1, 1, 0, 1;
  CartanVec ks = cartan_projection(MatD(shear));
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(ks.v[0] - std::log(phi)) < 1e-12);
  CHECK(std::abs(ks.v[1] + std::log(phi)) < 1e-12);
}

TEST_CASE("cartan majorizes jordan") {
  std::mt19937_64 rng(512);
  for (int trial = 0; trial < 100; ++trial) {
    MatD g = irreducible_rep(4, random_sl2(rng));
    CHECK(cartan_projection(g).v[0] >= jordan_projection(g).v[0] - 1e-10);
  }
}

TEST_CASE("alpha0 calibration constants") {
  CHECK(calibrate_alpha0(2).c == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(calibrate_alpha0(3).c == Catch::Approx(0.25).epsilon(1e-14));
  CHECK(calibrate_alpha0(4).c == Catch::Approx(0.1).epsilon(1e-14));
  for (int d = 2; d <= 8; ++d) {
    Alpha0 a = calibrate_alpha0(d);
    for (int i = 0; i + 1 < d; ++i) CHECK(a.weights[i] > a.weights[i + 1]);
    for (int i = 0; i < d; ++i) CHECK(std::abs(a.weights[i] + a.weights[d - 1 - i]) < 1e-14);
  }

  Eigen::VectorXd bad(3);
  bad << 1, 1, -1;
  CHECK_THROWS_AS(calibrate_alpha0(3, &bad), Error);
  Eigen::VectorXd skew(3);
  skew << 2, 0, -1;
  CHECK_THROWS_AS(calibrate_alpha0(3, &skew), Error);

  // A custom admissible functional calibrates so the diagonal flow has unit
  // speed: evaluate on the lift of a known hyperbolic element.
  Eigen::VectorXd w(3);
  w << 3, 0, -3;
  Alpha0 custom = calibrate_alpha0(3, &w);
  MatD g = irreducible_rep(3, Mat2::diag(std::exp(0.5), std::exp(-0.5)));
  CHECK(finsler_length(g, custom) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("finsler norm values and symmetry") {
  Alpha0 a3 = calibrate_alpha0(3);
  CHECK(finsler_norm(cartan_vec({2, 0, -2}), a3) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(finsler_norm(cartan_vec({1, -2, 1}), a3) == Catch::Approx(1.5).epsilon(1e-12));

  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int d = 2; d <= 6; ++d) {
    Alpha0 a = calibrate_alpha0(d);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> raw(static_cast<std::size_t>(d));
      double mean = 0;
      for (double& x : raw) mean += (x = u(rng));
      mean /= d;
      std::vector<double> neg;
      for (double& x : raw) {
        x -= mean;
        neg.push_back(-x);
      }
      double f = finsler_norm(cartan_vec(raw), a);
      CHECK(f >= 0);
      CHECK(finsler_norm(cartan_vec(neg), a) == Catch::Approx(f).margin(1e-12));
    }
  }
}

TEST_CASE("finsler length: calibration against hyperbolic length") {
  Alpha0 a3 = calibrate_alpha0(3);
  CHECK(finsler_length(MatD::identity(3), a3) == Catch::Approx(0.0).margin(1e-12));
  MatD g = irreducible_rep(3, Mat2::diag(std::exp(1.0), std::exp(-1.0)));
  CHECK(finsler_length(g, a3) == Catch::Approx(2.0).epsilon(1e-10));

  std::mt19937_64 rng(161803);
  for (int d = 2; d <= 6; ++d) {
    Alpha0 a = calibrate_alpha0(d);
    for (int trial = 0; trial < 40; ++trial) {
      Mat2 h = random_hyperbolic(rng);
      CHECK(finsler_length(irreducible_rep(d, h), a) ==
            Catch::Approx(sl2_translation_length(h)).epsilon(1e-8));
    }
  }

  // Power scaling for diagonalizable elements.
  Mat2 gg{1.0, 0.7, -0.3, 0.79};
  Mat2 h = gg * Mat2::diag(std::exp(0.5), std::exp(-0.5)) * gg.inverse();
  MatD g4 = irreducible_rep(4, h);
  Alpha0 a4 = calibrate_alpha0(4);
  double base = finsler_length(g4, a4);
  MatD p = g4;
  for (int n = 2; n <= 4; ++n) {
    p = p * g4;
    CHECK(finsler_length(p, a4) == Catch::Approx(n * base).epsilon(1e-9));
  }

  CHECK(finsler_length(g4.inverse(), a4) == Catch::Approx(base).epsilon(1e-9));
}

TEST_CASE("exterior powers") {
  Eigen::Matrix3d diag = Eigen::Vector3d(2.0, 3.0, 5.0).asDiagonal();
  MatD w2 = exterior_power(MatD(diag), 2);
  REQUIRE(w2.dim() == 3);
  Eigen::Vector3d want(6.0, 10.0, 15.0);  // {01, 02, 12} wedge basis
  CHECK(frobenius(w2.m - Eigen::MatrixXd(want.asDiagonal())) < 1e-12);

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    MatD g = irreducible_rep(4, random_hyperbolic(rng));
    CartanVec l = jordan_projection(g);
    double top2 = log_spectral_radius(exterior_power(g, 2));
    CHECK(top2 == Catch::Approx(l.v[0] + l.v[1]).margin(1e-8));

    MatD h = irreducible_rep(4, random_sl2(rng));
    MatD lhs = exterior_power(g * h, 2);
    MatD rhs = exterior_power(g, 2) * exterior_power(h, 2);
    CHECK(frobenius(lhs.m - rhs.m) <= 1e-9 * std::max(1.0, frobenius(rhs.m)));
  }

  CHECK(exterior_power(MatD::identity(5), 2).dim() == 10);
  CHECK(exterior_power(MatD::identity(6), 3).dim() == 20);
}

TEST_CASE("loxodromy gaps") {
  Eigen::Matrix3d diag = Eigen::Vector3d(4.0, 2.0, 0.125).asDiagonal();
  auto gaps = loxodromy_gaps(MatD(diag));
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0] == Catch::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(gaps[1] == Catch::Approx(std::log(16.0)).epsilon(1e-12));

  Eigen::Matrix3d uni;
  uni << 1, 2, 0, 0, 1, -1, 0, 0, 1;
  for (double g : loxodromy_gaps(MatD(uni))) CHECK(std::abs(g) < 1e-9);

  double t = 1.3;
  MatD g = irreducible_rep(3, Mat2::diag(std::exp(t / 2), std::exp(-t / 2)));
  auto tg = loxodromy_gaps(g);
  CHECK(tg[0] == Catch::Approx(t).epsilon(1e-10));
  CHECK(tg[1] == Catch::Approx(t).epsilon(1e-10));
}

TEST_CASE("long products stay finite and calibrated") {
  SurfaceRep2 rep = glue_genus2({4, 4, 4}, {4, 4, 4}, 0.25, 0);
  for (int d : {3, 5}) {
    RepD lifted = lift_rep(rep, d);
    Alpha0 a = calibrate_alpha0(d);
    JordanEvaluator je(lifted);

    Word a1{1};
    Word big = a1.power(100);
    double unit = sl2_translation_length(rep.gen[0]);
    CHECK(je.length(big, a) == Catch::Approx(100.0 * unit).epsilon(1e-9));

    // Mixed word: the evaluator must agree with hyperbolic length through
    // the calibrated functional at the Fuchsian point.
    Word w = parse_word("abAcBdCa");
    double ls = sl2_translation_length(rep.evaluate(w));
    CHECK(je.length(w, a) == Catch::Approx(ls).epsilon(1e-8));

    CartanVec jv = je.jordan(w);
    CHECK(std::abs(jv.sum()) < 1e-9);
    for (int i = 0; i + 1 < d; ++i) CHECK(jv.v[i] >= jv.v[i + 1] - 1e-9);
  }
}

TEST_CASE("jordan evaluator matches direct projection on short words") {
  SurfaceRep2 rep = glue_genus2({4.5, 3.7, 4.2}, {4.5, 3.7, 4.2}, 0.1, 0);
  RepD lifted = lift_rep(rep, 3);
  JordanEvaluator je(lifted);
  for (const Word& w : enumerate_classes(Presentation::genus2(), 3)) {
    CartanVec direct = jordan_projection(lifted.evaluate(w));
    CartanVec fast = je.jordan(w);
    CHECK((direct.v - fast.v).cwiseAbs().maxCoeff() < 1e-7);
  }
}
