#include <cmath>
#include <random>

#include "doctest.h"
#include "expmath/bbopt.hpp"
#include "expmath/errors.hpp"

using namespace expmath;
using namespace expmath::bbopt;

namespace {

Matrix diag(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("bb_step examples") {
  // For A = cI both variants give 1/c.
  const Vector s1{{-1.0}}, y1{{-1.0}};
  CHECK(bb_step(s1, y1, Variant::BB1) == 1.0);
  CHECK(bb_step(s1, y1, Variant::BB2) == 1.0);
  CHECK(1.0 - bb_step(s1, y1, Variant::BB2) * 1.0 == 0.0);

  const Vector s{{-0.5, -0.75}}, y{{-0.5, -2.25}};
  CHECK(bb_step(s, y, Variant::BB2) == doctest::Approx(1.9375 / 5.3125).epsilon(1e-15));
  CHECK(bb_step(s, y, Variant::BB2) == doctest::Approx(0.3647058823).epsilon(1e-9));
  CHECK(bb_step(s, y, Variant::BB1) == doctest::Approx(0.8125 / 1.9375).epsilon(1e-15));
  CHECK(bb_step(s, y, Variant::BB1) == doctest::Approx(0.4193548387).epsilon(1e-9));
}

TEST_CASE("bb_step degenerate denominators") {
  const Vector zero = Vector::Zero(2);
  const Vector s{{1.0, 0.0}}, y{{0.0, 1.0}};
  try {
    bb_step(s, zero, Variant::BB2);
    FAIL("expected degenerate denominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDenominator);
  }
  CHECK_THROWS_AS(bb_step(s, y, Variant::BB1), Error);  // s'y = 0
  CHECK_THROWS_AS(bb_step(s, Vector::Zero(3), Variant::BB1), Error);
}

TEST_CASE("isotropic quadratic converges in two steps") {
  const auto p = problem("isotropic");
  for (Variant v : {Variant::BB1, Variant::BB2}) {
    const auto r = bb_minimize(p.objective, p.x0, 1e-12, 100, v);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    CHECK(r.x.norm() == 0.0);
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[2].gamma == 1.0);
  }
  const auto sd = steepest_descent_baseline(p.objective, p.x0, 1e-12, 100);
  CHECK(sd.iterations == 1);
}

TEST_CASE("BB beats steepest descent on the ill-conditioned quadratic") {
  const auto p = problem("quad");
  const auto sd = steepest_descent_baseline(p.objective, p.x0, 1e-8, 100000);
  REQUIRE(sd.converged);
  for (Variant v : {Variant::BB1, Variant::BB2}) {
    const auto bb = bb_minimize(p.objective, p.x0, 1e-8, 100000, v);
    REQUIRE(bb.converged);
    CHECK(bb.iterations < sd.iterations);
    CHECK(sd.iterations >= 2 * bb.iterations);
    CHECK(bb.f < 1e-14);
  }
}

TEST_CASE("zero-gradient start returns immediately") {
  const auto p = problem("quad");
  const Vector origin = Vector::Zero(2);
  CHECK(steepest_descent_baseline(p.objective, origin, 1e-8, 10).iterations == 0);
  const auto r = bb_minimize(p.objective, origin, 1e-8, 10, Variant::BB2);
  CHECK(r.iterations == 0);
  CHECK(r.converged);
}

TEST_CASE("Rosenbrock with the nonmonotone safeguard") {
  const auto p = problem("rosenbrock");
  SafeguardConfig sg;
  sg.nonmonotone = true;
  // Regression anchors: iteration counts observed on this implementation.
  const std::pair<Variant, long> anchors[] = {{Variant::BB1, 39}, {Variant::BB2, 731}};
  for (const auto& [v, anchor] : anchors) {
    const auto r = bb_minimize(p.objective, p.x0, 1e-6, 5000, v, sg);
    CAPTURE(r.iterations);
    CHECK(r.converged);
    CHECK(r.iterations <= 5000);
    CHECK(std::fabs(r.x[0] - 1.0) < 1e-5);
    CHECK(std::fabs(r.x[1] - 1.0) < 1e-5);
    CHECK(r.iterations == anchor);
  }
}

TEST_CASE("BB steps on SPD quadratics lie between the extreme eigenvalue reciprocals") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix a = random_spd(5, 0.5 + trial * 0.1, 50.0 + trial, rng);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    Vector x0(5);
    for (int i = 0; i < 5; ++i) x0[i] = normal(rng) * 10.0;
    for (Variant v : {Variant::BB1, Variant::BB2}) {
      long checked = 0;
      SafeguardConfig sg;
      sg.observer = [&](const BBState& s) {
        if ((s.g_k - s.g_km1).norm() == 0.0) return;
        const double g = bb_step(s.x_k - s.x_km1, s.g_k - s.g_km1, v);
        CHECK(g >= (1.0 / lmax) * (1.0 - 1e-10));
        CHECK(g <= (1.0 / lmin) * (1.0 + 1e-10));
        ++checked;
      };
      const auto r = bb_minimize(quadratic(a), x0, 1e-9, 10000, v, sg);
      CHECK(r.converged);
      CHECK(checked > 0);
    }
  }
}

TEST_CASE("supplied gradients match central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<ObjectiveFunction> fs;
  for (const auto& name : problem_names()) fs.push_back(problem(name).objective);
  fs.push_back(quadratic(random_spd(5, 1.0, 10.0, rng), Vector::Ones(5)));
  for (const auto& f : fs) {
    for (int trial = 0; trial < 10; ++trial) {
      Vector x(f.dimension);
      for (int i = 0; i < f.dimension; ++i) x[i] = u(rng);
      const Vector g = f.gradient(x);
      CHECK(g.size() == x.size());
      const Vector fd = finite_difference_gradient(f, x);
      CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("scaling F leaves the iterate sequence unchanged") {
  const Matrix a = diag(1.0, 100.0);
  const Vector x0{{100.0, 1.0}};
  for (double c : {8.0, 3.0}) {
    std::vector<Vector> base, scaled;
    SafeguardConfig sg1, sg2;
    sg1.observer = [&](const BBState& s) { base.push_back(s.x_k); };
    sg2.observer = [&](const BBState& s) { scaled.push_back(s.x_k); };
    const auto r1 = bb_minimize(quadratic(a), x0, 1e-8, 1000, Variant::BB2, sg1);
    const auto r2 = bb_minimize(quadratic(a * c), x0, 1e-8 * c, 1000, Variant::BB2, sg2);
    CHECK(r1.iterations == r2.iterations);
    const std::size_t n = std::min<std::size_t>(base.size(), 12);
    for (std::size_t i = 0; i < n; ++i) {
      if (c == 8.0) {
        CHECK(base[i] == scaled[i]);  // power of two: bit-identical
      } else {
        CHECK((base[i] - scaled[i]).norm() <= 1e-9 * (1.0 + base[i].norm()));
      }
    }
  }
}

TEST_CASE("errors and fallbacks") {
  const auto p = problem("quad");
  CHECK_THROWS_AS(bb_minimize(p.objective, Vector::Zero(3), 1e-8, 10, Variant::BB1), Error);
  CHECK_THROWS_AS(bb_minimize(p.objective, p.x0, 0.0, 10, Variant::BB1), Error);

  ObjectiveFunction bad = p.objective;
  bad.evaluate = [](const Vector& x) { return x[0] > 50.0 ? 1.0 : std::nan(""); };
  try {
    bb_minimize(bad, p.x0, 1e-8, 10, Variant::BB2);
    FAIL("expected non-finite error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }

  // A step that never decreases F exhausts the safeguard.
  ObjectiveFunction up;
  up.dimension = 1;
  up.evaluate = [](const Vector& x) { return x[0] == 1.0 ? 0.0 : 1.0; };
  up.gradient = [](const Vector&) -> Vector { return Vector{{1.0}}; };
  SafeguardConfig sg;
  sg.nonmonotone = true;
  sg.max_halvings = 5;
  try {
    bb_minimize(up, Vector{{1.0}}, 1e-8, 10, Variant::BB2, sg);
    FAIL("expected safeguard exhaustion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SafeguardExhausted);
  }

  // Linear F: y = 0 every step, so both variants are degenerate and gamma is kept.
  ObjectiveFunction linear;
  linear.dimension = 2;
  linear.evaluate = [](const Vector& x) { return x.sum(); };
  linear.gradient = [](const Vector&) -> Vector { return Vector::Ones(2); };
  const auto r = bb_minimize(linear, Vector::Zero(2), 1e-8, 5, Variant::BB2);
  CHECK(r.iterations == 5);
  CHECK_FALSE(r.converged);
  for (std::size_t i = 2; i < r.trace.size(); ++i) CHECK(r.trace[i].gamma == r.trace[1].gamma);
}
