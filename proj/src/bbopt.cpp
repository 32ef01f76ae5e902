#include "expmath/bbopt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "expmath/errors.hpp"

namespace expmath::bbopt {

namespace {

bool finite(const Vector& v) { return v.allFinite(); }

void require_finite(double f, const Vector& g) {
  if (!std::isfinite(f) || !finite(g)) throw Error(ErrorKind::NonFinite, "objective or gradient is not finite");
}

Vector checked_gradient(const ObjectiveFunction& f, const Vector& x) {
  Vector g = f.gradient(x);
  if (g.size() != x.size()) throw Error(ErrorKind::InvalidArgument, "gradient dimension differs from point dimension");
  return g;
}

void require_start(const ObjectiveFunction& f, const Vector& x0, double tol, long max_iter) {
  if (x0.size() != f.dimension) throw Error(ErrorKind::InvalidArgument, "x0 dimension differs from the objective's");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (max_iter < 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 0");
}

Variant other(Variant v) { return v == Variant::BB1 ? Variant::BB2 : Variant::BB1; }

}  // namespace

double bb_step(const Vector& s, const Vector& y, Variant variant) {
  if (s.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "s and y differ in dimension");
  const double sy = s.dot(y);
  const double num = variant == Variant::BB1 ? s.squaredNorm() : sy;
  const double den = variant == Variant::BB1 ? sy : y.squaredNorm();
  if (den == 0.0 || !std::isfinite(den) || !std::isfinite(num))
    throw Error(ErrorKind::DegenerateDenominator,
                variant == Variant::BB1 ? "s'y is zero in the BB1 step" : "y is zero in the BB2 step");
  return num / den;
}

MinimizeResult bb_minimize(const ObjectiveFunction& f, const Vector& x0, double tol, long max_iter, Variant variant,
                           const SafeguardConfig& safeguard) {
  require_start(f, x0, tol, max_iter);
  BBState state;
  state.x_k = x0;
  state.g_k = checked_gradient(f, x0);
  double fx = f.evaluate(x0);
  require_finite(fx, state.g_k);

  MinimizeResult result;
  const auto record = [&](double gamma) {
    if (safeguard.record_trace) result.trace.push_back(TraceEntry{state.k, fx, state.g_k.norm(), gamma});
  };
  record(0.0);

  double gnorm = state.g_k.norm();
  state.gamma_k = gnorm > 0.0 ? std::clamp(1.0 / gnorm, safeguard.gamma_min, safeguard.gamma_max) : 1.0;
  std::deque<double> recent{fx};

  while (gnorm > tol && state.k < max_iter) {
    double gamma = state.gamma_k;
    Vector x_new = state.x_k - gamma * state.g_k;
    double f_new = f.evaluate(x_new);
    if (safeguard.nonmonotone) {
      const double ceiling = *std::max_element(recent.begin(), recent.end());
      int halvings = 0;
      while (!std::isfinite(f_new) || f_new > ceiling) {
        if (++halvings > safeguard.max_halvings)
          throw Error(ErrorKind::SafeguardExhausted,
                      "no acceptable step after " + std::to_string(safeguard.max_halvings) + " halvings");
        gamma /= 2.0;
        x_new = state.x_k - gamma * state.g_k;
        f_new = f.evaluate(x_new);
      }
    }
    Vector g_new = checked_gradient(f, x_new);
    require_finite(f_new, g_new);

    state.x_km1 = std::move(state.x_k);
    state.g_km1 = std::move(state.g_k);
    state.x_k = std::move(x_new);
    state.g_k = std::move(g_new);
    ++state.k;
    fx = f_new;
    gnorm = state.g_k.norm();
    record(gamma);

    recent.push_back(fx);
    if (static_cast<int>(recent.size()) > std::max(1, safeguard.memory)) recent.pop_front();

    const Vector s = state.x_k - state.x_km1;
    const Vector y = state.g_k - state.g_km1;
    double next = gamma;
    for (Variant v : {variant, other(variant)}) {
      try {
        const double candidate = bb_step(s, y, v);
        if (candidate > 0.0 && std::isfinite(candidate)) {
          next = candidate;
          break;
        }
      } catch (const Error&) {
        // try the next fallback
      }
    }
    state.gamma_k = std::clamp(next, safeguard.gamma_min, safeguard.gamma_max);
    if (safeguard.observer) safeguard.observer(state);
  }

  result.x = state.x_k;
  result.f = fx;
  result.iterations = state.k;
  result.converged = gnorm <= tol;
  return result;
}

MinimizeResult steepest_descent_baseline(const ObjectiveFunction& f, const Vector& x0, double tol, long max_iter) {
  require_start(f, x0, tol, max_iter);
  Vector x = x0;
  Vector g = checked_gradient(f, x);
  double fx = f.evaluate(x);
  require_finite(fx, g);

  MinimizeResult result;
  result.trace.push_back(TraceEntry{0, fx, g.norm(), 0.0});
  long k = 0;
  double alpha = 1.0;
  while (g.norm() > tol && k < max_iter) {
    const double gg = g.squaredNorm();
    if (f.hessian) {
      const double curvature = g.dot(*f.hessian * g);
      if (!(curvature > 0.0)) throw Error(ErrorKind::DomainViolation, "Hessian is not positive along the gradient");
      alpha = gg / curvature;
    } else {
      // Armijo backtracking from twice the previous step.
      alpha = std::min(alpha * 2.0, 1e10);
      int halvings = 0;
      while (true) {
        const double trial = f.evaluate(x - alpha * g);
        if (std::isfinite(trial) && trial <= fx - 1e-4 * alpha * gg) break;
        if (++halvings > 200) throw Error(ErrorKind::SafeguardExhausted, "backtracking found no decrease");
        alpha /= 2.0;
      }
    }
    x -= alpha * g;
    g = checked_gradient(f, x);
    fx = f.evaluate(x);
    require_finite(fx, g);
    ++k;
    result.trace.push_back(TraceEntry{k, fx, g.norm(), alpha});
  }
  result.x = x;
  result.f = fx;
  result.iterations = k;
  result.converged = g.norm() <= tol;
  return result;
}

ObjectiveFunction quadratic(const Matrix& A, const std::optional<Vector>& b) {
  if (A.rows() != A.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  if (b && b->size() != A.rows()) throw Error(ErrorKind::InvalidArgument, "b dimension differs from A");
  const Vector lin = b ? *b : Vector::Zero(A.rows());
  ObjectiveFunction out;
  out.dimension = static_cast<int>(A.rows());
  out.evaluate = [A, lin](const Vector& x) { return 0.5 * x.dot(A * x) - lin.dot(x); };
  out.gradient = [A, lin](const Vector& x) -> Vector { return A * x - lin; };
  out.hessian = A;
  return out;
}

ObjectiveFunction rosenbrock(double a, double b) {
  ObjectiveFunction out;
  out.dimension = 2;
  out.evaluate = [a, b](const Vector& x) {
    const double u = a - x[0];
    const double v = x[1] - x[0] * x[0];
    return u * u + b * v * v;
  };
  out.gradient = [a, b](const Vector& x) -> Vector {
    const double v = x[1] - x[0] * x[0];
    Vector g(2);
    g[0] = -2.0 * (a - x[0]) - 4.0 * b * x[0] * v;
    g[1] = 2.0 * b * v;
    return g;
  };
  return out;
}

Matrix random_spd(int n, double lambda_min, double lambda_max, std::mt19937_64& rng) {
  if (n < 1 || !(lambda_min > 0.0) || !(lambda_max >= lambda_min))
    throw Error(ErrorKind::InvalidArgument, "need n >= 1 and 0 < lambda_min <= lambda_max");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(lambda_min, lambda_max);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = uniform(rng);
  d[0] = lambda_min;
  if (n > 1) d[n - 1] = lambda_max;
  Matrix a = q * d.asDiagonal() * q.transpose();
  return (a + a.transpose()) / 2.0;
}

std::vector<std::string> problem_names() { return {"isotropic", "quad", "rosenbrock"}; }

TestProblem problem(const std::string& name) {
  if (name == "isotropic") return {name, quadratic(Matrix::Identity(2, 2)), Vector{{3.0, -4.0}}, false};
  if (name == "quad") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 100.0;
    return {name, quadratic(a), Vector{{100.0, 1.0}}, false};
  }
  if (name == "rosenbrock") return {name, rosenbrock(), Vector{{-1.2, 1.0}}, true};
  throw Error(ErrorKind::InvalidArgument, "unknown problem '" + name + "'");
}

Vector finite_difference_gradient(const ObjectiveFunction& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * (1.0 + std::fabs(x[i]));
    Vector plus = x, minus = x;
    plus[i] += step;
    minus[i] -= step;
    g[i] = (f.evaluate(plus) - f.evaluate(minus)) / (2.0 * step);
  }
  return g;
}

}  // namespace expmath::bbopt
