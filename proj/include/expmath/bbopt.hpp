#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace expmath::bbopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct ObjectiveFunction {
  int dimension = 0;
  std::function<double(const Vector&)> evaluate;
  std::function<Vector(const Vector&)> gradient;
  /// Constant Hessian when F is quadratic; enables exact line search.
  std::optional<Matrix> hessian;
};

enum class Variant {
  BB1,  // s's / s'y
  BB2,  // s'y / y'y
};

/// Two-point step size from s = x_k - x_{k-1} and y = grad_k - grad_{k-1}.
/// Throws DegenerateDenominator when the denominator is zero or not finite.
double bb_step(const Vector& s, const Vector& y, Variant variant);

/// Everything the driver carries between iterations.
struct BBState {
  Vector x_k;
  Vector x_km1;
  Vector g_k;
  Vector g_km1;
  long k = 0;
  double gamma_k = 0.0;
};

struct SafeguardConfig {
  /// Reject a step whose F exceeds the largest of the last `memory` accepted
  /// values (or is not finite) and halve gamma.
  bool nonmonotone = false;
  int memory = 10;
  int max_halvings = 60;
  /// Bootstrap gamma_0 = 1/||grad F(x0)|| is clamped to this range, and so
  /// is every later step.
  double gamma_min = 1e-10;
  double gamma_max = 1e10;
  bool record_trace = true;
  /// Called with the state after each accepted step.
  std::function<void(const BBState&)> observer;
};

struct TraceEntry {
  long k = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double gamma = 0.0;  // step taken to reach this iterate
};

struct MinimizeResult {
  Vector x;
  double f = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

/// x_{k+1} = x_k - gamma_k grad F(x_k) with two-point (BB) steps. When a
/// step is unusable (zero denominator, or s'y <= 0 so the step would point
/// uphill) the other variant is tried, then the previous gamma is reused.
/// Stops at ||grad F|| <= tol or after max_iter steps.
MinimizeResult bb_minimize(const ObjectiveFunction& f, const Vector& x0, double tol, long max_iter, Variant variant,
                           const SafeguardConfig& safeguard = {});

/// Steepest descent: exact line search when f carries a Hessian, Armijo
/// backtracking otherwise.
MinimizeResult steepest_descent_baseline(const ObjectiveFunction& f, const Vector& x0, double tol, long max_iter);

/// F = 1/2 x'Ax - b'x.
ObjectiveFunction quadratic(const Matrix& A, const std::optional<Vector>& b = std::nullopt);
ObjectiveFunction rosenbrock(double a = 1.0, double b = 100.0);
/// Symmetric positive definite n x n matrix with eigenvalues drawn from
/// [lambda_min, lambda_max] and a random orthogonal eigenbasis.
Matrix random_spd(int n, double lambda_min, double lambda_max, std::mt19937_64& rng);

struct TestProblem {
  std::string name;
  ObjectiveFunction objective;
  Vector x0;
  bool nonconvex = false;
};

/// Bundled problems: "isotropic" (1/2 ||x||^2 from (3, -4)), "quad"
/// (1/2 (x1^2 + 100 x2^2) from (100, 1)), "rosenbrock" (from (-1.2, 1)).
std::vector<std::string> problem_names();
TestProblem problem(const std::string& name);

/// Central-difference gradient with step h (scaled by 1 + |x_i|).
Vector finite_difference_gradient(const ObjectiveFunction& f, const Vector& x, double h = 1e-6);

}  // namespace expmath::bbopt
