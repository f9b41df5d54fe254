#pragma once

#include <functional>
#include <span>
#include <string>

namespace obdiff {

/// Evaluate a (t,x) field at one time over a row of grid nodes.
using RowFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;
/// Dirichlet value at a domain endpoint.
using BoundaryFn = std::function<double(double t)>;
/// Extension value at a ghost node just outside the domain (x is the ghost
/// coordinate, so the problem does not need to know the mesh width).
using GhostFn = std::function<double(double t, double x)>;

/// One instance of the obstacle problem
///   min(v_t - sigma^2/2 v_xx + drift v_x + rate v, v - obstacle) = source
/// on (xmin,xmax) x (0,horizon) with Dirichlet data and, for wide stencils,
/// ghost extensions.  `exact`, when set, is the closed-form solution used for
/// error tables.
struct ProblemSpec {
    double xmin = 0.0;
    double xmax = 1.0;
    double horizon = 1.0;

    RowFn sigma;     // sigma(t,x) > 0 on the grid
    RowFn drift;     // coefficient of v_x
    RowFn rate;      // coefficient of v
    RowFn source;    // f(t,x)
    RowFn obstacle;  // phi(t,x)

    std::function<double(double x)> initial;  // v0
    BoundaryFn dirichlet_left;
    BoundaryFn dirichlet_right;
    GhostFn ghost_left;
    GhostFn ghost_right;

    RowFn exact;  // empty when the problem has no closed-form solution

    bool constant_coefficients = false;  // sigma/drift/rate independent of t
    bool constant_boundary = false;      // dirichlet + ghost independent of t

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Evaluate a RowFn at a single point.
double eval_at(const RowFn& fn, double t, double x);

/// Parameters shared by the two analytic model problems; the same K/lambda/r
/// triple also configures the American put.
struct ModelParams {
    double strike = 100.0;       // K
    double volatility = 0.3;     // lambda
    double rate = 0.1;           // r
    double front_speed = 0.2;    // c0 in x_s(t) = K(1 - c0 t^alpha)
    double front_exponent = 0.5; // alpha in (0,1]
    double horizon = 1.0;        // T
    double xmin = 75.0;
    double xmax = 275.0;

    void validate() const;
    /// Free-boundary position x_s(t).
    double front(double t) const;
    /// d/dt x_s(t); unbounded as t -> 0 when alpha < 1.
    double front_dot(double t) const;
};

inline ModelParams model1_default_params() { return {}; }
inline ModelParams model2_default_params() {
    ModelParams p;
    p.horizon = 0.5;
    p.xmin = 50.0;
    p.xmax = 450.0;
    return p;
}

/// American put test problem: sigma = lambda x, drift = -r x, rate = r,
/// obstacle max(K-x, 0), f = 0, payoff initial data.  No exact solution.
ProblemSpec american_put(double volatility, double rate, double strike, double horizon,
                         double xmin, double xmax);

/// Unique root theta > 0 of b*theta = atan(a*theta), for 0 < b < a, found by
/// safeguarded Newton/bisection on (0, pi/(2b)).  |b*theta - atan(a*theta)|
/// <= tol at the result.
double model2_theta(double a, double b, double tol = 1e-14);

/// Closed form of the first model solution: payoff for x below the front,
/// rational profile phi(x_s) - y/(1 + y/C(t)) above it.  v is C^1 with a jump
/// in v_xx across the front.
struct Model1Solution {
    ModelParams params;

    double curve_c(double t) const;
    double curve_c_dot(double t) const;
    double value(double t, double x) const;
    double v_t(double t, double x) const;
    double v_x(double t, double x) const;
    double v_xx(double t, double x) const;
    /// f = min(v_t + A v, v - phi) evaluated pointwise from the closed-form
    /// derivatives; f(0,.) = 0 (the march never needs t = 0).
    double source(double t, double x) const;
};

/// Closed form of the second model solution: payoff below the front,
/// phi(x_s) - C(t) atan(y/C(t)) above.  v is C^2 with a jump in v_xxx.
struct Model2Solution {
    ModelParams params;

    double theta_of(double t) const;
    double curve_c(double t) const;
    double curve_c_dot(double t) const;
    double value(double t, double x) const;
    double v_t(double t, double x) const;
    double v_x(double t, double x) const;
    double v_xx(double t, double x) const;
    double source(double t, double x) const;
};

ProblemSpec model1(const ModelParams& params = model1_default_params());
ProblemSpec model2(const ModelParams& params = model2_default_params());

/// Smooth obstacle-free problem for temporal order checks:
/// v = s*exp(-t)*sin(x) on (0,pi) with a == 1, b = r = 0, phi == -1e6 and
/// f = v_t - v_xx = 0.  kind 1 gives s = +1 (v decreasing in t), kind 2 gives
/// s = -1 (v increasing in t, so v_t >= 0 and A v <= 0 hold and the scheme
/// for the HJB form tracks the same solution).
ProblemSpec manufactured_smooth(int kind);

/// Built-in problem registry for the CLI: "american-put", "model1", "model2",
/// "smooth1", "smooth2".
ProblemSpec make_problem(const std::string& id);

}  // namespace obdiff
