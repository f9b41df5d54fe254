#include "obdiff/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace obdiff {

double eval_at(const RowFn& fn, double t, double x) {
    double out = 0.0;
    fn(t, std::span<const double>(&x, 1), std::span<double>(&out, 1));
    return out;
}

namespace {

RowFn constant_row(double c) {
    return [c](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = c;
    };
}

double payoff(double strike, double x) { return std::max(strike - x, 0.0); }

}  // namespace

void ModelParams::validate() const {
    if (!(strike > 0.0 && volatility > 0.0 && rate > 0.0 && front_speed > 0.0))
        throw std::invalid_argument("ModelParams: K, lambda, r, c0 must be positive");
    if (!(front_exponent > 0.0 && front_exponent <= 1.0))
        throw std::invalid_argument("ModelParams: alpha must lie in (0,1]");
    if (!(horizon > 0.0)) throw std::invalid_argument("ModelParams: T must be positive");
    if (!(xmin < strike && strike < xmax))
        throw std::invalid_argument("ModelParams: need xmin < K < xmax");
    if (!(strike * (1.0 - front_speed * std::pow(horizon, front_exponent)) > 0.0))
        throw std::invalid_argument("ModelParams: need K(1 - c0 T^alpha) > 0");
}

double ModelParams::front(double t) const {
    return strike * (1.0 - front_speed * std::pow(t, front_exponent));
}

double ModelParams::front_dot(double t) const {
    return -strike * front_speed * front_exponent * std::pow(t, front_exponent - 1.0);
}

// ---------------------------------------------------------------------------
// American put
// ---------------------------------------------------------------------------

ProblemSpec american_put(double volatility, double rate, double strike, double horizon,
                         double xmin, double xmax) {
    if (!(volatility > 0.0 && rate > 0.0 && strike > 0.0 && horizon > 0.0))
        throw std::invalid_argument("american_put: parameters must be positive");
    if (!(xmin < strike && strike < xmax))
        throw std::invalid_argument("american_put: need xmin < K < xmax");

    ProblemSpec p;
    p.xmin = xmin;
    p.xmax = xmax;
    p.horizon = horizon;
    p.sigma = [volatility](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = volatility * x[i];
    };
    p.drift = [rate](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -rate * x[i];
    };
    p.rate = constant_row(rate);
    p.source = constant_row(0.0);
    p.obstacle = [strike](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = payoff(strike, x[i]);
    };
    p.initial = [strike](double x) { return payoff(strike, x); };
    p.dirichlet_left = [strike, xmin](double) { return strike - xmin; };
    p.dirichlet_right = [](double) { return 0.0; };
    // Payoff extension on the left (v = K - x holds near xmin), zero on the
    // right (the exact solution decays faster than any polynomial).
    p.ghost_left = [strike](double, double x) { return strike - x; };
    p.ghost_right = [](double, double) { return 0.0; };
    p.constant_coefficients = true;
    p.constant_boundary = true;
    return p;
}

// ---------------------------------------------------------------------------
// Model 1
// ---------------------------------------------------------------------------

namespace {

struct Model1Slice {
    double front;      // x_s(t)
    double front_dot;  // d/dt x_s
    double strike;
    double c;      // C(t)
    double c_dot;  // d/dt C(t)

    double value(double x) const {
        if (x < front) return payoff(strike, x);
        const double y = x - front;
        return (strike - front) - y / (1.0 + y / c);
    }
    double v_x(double x) const {
        if (x < front) return -1.0;
        const double w = 1.0 + (x - front) / c;
        return -1.0 / (w * w);
    }
    double v_xx(double x) const {
        if (x < front) return 0.0;
        const double w = 1.0 + (x - front) / c;
        return 2.0 / (c * w * w * w);
    }
    double v_t(double x) const {
        if (x < front) return 0.0;
        const double y = x - front;
        const double w = 1.0 + y / c;
        return -front_dot * (1.0 - 1.0 / (w * w)) - (y * y * c_dot / (c * c)) / (w * w);
    }
};

Model1Slice model1_slice(const ModelParams& p, double t) {
    const double s = p.front(t);
    const double sdot = p.front_dot(t);
    const double b = p.strike - s;
    const double a = p.xmax - s;
    // a - b is constant in t (both endpoints move with -sdot).
    return {s, sdot, p.strike, a * b / (a - b), -sdot * (a + b) / (a - b)};
}

double model_source(const ModelParams& p, double strike, double v, double vt, double vx,
                    double vxx, double x) {
    const double lam = p.volatility;
    const double r = p.rate;
    const double pde = vt - 0.5 * lam * lam * x * x * vxx - r * x * vx + r * v;
    return std::min(pde, v - payoff(strike, x));
}

}  // namespace

double Model1Solution::curve_c(double t) const { return model1_slice(params, t).c; }
double Model1Solution::curve_c_dot(double t) const { return model1_slice(params, t).c_dot; }
double Model1Solution::value(double t, double x) const {
    return model1_slice(params, t).value(x);
}
double Model1Solution::v_t(double t, double x) const {
    return model1_slice(params, t).v_t(x);
}
double Model1Solution::v_x(double t, double x) const {
    return model1_slice(params, t).v_x(x);
}
double Model1Solution::v_xx(double t, double x) const {
    return model1_slice(params, t).v_xx(x);
}
double Model1Solution::source(double t, double x) const {
    if (t <= 0.0) return 0.0;
    const Model1Slice s = model1_slice(params, t);
    return model_source(params, params.strike, s.value(x), s.v_t(x), s.v_x(x), s.v_xx(x), x);
}

// ---------------------------------------------------------------------------
// Model 2
// ---------------------------------------------------------------------------

double model2_theta(double a, double b, double tol) {
    if (!(0.0 < b && b < a)) throw std::invalid_argument("model2_theta: need 0 < b < a");
    if (!(tol > 0.0)) throw std::invalid_argument("model2_theta: tol must be positive");
    // g(theta) = b*theta - atan(a*theta): g < 0 near 0 (since a > b), g > 0 at
    // pi/(2b) because atan < pi/2.  Newton from the midpoint, bisection
    // whenever a step leaves the bracket.
    double lo = 0.0;
    double hi = std::numbers::pi / (2.0 * b);
    double th = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
        const double g = b * th - std::atan(a * th);
        if (std::fabs(g) <= tol) return th;
        (g < 0.0 ? lo : hi) = th;
        const double dg = b - a / (1.0 + a * a * th * th);
        double next = dg != 0.0 ? th - g / dg : th;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        th = next;
    }
    return th;
}

namespace {

struct Model2Slice {
    double front;
    double front_dot;
    double strike;
    double c;
    double c_dot;

    double value(double x) const {
        if (x < front) return payoff(strike, x);
        return (strike - front) - c * std::atan((x - front) / c);
    }
    double v_x(double x) const {
        if (x < front) return -1.0;
        const double y = x - front;
        return -c * c / (c * c + y * y);
    }
    double v_xx(double x) const {
        if (x < front) return 0.0;
        const double y = x - front;
        const double d = c * c + y * y;
        return 2.0 * c * c * y / (d * d);
    }
    double v_t(double x) const {
        if (x < front) return 0.0;
        const double y = x - front;
        return -front_dot - c_dot * std::atan(y / c) -
               c * (-front_dot * c - y * c_dot) / (c * c + y * y);
    }
};

Model2Slice model2_slice(const ModelParams& p, double t) {
    const double s = p.front(t);
    const double sdot = p.front_dot(t);
    const double b = p.strike - s;
    const double a = p.xmax - s;
    const double c = 1.0 / model2_theta(a, b);
    // From differentiating b*theta = atan(a*theta) with adot = bdot = -sdot:
    // Cdot/C = (q*bdot - adot)/(q*b - a), q = 1 + (a/C)^2.
    const double q = 1.0 + (a / c) * (a / c);
    const double cdot = c * (-sdot) * (q - 1.0) / (q * b - a);
    return {s, sdot, p.strike, c, cdot};
}

}  // namespace

double Model2Solution::theta_of(double t) const {
    const double s = params.front(t);
    return model2_theta(params.xmax - s, params.strike - s);
}
double Model2Solution::curve_c(double t) const { return model2_slice(params, t).c; }
double Model2Solution::curve_c_dot(double t) const { return model2_slice(params, t).c_dot; }
double Model2Solution::value(double t, double x) const {
    return model2_slice(params, t).value(x);
}
double Model2Solution::v_t(double t, double x) const {
    return model2_slice(params, t).v_t(x);
}
double Model2Solution::v_x(double t, double x) const {
    return model2_slice(params, t).v_x(x);
}
double Model2Solution::v_xx(double t, double x) const {
    return model2_slice(params, t).v_xx(x);
}
double Model2Solution::source(double t, double x) const {
    if (t <= 0.0) return 0.0;
    const Model2Slice s = model2_slice(params, t);
    return model_source(params, params.strike, s.value(x), s.v_t(x), s.v_x(x), s.v_xx(x), x);
}

// ---------------------------------------------------------------------------
// ProblemSpec wrappers
// ---------------------------------------------------------------------------

namespace {

// Shared scaffolding for the two models: put coefficients, payoff obstacle and
// initial data, exact-solution boundary and ghost values.  Each row callback
// computes the per-time slice once and sweeps the nodes.
template <class SliceFn>
ProblemSpec wrap_model(const ModelParams& params, SliceFn slice_at) {
    params.validate();
    const double strike = params.strike;

    ProblemSpec p;
    p.xmin = params.xmin;
    p.xmax = params.xmax;
    p.horizon = params.horizon;
    p.sigma = [lam = params.volatility](double, std::span<const double> x,
                                        std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = lam * x[i];
    };
    p.drift = [r = params.rate](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -r * x[i];
    };
    p.rate = constant_row(params.rate);
    p.obstacle = [strike](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = payoff(strike, x[i]);
    };
    p.initial = [strike](double x) { return payoff(strike, x); };
    p.source = [params, strike, slice_at](double t, std::span<const double> x,
                                          std::span<double> out) {
        if (t <= 0.0) {  // front_dot blows up at t = 0; the march never asks
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = 0.0;
            return;
        }
        const auto s = slice_at(params, t);
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = model_source(params, strike, s.value(x[i]), s.v_t(x[i]), s.v_x(x[i]),
                                  s.v_xx(x[i]), x[i]);
    };
    p.exact = [params, slice_at](double t, std::span<const double> x, std::span<double> out) {
        const auto s = slice_at(params, t);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = s.value(x[i]);
    };
    // xmin stays below the front for all t <= T, so the exact value at the
    // left boundary and left ghost node is the payoff; the right values come
    // from the closed form (v(t,xmax) = 0 by construction of C(t)).
    p.dirichlet_left = [strike, xmin = params.xmin](double) { return strike - xmin; };
    p.dirichlet_right = [](double) { return 0.0; };
    p.ghost_left = [strike](double, double x) { return strike - x; };
    p.ghost_right = [params, slice_at](double t, double x) {
        return t <= 0.0 ? 0.0 : slice_at(params, t).value(x);
    };
    p.constant_coefficients = true;
    p.constant_boundary = false;  // right ghost value moves with the front
    return p;
}

}  // namespace

ProblemSpec model1(const ModelParams& params) {
    return wrap_model(params, [](const ModelParams& p, double t) {
        return model1_slice(p, t);
    });
}

ProblemSpec model2(const ModelParams& params) {
    return wrap_model(params, [](const ModelParams& p, double t) {
        return model2_slice(p, t);
    });
}

ProblemSpec manufactured_smooth(int kind) {
    if (kind != 1 && kind != 2)
        throw std::invalid_argument("manufactured_smooth: kind must be 1 or 2");
    const double sign = kind == 1 ? 1.0 : -1.0;
    const auto v = [sign](double t, double x) { return sign * std::exp(-t) * std::sin(x); };

    ProblemSpec p;
    p.xmin = 0.0;
    p.xmax = std::numbers::pi;
    p.horizon = 1.0;
    p.sigma = constant_row(std::sqrt(2.0));  // a = sigma^2/2 = 1
    p.drift = constant_row(0.0);
    p.rate = constant_row(0.0);
    p.obstacle = constant_row(-1e6);
    // v_t - v_xx cancels exactly for the heat eigenfunction.
    p.source = [sign](double t, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double vt = -sign * std::exp(-t) * std::sin(x[i]);
            const double minus_vxx = sign * std::exp(-t) * std::sin(x[i]);
            out[i] = vt + minus_vxx;
        }
    };
    p.initial = [v](double x) { return v(0.0, x); };
    p.dirichlet_left = [v](double t) { return v(t, 0.0); };
    p.dirichlet_right = [v](double t) { return v(t, std::numbers::pi); };
    p.ghost_left = v;
    p.ghost_right = v;
    p.exact = [v](double t, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = v(t, x[i]);
    };
    p.constant_coefficients = true;
    p.constant_boundary = false;
    return p;
}

ProblemSpec make_problem(const std::string& id) {
    if (id == "american-put") return american_put(0.2, 0.1, 100.0, 1.0, 75.0, 275.0);
    if (id == "model1") return model1();
    if (id == "model2") return model2();
    if (id == "smooth1") return manufactured_smooth(1);
    if (id == "smooth2") return manufactured_smooth(2);
    throw std::invalid_argument("unknown problem id: " + id);
}

}  // namespace obdiff
