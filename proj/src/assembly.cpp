#include "obdiff/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace obdiff {

namespace {

struct Coefficients {
    std::vector<double> a;  // sigma^2/2 at interior nodes
    std::vector<double> b;
    std::vector<double> r;
};

Coefficients eval_coefficients(const ProblemSpec& problem, const SpatialGrid& grid,
                               double t) {
    const std::vector<double> x = grid.interior_nodes();
    Coefficients c;
    c.a.resize(x.size());
    c.b.resize(x.size());
    c.r.resize(x.size());
    problem.sigma(t, x, c.a);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(c.a[i] > 0.0))
            throw std::invalid_argument("assemble: sigma must be positive on the grid");
        c.a[i] = 0.5 * c.a[i] * c.a[i];
    }
    problem.drift(t, x, c.b);
    problem.rate(t, x, c.r);
    return c;
}

// Value of the solution at a column outside 1..J (Dirichlet or ghost data).
double exterior_value(const ProblemSpec& problem, const SpatialGrid& grid, double t,
                      int col) {
    const int j = grid.interior;
    if (col == 0) return problem.dirichlet_left(t);
    if (col == j + 1) return problem.dirichlet_right(t);
    if (col == -1) return problem.ghost_left(t, grid.node(-1));
    if (col == j + 2) return problem.ghost_right(t, grid.node(j + 2));
    throw std::logic_error("assemble: unexpected exterior column");
}

}  // namespace

std::pair<BandedMatrix, std::vector<double>> assemble_2nd(const ProblemSpec& problem,
                                                          const SpatialGrid& grid,
                                                          double t) {
    const int j = grid.interior;
    const double h = grid.spacing();
    const Coefficients c = eval_coefficients(problem, grid, t);

    BandedMatrix m(j, 1, 1);
    std::vector<double> q(static_cast<std::size_t>(j), 0.0);
    for (int i = 0; i < j; ++i) {
        const double beta = c.a[i] / (h * h);
        const double gamma = c.b[i] / (2.0 * h);
        const double w[3] = {-beta - gamma, 2.0 * beta + c.r[i], -beta + gamma};
        for (int d = -1; d <= 1; ++d) {
            const int col = i + d;
            if (col >= 0 && col < j)
                m.at(i, col) = w[d + 1];
            else
                q[i] += w[d + 1] * exterior_value(problem, grid, t, col + 1);
        }
    }
    return {std::move(m), std::move(q)};
}

std::pair<BandedMatrix, std::vector<double>> assemble_4th(const ProblemSpec& problem,
                                                          const SpatialGrid& grid,
                                                          double t) {
    const int j = grid.interior;
    const double h = grid.spacing();
    const Coefficients c = eval_coefficients(problem, grid, t);

    static constexpr double diffusion_w[5] = {1.0, -16.0, 30.0, -16.0, 1.0};
    static constexpr double advection_w[5] = {1.0, -8.0, 0.0, 8.0, -1.0};

    BandedMatrix m(j, 2, 2);
    std::vector<double> q(static_cast<std::size_t>(j), 0.0);
    for (int i = 0; i < j; ++i) {
        const double da = c.a[i] / (12.0 * h * h);
        const double db = c.b[i] / (12.0 * h);
        for (int d = -2; d <= 2; ++d) {
            double w = da * diffusion_w[d + 2] + db * advection_w[d + 2];
            if (d == 0) w += c.r[i];
            const int col = i + d;
            if (col >= 0 && col < j)
                m.at(i, col) = w;
            else
                q[i] += w * exterior_value(problem, grid, t, col + 1);
        }
    }
    return {std::move(m), std::move(q)};
}

bool diffusion_dominates(const ProblemSpec& problem, const SpatialGrid& grid, double t) {
    const std::vector<double> x = grid.interior_nodes();
    std::vector<double> sig(x.size());
    std::vector<double> b(x.size());
    problem.sigma(t, x, sig);
    problem.drift(t, x, b);
    const double h = grid.spacing();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (sig[i] * sig[i] < h * std::fabs(b[i])) return false;
    return true;
}

AssembledOperator::AssembledOperator(const ProblemSpec& problem, const SpatialGrid& grid,
                                     int order)
        : problem_(&problem), grid_(grid), order_(order), cache_(1, 0, 0) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("AssembledOperator: order must be 2 or 4");
    if (!diffusion_dominates(problem, grid, 0.0))
        std::fprintf(stderr,
                     "obdiff: warning: advection dominates diffusion on this grid "
                     "(h > sigma^2/|b| somewhere); the centered scheme may oscillate\n");
}

const BandedMatrix& AssembledOperator::matrix(double t) const {
    if (cache_valid_ && (problem_->constant_coefficients || cache_time_ == t))
        return cache_;
    auto [m, q] = order_ == 2 ? assemble_2nd(*problem_, grid_, t)
                              : assemble_4th(*problem_, grid_, t);
    cache_ = std::move(m);
    cache_time_ = t;
    cache_valid_ = true;
    return cache_;
}

void AssembledOperator::boundary(double t, std::span<double> q) const {
    const int j = grid_.interior;
    if (static_cast<int>(q.size()) != j)
        throw std::invalid_argument("AssembledOperator::boundary: length mismatch");
    std::ranges::fill(q, 0.0);

    const double h = grid_.spacing();
    const int bw = order_ == 2 ? 1 : 2;
    // Only rows within bw of the ends touch exterior columns; evaluate the
    // coefficients at just those nodes.
    for (int i = 0; i < j; ++i) {
        if (i >= bw && i < j - bw) continue;
        const double xi = grid_.node(i + 1);
        double sig = 0.0, bi = 0.0;
        problem_->sigma(t, std::span<const double>(&xi, 1), std::span<double>(&sig, 1));
        problem_->drift(t, std::span<const double>(&xi, 1), std::span<double>(&bi, 1));
        const double ai = 0.5 * sig * sig;
        for (int d = -bw; d <= bw; ++d) {
            const int col = i + d;
            if (col >= 0 && col < j) continue;
            double w;
            if (order_ == 2) {
                const double beta = ai / (h * h);
                const double gamma = bi / (2.0 * h);
                w = d == -1 ? -beta - gamma : -beta + gamma;
            } else {
                static constexpr double diffusion_w[5] = {1.0, -16.0, 30.0, -16.0, 1.0};
                static constexpr double advection_w[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
                w = ai / (12.0 * h * h) * diffusion_w[d + 2] +
                    bi / (12.0 * h) * advection_w[d + 2];
            }
            q[i] += w * exterior_value(*problem_, grid_, t, col + 1);
        }
    }
}

std::vector<double> AssembledOperator::boundary(double t) const {
    std::vector<double> q(static_cast<std::size_t>(grid_.interior));
    boundary(t, q);
    return q;
}

}  // namespace obdiff
