#include "obdiff/diagnostics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "obdiff/kernels.hpp"

namespace obdiff {

double n_seminorm(std::span<const double> x, double scale) {
    if (scale == 0.0) throw std::invalid_argument("n_seminorm: scale must be nonzero");
    if (x.empty()) return 0.0;
    const auto& k = kernels::active();
    double ss = k.sumsq_diff(x.data() + 1, x.data(), x.size() - 1);
    ss += x.front() * x.front() + x.back() * x.back();
    return std::sqrt(ss) / std::fabs(scale);
}

CoercivityBound coercivity_constants(const ProblemSpec& problem, const SpatialGrid& grid,
                                     double t, int order) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("coercivity_constants: order must be 2 or 4");
    const int j = grid.interior;
    const double h = grid.spacing();

    // Sample a = sigma^2/2 on all nodes (boundary included) and b, r inside.
    std::vector<double> nodes(static_cast<std::size_t>(j) + 2);
    for (int i = 0; i <= j + 1; ++i) nodes[i] = grid.node(i);
    std::vector<double> a(nodes.size());
    problem.sigma(t, nodes, a);
    for (auto& v : a) v = 0.5 * v * v;

    const std::vector<double> xin = grid.interior_nodes();
    std::vector<double> b(xin.size());
    std::vector<double> r(xin.size());
    problem.drift(t, xin, b);
    problem.rate(t, xin, r);

    double eta0 = a[0];
    double lip = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        eta0 = std::min(eta0, a[i]);
        if (i > 0) lip = std::max(lip, std::fabs(a[i] - a[i - 1]) / h);
    }
    if (!(eta0 > 0.0))
        throw std::invalid_argument("coercivity_constants: need a >= eta0 > 0");

    double bmax = 0.0;
    double rmin = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        bmax = std::max(bmax, std::fabs(b[i]));
        rmin = std::min(rmin, r[i]);
    }

    const double cross = order == 2 ? lip + bmax : lip + (4.0 / 3.0) * bmax;
    double gamma = lip + cross * cross / (2.0 * eta0) - rmin;
    if (order == 4) gamma += lip * lip / (2.0 * eta0);
    return {0.5 * eta0, gamma, eta0};
}

CoercivityResult coercivity_check(const BandedMatrix& a, const SpatialGrid& grid,
                                  const CoercivityBound& bound, int trials,
                                  std::uint64_t seed) {
    const int n = a.size();
    if (n != grid.interior)
        throw std::invalid_argument("coercivity_check: matrix/grid size mismatch");
    const double h = grid.spacing();
    const auto& k = kernels::active();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> e(static_cast<std::size_t>(n));
    std::vector<double> ae(static_cast<std::size_t>(n));

    int violations = 0;
    for (int trial = 0; trial < trials; ++trial) {
        for (auto& v : e) v = uni(rng);
        matvec_into(a, e, ae);
        const double lhs = k.dot(e.data(), ae.data(), e.size());
        const double semi = n_seminorm(e, h);
        const double rhs = bound.eta * semi * semi - bound.gamma * k.dot(e.data(), e.data(), e.size());
        const double slack = 1e-9 * (1.0 + std::fabs(lhs) + std::fabs(rhs));
        if (lhs < rhs - slack) ++violations;
    }
    return {bound.eta, bound.gamma, trials, violations, violations == 0};
}

}  // namespace obdiff
