#include "obdiff/lcp.hpp"

#include <algorithm>
#include <cmath>

#include "obdiff/kernels.hpp"

namespace obdiff::lcp {

namespace {

void check_sizes(const ObstacleLCP& lcp) {
    const auto n = static_cast<std::size_t>(lcp.matrix.size());
    if (lcp.rhs.size() != n || lcp.lower.size() != n)
        throw std::invalid_argument("ObstacleLCP: rhs/lower length must equal B.n");
}

// B with row i replaced by the identity row for every active i, rhs entry
// replaced by g_i.
void build_mixed(const ObstacleLCP& lcp, std::span<const std::uint8_t> active,
                 BandedMatrix& m, std::vector<double>& rhs) {
    const int n = lcp.matrix.size();
    m = lcp.matrix;
    rhs = lcp.rhs;
    for (int i = 0; i < n; ++i) {
        if (!active[i]) continue;
        for (int off = -m.lower_bandwidth(); off <= m.upper_bandwidth(); ++off) {
            const int col = i + off;
            if (col >= 0 && col < n) m.at(i, col) = off == 0 ? 1.0 : 0.0;
        }
        rhs[i] = lcp.lower[i];
    }
}

}  // namespace

std::vector<double> residual(const ObstacleLCP& lcp, std::span<const double> x) {
    check_sizes(lcp);
    const auto n = x.size();
    if (n != lcp.rhs.size()) throw std::invalid_argument("lcp::residual: length mismatch");
    const auto& k = kernels::active();
    std::vector<double> pde(n);
    matvec_into(lcp.matrix, x, pde);
    k.sub(pde.data(), pde.data(), lcp.rhs.data(), n);       // Bx - rhs
    std::vector<double> slack(n);
    k.sub(slack.data(), x.data(), lcp.lower.data(), n);     // x - g
    std::vector<double> out(n);
    k.min2(out.data(), pde.data(), slack.data(), n);
    return out;
}

std::pair<std::vector<double>, NewtonReport> solve(const ObstacleLCP& lcp,
                                                   std::span<const double> x0,
                                                   const NewtonOptions& options) {
    check_sizes(lcp);
    const int n = lcp.matrix.size();
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("lcp::solve: x0 length mismatch");
    const auto& k = kernels::active();

    const double tol = options.tol > 0.0
                               ? options.tol
                               : options.tol_scale *
                                         (1.0 + k.linf(lcp.rhs.data(), lcp.rhs.size()));
    const int max_iter = options.max_iter > 0 ? options.max_iter : n + 5;

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> pde(static_cast<std::size_t>(n));
    std::vector<double> slack(static_cast<std::size_t>(n));
    std::vector<double> res(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> active(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> next_active(static_cast<std::size_t>(n));

    const auto classify = [&](std::span<const double> xv, std::span<std::uint8_t> mask) {
        matvec_into(lcp.matrix, xv, pde);
        k.sub(pde.data(), pde.data(), lcp.rhs.data(), pde.size());
        k.sub(slack.data(), xv.data(), lcp.lower.data(), slack.size());
        k.less_mask(mask.data(), slack.data(), pde.data(), mask.size());
        k.min2(res.data(), pde.data(), slack.data(), res.size());
        return k.linf(res.data(), res.size());
    };

    NewtonReport report;
    double rnorm = classify(x, active);
    BandedMatrix mixed(n, lcp.matrix.lower_bandwidth(), lcp.matrix.upper_bandwidth());
    std::vector<double> mixed_rhs;

    for (int iter = 1; iter <= max_iter; ++iter) {
        build_mixed(lcp, active, mixed, mixed_rhs);
        BandedLU lu(mixed);
        lu.solve_inplace(mixed_rhs);
        x.swap(mixed_rhs);

        rnorm = classify(x, next_active);
        report.iterations = iter;
        if (next_active == active || rnorm <= tol) {
            report.converged = true;
            report.residual_inf = rnorm;
            report.active = std::move(next_active);
            return {std::move(x), std::move(report)};
        }
        std::swap(active, next_active);
    }

    report.converged = false;
    report.residual_inf = rnorm;
    report.active = std::move(active);
    throw NewtonFailure("lcp::solve: no convergence within max_iter", std::move(report),
                        std::move(x));
}

std::vector<double> brute_force(const ObstacleLCP& lcp, double tol) {
    check_sizes(lcp);
    const int n = lcp.matrix.size();
    if (n > 16) throw std::invalid_argument("lcp::brute_force: n must be <= 16");
    const auto& k = kernels::active();

    BandedMatrix mixed(n, lcp.matrix.lower_bandwidth(), lcp.matrix.upper_bandwidth());
    std::vector<double> rhs;
    std::vector<std::uint8_t> active(static_cast<std::size_t>(n));
    std::vector<double> pde(static_cast<std::size_t>(n));

    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        for (int i = 0; i < n; ++i) active[i] = (mask >> i) & 1u;
        build_mixed(lcp, active, mixed, rhs);
        std::vector<double> x;
        try {
            x = banded_solve(mixed, rhs);
        } catch (const SingularMatrixError&) {
            continue;
        }
        if (!std::ranges::all_of(x, [](double v) { return std::isfinite(v); })) continue;
        matvec_into(lcp.matrix, x, pde);
        k.sub(pde.data(), pde.data(), lcp.rhs.data(), pde.size());
        const bool feasible = k.min_diff(x.data(), lcp.lower.data(), x.size()) >= -tol &&
                              *std::min_element(pde.begin(), pde.end()) >= -tol;
        if (!feasible) continue;
        const auto res = residual(lcp, x);
        if (k.linf(res.data(), res.size()) <= tol) return x;
    }
    throw std::runtime_error("lcp::brute_force: no feasible active set");
}

}  // namespace obdiff::lcp
