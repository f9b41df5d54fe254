#include "obdiff/march.hpp"

#include <cmath>
#include <string>

#include "obdiff/kernels.hpp"

namespace obdiff {

namespace {

struct Rows {
    std::vector<double> nodes;
    std::vector<double> f_next;
    std::vector<double> f_half;
    std::vector<double> phi_next;
    std::vector<double> q_next;
    std::vector<double> q_half;

    explicit Rows(const SpatialGrid& grid)
            : nodes(grid.interior_nodes()),
              f_next(nodes.size()),
              f_half(nodes.size()),
              phi_next(nodes.size()),
              q_next(nodes.size()),
              q_half(nodes.size()) {}
};

lcp::ObstacleLCP build_step_lcp(SchemeKind kind, const MarchState& state,
                                const AssembledOperator& op, const ProblemSpec& problem,
                                double tau, Rows& rows) {
    const double t_now = state.n * tau;
    const double t_next = t_now + tau;
    const double t_half = t_now + 0.5 * tau;

    switch (kind) {
        case SchemeKind::CN1: {
            problem.source(t_half, rows.nodes, rows.f_half);
            problem.source(t_next, rows.nodes, rows.f_next);
            problem.obstacle(t_next, rows.nodes, rows.phi_next);
            op.boundary(t_half, rows.q_half);
            // matrix(t) hands back the operator's cache; with time-dependent
            // coefficients A^n must be copied before requesting A^{n+1}.
            const bool alias = !problem.constant_coefficients;
            const BandedMatrix a_now_copy = alias ? op.matrix(t_now) : BandedMatrix(1, 0, 0);
            const BandedMatrix& a_now = alias ? a_now_copy : op.matrix(t_now);
            const BandedMatrix& a_next = op.matrix(t_next);
            return cn1_lcp(a_now, a_next, rows.q_half, rows.f_half, rows.f_next,
                           rows.phi_next, state.u_now, tau);
        }
        case SchemeKind::CN2: {
            problem.source(t_half, rows.nodes, rows.f_half);
            op.boundary(t_half, rows.q_half);
            const bool alias = !problem.constant_coefficients;
            const BandedMatrix a_now_copy = alias ? op.matrix(t_now) : BandedMatrix(1, 0, 0);
            const BandedMatrix& a_now = alias ? a_now_copy : op.matrix(t_now);
            const BandedMatrix& a_next = op.matrix(t_next);
            return cn2_lcp(a_now, a_next, rows.q_half, rows.f_half, state.u_now, tau);
        }
        case SchemeKind::BDF1: {
            problem.source(t_next, rows.nodes, rows.f_next);
            problem.obstacle(t_next, rows.nodes, rows.phi_next);
            op.boundary(t_next, rows.q_next);
            return bdf1_lcp(op.matrix(t_next), rows.q_next, rows.f_next, rows.phi_next,
                            state.u_now, tau);
        }
        case SchemeKind::BDF2: {
            problem.source(t_next, rows.nodes, rows.f_next);
            problem.obstacle(t_next, rows.nodes, rows.phi_next);
            op.boundary(t_next, rows.q_next);
            return bdf2_lcp(op.matrix(t_next), rows.q_next, rows.f_next, rows.phi_next,
                            state.u_now, state.u_prev, tau);
        }
        case SchemeKind::BDF3: {
            problem.source(t_next, rows.nodes, rows.f_next);
            problem.obstacle(t_next, rows.nodes, rows.phi_next);
            op.boundary(t_next, rows.q_next);
            return bdf3_lcp(op.matrix(t_next), rows.q_next, rows.f_next, rows.phi_next,
                            state.u_now, state.u_prev, state.u_prev2, tau);
        }
    }
    throw std::logic_error("build_step_lcp: unreachable");
}

void require_history(SchemeKind kind, const MarchState& state) {
    const bool need2 = kind == SchemeKind::BDF2 || kind == SchemeKind::BDF3;
    const bool need3 = kind == SchemeKind::BDF3;
    if (state.u_now.empty()) throw std::invalid_argument("step: u^n missing from state");
    if (need2 && state.u_prev.size() != state.u_now.size())
        throw std::invalid_argument("step: u^{n-1} missing from state");
    if (need3 && state.u_prev2.size() != state.u_now.size())
        throw std::invalid_argument("step: u^{n-2} missing from state");
}

std::vector<double> run_step(SchemeKind kind, const MarchState& state,
                             const AssembledOperator& op, const ProblemSpec& problem,
                             double tau, const lcp::NewtonOptions& newton,
                             lcp::NewtonReport* report) {
    require_history(kind, state);
    Rows rows(op.grid());
    const lcp::ObstacleLCP step = build_step_lcp(kind, state, op, problem, tau, rows);
    auto [u, rep] = lcp::solve(step, state.u_now, newton);
    if (report != nullptr) *report = std::move(rep);
    return u;
}

}  // namespace

std::vector<double> step_cn1(const MarchState& s, const AssembledOperator& op,
                             const ProblemSpec& p, double tau,
                             const lcp::NewtonOptions& nw, lcp::NewtonReport* rep) {
    return run_step(SchemeKind::CN1, s, op, p, tau, nw, rep);
}
std::vector<double> step_cn2(const MarchState& s, const AssembledOperator& op,
                             const ProblemSpec& p, double tau,
                             const lcp::NewtonOptions& nw, lcp::NewtonReport* rep) {
    return run_step(SchemeKind::CN2, s, op, p, tau, nw, rep);
}
std::vector<double> step_bdf1(const MarchState& s, const AssembledOperator& op,
                              const ProblemSpec& p, double tau,
                              const lcp::NewtonOptions& nw, lcp::NewtonReport* rep) {
    return run_step(SchemeKind::BDF1, s, op, p, tau, nw, rep);
}
std::vector<double> step_bdf2(const MarchState& s, const AssembledOperator& op,
                              const ProblemSpec& p, double tau,
                              const lcp::NewtonOptions& nw, lcp::NewtonReport* rep) {
    return run_step(SchemeKind::BDF2, s, op, p, tau, nw, rep);
}
std::vector<double> step_bdf3(const MarchState& s, const AssembledOperator& op,
                              const ProblemSpec& p, double tau,
                              const lcp::NewtonOptions& nw, lcp::NewtonReport* rep) {
    return run_step(SchemeKind::BDF3, s, op, p, tau, nw, rep);
}

MarchResult march(const ProblemSpec& problem, const SpatialGrid& grid,
                  const TimeGrid& tgrid, const MarchOptions& options) {
    const auto& k = kernels::active();
    const double tau = tgrid.dt();
    const AssembledOperator op(problem, grid, options.space_order);
    Rows rows(grid);

    MarchState state;
    state.u_now.resize(rows.nodes.size());
    for (std::size_t i = 0; i < rows.nodes.size(); ++i)
        state.u_now[i] = problem.initial(rows.nodes[i]);

    // Compatibility of the initial data with the obstacle at t = 0.
    problem.obstacle(0.0, rows.nodes, rows.phi_next);
    problem.source(0.0, rows.nodes, rows.f_next);
    k.axpy(rows.phi_next.data(), 1.0, rows.f_next.data(), rows.phi_next.size());
    if (k.min_diff(state.u_now.data(), rows.phi_next.data(), state.u_now.size()) < -1e-12)
        throw std::invalid_argument("march: initial data below phi(0,.) + f(0,.)");

    MarchStats stats;
    stats.newton_iterations.reserve(static_cast<std::size_t>(tgrid.steps));
    if (options.observer) options.observer(0, 0.0, state.u_now);

    const auto scheme_for_step = [&](int n) {
        switch (options.scheme) {
            case SchemeKind::BDF2:
                if (n == 0)
                    return options.bdf2_init == Bdf2Init::CN ? SchemeKind::CN1
                                                             : SchemeKind::BDF1;
                return SchemeKind::BDF2;
            case SchemeKind::BDF3:
                if (n == 0) return SchemeKind::CN1;
                if (n == 1) return SchemeKind::BDF2;
                return SchemeKind::BDF3;
            default:
                return options.scheme;
        }
    };

    for (int n = 0; n < tgrid.steps; ++n) {
        const SchemeKind kind = scheme_for_step(n);
        std::vector<double> u_next;
        lcp::NewtonReport report;
        try {
            const lcp::ObstacleLCP step = build_step_lcp(kind, state, op, problem, tau, rows);
            auto solved = lcp::solve(step, state.u_now, options.newton);
            u_next = std::move(solved.first);
            report = std::move(solved.second);
        } catch (const lcp::NewtonFailure& failure) {
            throw MarchFailure("march: Newton failed at step " + std::to_string(n + 1) +
                                       " (" + failure.what() + ")",
                               n + 1);
        }

        stats.newton_iterations.push_back(report.iterations);
        stats.total_newton_iterations += report.iterations;
        stats.max_newton_iterations = std::max(stats.max_newton_iterations, report.iterations);
        stats.min_step_increment =
                std::min(stats.min_step_increment,
                         k.min_diff(u_next.data(), state.u_now.data(), u_next.size()));

        state.u_prev2 = std::move(state.u_prev);
        state.u_prev = std::move(state.u_now);
        state.u_now = std::move(u_next);
        state.n = n + 1;
        if (options.observer) options.observer(n + 1, tgrid.time(n + 1), state.u_now);
    }

    return {std::move(state.u_now), std::move(stats)};
}

bool monotone_check(std::span<const std::vector<double>> history, double tol) {
    if (history.size() < 2)
        throw std::invalid_argument("monotone_check: need at least two levels");
    const auto& k = kernels::active();
    for (std::size_t i = 0; i + 1 < history.size(); ++i) {
        if (history[i].size() != history[i + 1].size())
            throw std::invalid_argument("monotone_check: level sizes differ");
        if (k.min_diff(history[i + 1].data(), history[i].data(), history[i].size()) < -tol)
            return false;
    }
    return true;
}

}  // namespace obdiff
