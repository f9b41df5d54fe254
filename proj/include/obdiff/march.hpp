#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "obdiff/assembly.hpp"
#include "obdiff/grid.hpp"
#include "obdiff/lcp.hpp"
#include "obdiff/problem.hpp"
#include "obdiff/schemes.hpp"

namespace obdiff {

/// Rolling state of a time march: time index n and up to three solution
/// levels (u^n, u^{n-1}, u^{n-2}), newest first.
struct MarchState {
    int n = 0;
    std::vector<double> u_now;
    std::vector<double> u_prev;
    std::vector<double> u_prev2;
};

struct MarchOptions {
    SchemeKind scheme = SchemeKind::BDF2;
    Bdf2Init bdf2_init = Bdf2Init::CN;  // first BDF2 level; BDF3 always uses CN,BDF2
    int space_order = 2;
    lcp::NewtonOptions newton;
    /// Called after every accepted step with (n+1, t_{n+1}, u^{n+1}).
    std::function<void(int n, double t, std::span<const double> u)> observer;
};

struct MarchStats {
    std::vector<int> newton_iterations;  // one entry per step
    long total_newton_iterations = 0;
    int max_newton_iterations = 0;
    /// min over steps and components of (u^{n+1} - u^n); >= -1e-12 means the
    /// march was monotone nondecreasing.
    double min_step_increment = std::numeric_limits<double>::infinity();
};

struct MarchResult {
    std::vector<double> u;  // interior values at t_N
    MarchStats stats;
};

class MarchFailure : public std::runtime_error {
public:
    MarchFailure(const std::string& what, int step) : std::runtime_error(what), step(step) {}
    int step;
};

/// One step of each scheme: returns u^{n+1} given the state at level n.
/// The state must hold enough history for the scheme (two levels for BDF2,
/// three for BDF3).
std::vector<double> step_cn1(const MarchState& state, const AssembledOperator& op,
                             const ProblemSpec& problem, double tau,
                             const lcp::NewtonOptions& newton = {},
                             lcp::NewtonReport* report = nullptr);
std::vector<double> step_cn2(const MarchState& state, const AssembledOperator& op,
                             const ProblemSpec& problem, double tau,
                             const lcp::NewtonOptions& newton = {},
                             lcp::NewtonReport* report = nullptr);
std::vector<double> step_bdf1(const MarchState& state, const AssembledOperator& op,
                              const ProblemSpec& problem, double tau,
                              const lcp::NewtonOptions& newton = {},
                              lcp::NewtonReport* report = nullptr);
std::vector<double> step_bdf2(const MarchState& state, const AssembledOperator& op,
                              const ProblemSpec& problem, double tau,
                              const lcp::NewtonOptions& newton = {},
                              lcp::NewtonReport* report = nullptr);
std::vector<double> step_bdf3(const MarchState& state, const AssembledOperator& op,
                              const ProblemSpec& problem, double tau,
                              const lcp::NewtonOptions& newton = {},
                              lcp::NewtonReport* report = nullptr);

/// Full march from u^0 = v0(x_j) to t_N = T.  Multistep schemes start up with
/// the chains: BDF2 takes u^1 from CN (or implicit Euler per bdf2_init),
/// BDF3 takes u^1 from CN and u^2 from BDF2.  Newton failure aborts with the
/// time index.  The initial data must satisfy v0 >= phi(0,.) + f(0,.).
MarchResult march(const ProblemSpec& problem, const SpatialGrid& grid,
                  const TimeGrid& tgrid, const MarchOptions& options = {});

/// True when every consecutive pair in the recorded history satisfies
/// u^{n+1} >= u^n componentwise up to tol.
bool monotone_check(std::span<const std::vector<double>> history, double tol = 1e-12);

}  // namespace obdiff
