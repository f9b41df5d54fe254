#pragma once

#include <utility>
#include <vector>

#include "obdiff/banded.hpp"
#include "obdiff/grid.hpp"
#include "obdiff/problem.hpp"

namespace obdiff {

/// Tridiagonal centered discretization of A v = -sigma^2/2 v_xx + b v_x + r v
/// at time t, together with the boundary vector q:
///   row i:  (-beta_i - gamma_i, 2 beta_i + r_i, -beta_i + gamma_i),
///   beta_i = sigma^2(t,x_i)/(2h^2), gamma_i = b(t,x_i)/(2h),
///   q_1 = (-beta_1 - gamma_1) u_left(t), q_J = (-beta_J + gamma_J) u_right(t).
std::pair<BandedMatrix, std::vector<double>> assemble_2nd(const ProblemSpec& problem,
                                                          const SpatialGrid& grid,
                                                          double t);

/// Pentadiagonal 4th-order discretization: -u_xx carries weights
/// (1,-16,30,-16,1)/(12h^2) and u_x carries (1,-8,0,8,-1)/(12h); rows 1, 2,
/// J-1, J fold the Dirichlet and ghost values into q.
std::pair<BandedMatrix, std::vector<double>> assemble_4th(const ProblemSpec& problem,
                                                          const SpatialGrid& grid,
                                                          double t);

/// Spatial operator bound to one problem/grid/order.  matrix(t) is cached
/// when the coefficients are autonomous; boundary(t) is always re-evaluated
/// (it is O(1) data).  Instances are cheap to create; a time march owns one.
class AssembledOperator {
public:
    AssembledOperator(const ProblemSpec& problem, const SpatialGrid& grid, int order);

    const BandedMatrix& matrix(double t) const;
    void boundary(double t, std::span<double> q) const;
    std::vector<double> boundary(double t) const;

    int order() const { return order_; }
    const SpatialGrid& grid() const { return grid_; }

private:
    const ProblemSpec* problem_;
    SpatialGrid grid_;
    int order_;
    mutable bool cache_valid_ = false;
    mutable double cache_time_ = 0.0;
    mutable BandedMatrix cache_;
};

/// True when the centered scheme is diffusion-dominated on the whole grid:
/// sigma^2(t,x_i) >= h |b(t,x_i)| for all i (for the American put this is
/// h <= x_1 lambda^2 / r).  AssembledOperator warns once on violation.
bool diffusion_dominates(const ProblemSpec& problem, const SpatialGrid& grid, double t);

}  // namespace obdiff
