#pragma once

#include <cstdint>
#include <span>

#include "obdiff/assembly.hpp"
#include "obdiff/banded.hpp"
#include "obdiff/grid.hpp"
#include "obdiff/problem.hpp"

namespace obdiff {

/// Discrete H1-type seminorm N(x) = (sum_{j=1..J+1} |x_j - x_{j-1}|^2)^{1/2}
/// with the convention x_0 = x_{J+1} = 0.  Each difference is divided by
/// `scale` before squaring, so n_seminorm(e, h) is N(e/h).
double n_seminorm(std::span<const double> x, double scale = 1.0);

/// Concrete admissible constants (eta, gamma) for the coercivity bound
///   <e, A e> >= eta * N(e/h)^2 - gamma * ||e||_2^2
/// of the assembled operator, from the grid-sampled coefficient data:
///   eta0 = min_i a_i,  C = max_i |a_i - a_{i-1}|/h,  eta = eta0/2.
/// Order 2: gamma = C + Cp^2/(2 eta0), Cp = C + max|b|.
/// Order 4: the advection weights enlarge the cross term to Cp4 = C +
/// (4/3) max|b| (the (1,-8,0,8,-1)/12 row has first-difference mass 16/12),
/// and the pentadiagonal correction of -a u_xx contributes at most
/// C^2/(2 eta0) ||e||^2 (commutator bound |(D A0 - A0 D)_ij| <= 2 C h plus
/// Young's inequality, with a coarse 1/12 dropped), so
///   gamma = C + Cp4^2/(2 eta0) + C^2/(2 eta0).
/// A negative reaction coefficient, if any, adds |min r| to gamma.
struct CoercivityBound {
    double eta;
    double gamma;
    double eta_zero;  // min_i a_i
};

CoercivityBound coercivity_constants(const ProblemSpec& problem, const SpatialGrid& grid,
                                     double t, int order);

/// Check <e, A e> >= eta N(e/h)^2 - gamma ||e||^2 on `trials` random vectors
/// with entries uniform in [-1,1].
struct CoercivityResult {
    double eta;
    double gamma;
    int trials;
    int violations;
    bool ok;
};

CoercivityResult coercivity_check(const BandedMatrix& a, const SpatialGrid& grid,
                                  const CoercivityBound& bound, int trials,
                                  std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

}  // namespace obdiff
