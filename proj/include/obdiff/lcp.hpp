#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "obdiff/banded.hpp"

namespace obdiff::lcp {

/// One implicit obstacle step in algebraic form:
///   find x with min(B x - rhs, x - lower) = 0 componentwise.
struct ObstacleLCP {
    BandedMatrix matrix;        // B
    std::vector<double> rhs;
    std::vector<double> lower;  // obstacle g
};

struct NewtonReport {
    int iterations = 0;          // linear solves performed
    double residual_inf = 0.0;   // ||min(Bx - rhs, x - g)||_inf at the result
    bool converged = false;
    std::vector<std::uint8_t> active;  // final obstacle rows (x_i pinned to g_i)
};

struct NewtonOptions {
    /// Absolute stopping tolerance; <= 0 selects tol_scale * (1 + ||rhs||_inf).
    double tol = 0.0;
    double tol_scale = 1e-10;
    /// Maximum linear solves; <= 0 selects n + 5.
    int max_iter = 0;
};

/// Thrown when the active-set iteration exhausts max_iter with residual above
/// tolerance; carries the report and the last iterate.
class NewtonFailure : public std::runtime_error {
public:
    NewtonFailure(const std::string& what, NewtonReport rep, std::vector<double> x)
            : std::runtime_error(what), report(std::move(rep)), iterate(std::move(x)) {}
    NewtonReport report;
    std::vector<double> iterate;
};

/// Componentwise min(B x - rhs, x - lower).
std::vector<double> residual(const ObstacleLCP& lcp, std::span<const double> x);

/// Semi-smooth Newton (active set) iteration.  Component i is treated as an
/// obstacle row when (x - g)_i < (Bx - rhs)_i -- ties take the B row -- and
/// the resulting mixed linear system is solved by the banded LU.  Stops when
/// the active set repeats or the residual drops below tolerance.
std::pair<std::vector<double>, NewtonReport> solve(const ObstacleLCP& lcp,
                                                   std::span<const double> x0,
                                                   const NewtonOptions& options = {});

/// Enumeration oracle for small instances (n <= 16): solves the mixed system
/// of every active set and returns the first feasible solution.  Throws when
/// no active set is feasible.
std::vector<double> brute_force(const ObstacleLCP& lcp, double tol = 1e-9);

}  // namespace obdiff::lcp
