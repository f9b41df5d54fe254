#pragma once

#include <span>
#include <string>

#include "obdiff/banded.hpp"
#include "obdiff/lcp.hpp"

namespace obdiff {

enum class SchemeKind { CN1, CN2, BDF1, BDF2, BDF3 };
enum class Bdf2Init { CN, BDF1 };

std::string to_string(SchemeKind kind);
SchemeKind scheme_from_string(const std::string& name);

/// beta * I + alpha * A.
BandedMatrix scaled_plus_identity(double alpha, const BandedMatrix& a, double beta = 1.0);

// Every scheme advances one step by solving min(B u - rhs, u - g) = 0.  The
// builders below produce (B, rhs, g) from the operator data; superscripts
// follow the time levels the march passes in (q_half/f_half are midpoint
// values, everything else is at t_{n+1}).

/// Obstacle Crank-Nicolson: B = I + (tau/2) A^{n+1},
/// rhs = (I - (tau/2) A^n) u^n - tau q^{n+1/2} + tau f^{n+1/2},
/// g = phi^{n+1} + f^{n+1}.
lcp::ObstacleLCP cn1_lcp(const BandedMatrix& a_now, const BandedMatrix& a_next,
                         std::span<const double> q_half, std::span<const double> f_half,
                         std::span<const double> f_next, std::span<const double> phi_next,
                         std::span<const double> u_now, double tau);

/// Crank-Nicolson for the HJB form: same B and rhs as cn1_lcp, moving
/// obstacle g = u^n + tau f^{n+1/2}.
lcp::ObstacleLCP cn2_lcp(const BandedMatrix& a_now, const BandedMatrix& a_next,
                         std::span<const double> q_half, std::span<const double> f_half,
                         std::span<const double> u_now, double tau);

/// Implicit Euler: B = I + tau A^{n+1}, rhs = u^n - tau q^{n+1} + tau f^{n+1}.
lcp::ObstacleLCP bdf1_lcp(const BandedMatrix& a_next, std::span<const double> q_next,
                          std::span<const double> f_next, std::span<const double> phi_next,
                          std::span<const double> u_now, double tau);

/// Two-step scheme: B = I + (2 tau/3) A^{n+1},
/// rhs = (4/3) u^n - (1/3) u^{n-1} - (2 tau/3) q^{n+1} + (2 tau/3) f^{n+1}.
lcp::ObstacleLCP bdf2_lcp(const BandedMatrix& a_next, std::span<const double> q_next,
                          std::span<const double> f_next, std::span<const double> phi_next,
                          std::span<const double> u_now, std::span<const double> u_prev,
                          double tau);

/// Three-step scheme, written with the 6 tau scaling on the operator branch:
/// B = 11 I + 6 tau A^{n+1},
/// rhs = 18 u^n - 9 u^{n-1} + 2 u^{n-2} - 6 tau q^{n+1} + 6 tau f^{n+1},
/// g = phi^{n+1} + f^{n+1} (unscaled).
lcp::ObstacleLCP bdf3_lcp(const BandedMatrix& a_next, std::span<const double> q_next,
                          std::span<const double> f_next, std::span<const double> phi_next,
                          std::span<const double> u_now, std::span<const double> u_prev,
                          std::span<const double> u_prev2, double tau);

}  // namespace obdiff
