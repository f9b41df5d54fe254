#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obdiff/grid.hpp"
#include "obdiff/march.hpp"
#include "obdiff/problem.hpp"
#include "obdiff/schemes.hpp"

namespace obdiff {

/// 4-point (cubic) centered Lagrange interpolation on the uniform grid.
/// `node_values` holds u at all nodes x_0..x_{J+1}; the stencil is clamped
/// at the ends.
double interp_cubic(const SpatialGrid& grid, std::span<const double> node_values, double x);

struct ErrorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// Grid norms of u - v(t,.) over the interior nodes:
/// l1 = h sum|d|, l2 = (h sum d^2)^{1/2}, linf = max|d|.
ErrorNorms errors_exact(std::span<const double> u, const ProblemSpec& problem,
                        const SpatialGrid& grid, double t);

/// log2(e_coarse/e_fine); empty when either error vanishes.
std::optional<double> estimate_order(double e_coarse, double e_fine);

/// Fine-mesh solution sampled on an equally spaced evaluation window,
/// used when the problem has no closed form.
struct ReferenceSolution {
    double window_lo = 0.0;
    double spacing = 0.0;
    std::vector<double> values;
    int grid_points = 0;  // Jref
    int time_steps = 0;   // Nref
    SchemeKind scheme = SchemeKind::BDF2;
    int space_order = 4;

    int count() const { return static_cast<int>(values.size()); }
    double point(int k) const { return window_lo + k * spacing; }
};

ReferenceSolution make_reference(const ProblemSpec& problem, int j_ref, int n_ref,
                                 double window_lo, double window_hi, double spacing,
                                 SchemeKind scheme = SchemeKind::BDF2, int space_order = 4,
                                 const lcp::NewtonOptions& newton = {});

/// Window norms of u against the reference values: the solution is
/// interpolated cubically onto the reference points and
/// l1 = (1/M) sum|d|, l2 = ((1/M) sum d^2)^{1/2}, linf = max|d|.
ErrorNorms errors_vs_reference(std::span<const double> u, const ProblemSpec& problem,
                               const SpatialGrid& grid, const ReferenceSolution& ref);

// ---------------------------------------------------------------------------
// convergence tables
// ---------------------------------------------------------------------------

struct MeshPair {
    int grid_points;  // J
    int time_steps;   // N
};

enum class ReferenceMode { Exact, SelfReference };

struct RunConfig {
    std::string problem = "model1";
    SchemeKind scheme = SchemeKind::BDF2;
    Bdf2Init bdf2_init = Bdf2Init::CN;
    int space_order = 4;
    std::vector<MeshPair> meshes;
    ReferenceMode ref_mode = ReferenceMode::Exact;
    int ref_grid_points = 5120;  // Jref = Nref for the self reference
    int ref_time_steps = 0;      // 0 -> same as ref_grid_points
    double window_lo = 80.0;
    double window_hi = 120.0;
    double spacing = 0.01;
    double newton_tol_scale = 1e-10;
};

std::vector<MeshPair> doubling_meshes(int base_j, int base_n, int count);

struct ConvergenceRow {
    int grid_points = 0;
    int time_steps = 0;
    ErrorNorms err;
    std::optional<double> ord_l1;
    std::optional<double> ord_l2;
    std::optional<double> ord_linf;
    double wall_seconds = 0.0;
    bool failed = false;
    std::string note;
};

struct ConvergenceTable {
    RunConfig config;
    std::vector<ConvergenceRow> rows;
    bool all_ok = true;
};

/// One march per mesh pair; orders appear between consecutive rows where both
/// J and N double.  A failed march annotates its row and the run continues.
ConvergenceTable run_table(const RunConfig& config);

std::string to_markdown(const ConvergenceTable& table);
std::string to_csv(const ConvergenceTable& table);

}  // namespace obdiff
