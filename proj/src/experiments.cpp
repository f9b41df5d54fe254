#include "obdiff/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "obdiff/kernels.hpp"

namespace obdiff {

double interp_cubic(const SpatialGrid& grid, std::span<const double> node_values, double x) {
    const int last = grid.interior + 1;
    if (static_cast<int>(node_values.size()) != last + 1)
        throw std::invalid_argument("interp_cubic: need values at all J+2 nodes");
    if (last < 3) throw std::invalid_argument("interp_cubic: need at least 4 nodes");
    if (x < grid.xmin - 1e-12 || x > grid.xmax + 1e-12)
        throw std::invalid_argument("interp_cubic: point outside the grid");
    const double h = grid.spacing();
    int base = static_cast<int>(std::floor((x - grid.xmin) / h)) - 1;
    base = std::clamp(base, 0, last - 3);
    double result = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        const double xa = grid.node(base + a);
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            const double xb = grid.node(base + b);
            w *= (x - xb) / (xa - xb);
        }
        result += w * node_values[base + a];
    }
    return result;
}

ErrorNorms errors_exact(std::span<const double> u, const ProblemSpec& problem,
                        const SpatialGrid& grid, double t) {
    if (!problem.has_exact())
        throw std::invalid_argument("errors_exact: problem has no exact solution");
    if (static_cast<int>(u.size()) != grid.interior)
        throw std::invalid_argument("errors_exact: length mismatch");
    const std::vector<double> x = grid.interior_nodes();
    std::vector<double> v(x.size());
    problem.exact(t, x, v);
    const auto& k = kernels::active();
    const double h = grid.spacing();
    ErrorNorms e;
    e.l1 = h * k.l1_diff(u.data(), v.data(), u.size());
    e.l2 = std::sqrt(h * k.sumsq_diff(u.data(), v.data(), u.size()));
    e.linf = k.linf_diff(u.data(), v.data(), u.size());
    return e;
}

std::optional<double> estimate_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) return std::nullopt;
    return std::log2(e_coarse / e_fine);
}

namespace {

std::vector<double> padded_solution(std::span<const double> u, const ProblemSpec& problem,
                                    const SpatialGrid& grid, double t) {
    std::vector<double> padded(u.size() + 2);
    padded.front() = problem.dirichlet_left(t);
    std::copy(u.begin(), u.end(), padded.begin() + 1);
    padded.back() = problem.dirichlet_right(t);
    return padded;
}

int window_count(double lo, double hi, double spacing) {
    if (!(spacing > 0.0) || !(lo < hi))
        throw std::invalid_argument("reference window: need lo < hi and spacing > 0");
    return static_cast<int>(std::floor((hi - lo) / spacing + 0.5)) + 1;
}

}  // namespace

ReferenceSolution make_reference(const ProblemSpec& problem, int j_ref, int n_ref,
                                 double window_lo, double window_hi, double spacing,
                                 SchemeKind scheme, int space_order,
                                 const lcp::NewtonOptions& newton) {
    if (window_lo < problem.xmin || window_hi > problem.xmax)
        throw std::invalid_argument("make_reference: window outside the domain");
    const SpatialGrid grid(problem.xmin, problem.xmax, j_ref);
    const TimeGrid tgrid(problem.horizon, n_ref);
    MarchOptions opt;
    opt.scheme = scheme;
    opt.space_order = space_order;
    opt.newton = newton;
    const MarchResult run = march(problem, grid, tgrid, opt);
    const std::vector<double> padded =
            padded_solution(run.u, problem, grid, problem.horizon);

    ReferenceSolution ref;
    ref.window_lo = window_lo;
    ref.spacing = spacing;
    ref.grid_points = j_ref;
    ref.time_steps = n_ref;
    ref.scheme = scheme;
    ref.space_order = space_order;
    const int m = window_count(window_lo, window_hi, spacing);
    ref.values.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        ref.values[i] = interp_cubic(grid, padded, window_lo + i * spacing);
    return ref;
}

ErrorNorms errors_vs_reference(std::span<const double> u, const ProblemSpec& problem,
                               const SpatialGrid& grid, const ReferenceSolution& ref) {
    if (ref.count() == 0) throw std::invalid_argument("errors_vs_reference: empty reference");
    if (ref.point(0) < grid.xmin || ref.point(ref.count() - 1) > grid.xmax)
        throw std::invalid_argument("errors_vs_reference: window outside the grid");
    const std::vector<double> padded = padded_solution(u, problem, grid, problem.horizon);
    ErrorNorms e;
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < ref.count(); ++i) {
        const double d = interp_cubic(grid, padded, ref.point(i)) - ref.values[i];
        sum_abs += std::fabs(d);
        sum_sq += d * d;
        e.linf = std::max(e.linf, std::fabs(d));
    }
    e.l1 = sum_abs / ref.count();
    e.l2 = std::sqrt(sum_sq / ref.count());
    return e;
}

std::vector<MeshPair> doubling_meshes(int base_j, int base_n, int count) {
    if (base_j < 1 || base_n < 1 || count < 1)
        throw std::invalid_argument("doubling_meshes: invalid base mesh");
    std::vector<MeshPair> meshes;
    meshes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) meshes.push_back({base_j << i, base_n << i});
    return meshes;
}

ConvergenceTable run_table(const RunConfig& config) {
    if (config.meshes.empty()) throw std::invalid_argument("run_table: no meshes");
    for (const auto& m : config.meshes)
        if (m.grid_points < 1 || m.time_steps < 1)
            throw std::invalid_argument("run_table: mesh pairs must be positive");

    const ProblemSpec problem = make_problem(config.problem);
    if (config.ref_mode == ReferenceMode::Exact && !problem.has_exact())
        throw std::invalid_argument("run_table: problem '" + config.problem +
                                    "' has no exact solution; use the self reference");

    MarchOptions mopt;
    mopt.scheme = config.scheme;
    mopt.bdf2_init = config.bdf2_init;
    mopt.space_order = config.space_order;
    mopt.newton.tol_scale = config.newton_tol_scale;

    ReferenceSolution ref;
    if (config.ref_mode == ReferenceMode::SelfReference) {
        const int n_ref = config.ref_time_steps > 0 ? config.ref_time_steps
                                                    : config.ref_grid_points;
        ref = make_reference(problem, config.ref_grid_points, n_ref, config.window_lo,
                             config.window_hi, config.spacing, SchemeKind::BDF2, 4,
                             mopt.newton);
    }

    ConvergenceTable table;
    table.config = config;
    for (const auto& mesh : config.meshes) {
        ConvergenceRow row;
        row.grid_points = mesh.grid_points;
        row.time_steps = mesh.time_steps;
        const auto start = std::chrono::steady_clock::now();
        try {
            const SpatialGrid grid(problem.xmin, problem.xmax, mesh.grid_points);
            const TimeGrid tgrid(problem.horizon, mesh.time_steps);
            const MarchResult run = march(problem, grid, tgrid, mopt);
            row.err = config.ref_mode == ReferenceMode::Exact
                              ? errors_exact(run.u, problem, grid, problem.horizon)
                              : errors_vs_reference(run.u, problem, grid, ref);
        } catch (const std::exception& ex) {
            row.failed = true;
            row.note = ex.what();
            table.all_ok = false;
        }
        row.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
        table.rows.push_back(std::move(row));
    }

    // Orders between consecutive rows of one doubling block.
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        auto& fine = table.rows[i];
        const auto& coarse = table.rows[i - 1];
        if (fine.failed || coarse.failed) continue;
        if (fine.grid_points != 2 * coarse.grid_points ||
            fine.time_steps != 2 * coarse.time_steps)
            continue;
        fine.ord_l1 = estimate_order(coarse.err.l1, fine.err.l1);
        fine.ord_l2 = estimate_order(coarse.err.l2, fine.err.l2);
        fine.ord_linf = estimate_order(coarse.err.linf, fine.err.linf);
    }
    return table;
}

namespace {

std::string fmt_err(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6E", v);
    return buf;
}

std::string fmt_ord(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return buf;
}

std::string fmt_time(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string to_markdown(const ConvergenceTable& table) {
    std::ostringstream out;
    out << "| J | N | error L1 | order | error L2 | order | error Linf | order | time(s) |\n"
        << "|--:|--:|---------:|------:|---------:|------:|-----------:|------:|--------:|\n";
    for (const auto& r : table.rows) {
        if (r.failed) {
            out << "| " << r.grid_points << " | " << r.time_steps << " | failed: " << r.note
                << " | | | | | | " << fmt_time(r.wall_seconds) << " |\n";
            continue;
        }
        out << "| " << r.grid_points << " | " << r.time_steps << " | " << fmt_err(r.err.l1)
            << " | " << fmt_ord(r.ord_l1) << " | " << fmt_err(r.err.l2) << " | "
            << fmt_ord(r.ord_l2) << " | " << fmt_err(r.err.linf) << " | "
            << fmt_ord(r.ord_linf) << " | " << fmt_time(r.wall_seconds) << " |\n";
    }
    return out.str();
}

std::string to_csv(const ConvergenceTable& table) {
    std::ostringstream out;
    out << "J,N,e_l1,ord_l1,e_l2,ord_l2,e_linf,ord_linf,time_s\n";
    for (const auto& r : table.rows) {
        if (r.failed) {
            out << r.grid_points << ',' << r.time_steps << ",,,,,,," << fmt_time(r.wall_seconds)
                << "\n";
            continue;
        }
        out << r.grid_points << ',' << r.time_steps << ',' << fmt_err(r.err.l1) << ','
            << fmt_ord(r.ord_l1) << ',' << fmt_err(r.err.l2) << ',' << fmt_ord(r.ord_l2)
            << ',' << fmt_err(r.err.linf) << ',' << fmt_ord(r.ord_linf) << ','
            << fmt_time(r.wall_seconds) << "\n";
    }
    return out.str();
}

}  // namespace obdiff
