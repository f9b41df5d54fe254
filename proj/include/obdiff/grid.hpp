#pragma once

#include <stdexcept>
#include <vector>

namespace obdiff {

/// Uniform mesh on (xmin, xmax) with J interior points: x_j = xmin + j*h for
/// j = 0..J+1 and h = (xmax - xmin)/(J+1).
struct SpatialGrid {
    double xmin;
    double xmax;
    int interior;  // J

    SpatialGrid(double lo, double hi, int points) : xmin(lo), xmax(hi), interior(points) {
        if (!(lo < hi)) throw std::invalid_argument("SpatialGrid: xmin must be < xmax");
        if (points < 1) throw std::invalid_argument("SpatialGrid: need J >= 1");
    }

    double spacing() const { return (xmax - xmin) / (interior + 1); }
    double node(int j) const { return xmin + j * spacing(); }

    std::vector<double> interior_nodes() const {
        std::vector<double> x(static_cast<std::size_t>(interior));
        for (int j = 1; j <= interior; ++j) x[j - 1] = node(j);
        return x;
    }
};

/// t_n = n*tau with tau = T/N.
struct TimeGrid {
    double horizon;
    int steps;  // N

    TimeGrid(double t, int n) : horizon(t), steps(n) {
        if (!(t > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (n < 1) throw std::invalid_argument("TimeGrid: need N >= 1");
    }

    double dt() const { return horizon / steps; }
    double time(int n) const { return n * dt(); }
};

}  // namespace obdiff
