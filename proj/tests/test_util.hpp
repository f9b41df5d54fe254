#pragma once

#include <random>
#include <vector>

#include "obdiff/banded.hpp"

namespace testutil {

inline std::vector<std::vector<double>> dense_from_banded(const obdiff::BandedMatrix& m) {
    const int n = m.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = m.get(i, j);
    return d;
}

inline std::vector<double> dense_matvec(const std::vector<std::vector<double>>& d,
                                        const std::vector<double>& x) {
    std::vector<double> y(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) y[i] += d[i][j] * x[j];
    return y;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> uni(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = uni(rng);
    return v;
}

/// Random banded matrix with entries in [-1,1].
inline obdiff::BandedMatrix random_banded(std::mt19937_64& rng, int n, int lower, int upper) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    obdiff::BandedMatrix m(n, lower, upper);
    for (int off = -lower; off <= upper; ++off)
        for (auto& v : m.diagonal(off)) v = uni(rng);
    return m;
}

/// Random matrix made strictly diagonally dominant by lifting the diagonal.
inline obdiff::BandedMatrix random_dominant(std::mt19937_64& rng, int n, int lower,
                                            int upper) {
    obdiff::BandedMatrix m = random_banded(rng, n, lower, upper);
    std::uniform_real_distribution<double> margin(0.05, 1.0);
    for (int i = 0; i < n; ++i) {
        double offsum = 0.0;
        for (int off = -lower; off <= upper; ++off) {
            const int j = i + off;
            if (off != 0 && j >= 0 && j < n) offsum += std::abs(m.get(i, j));
        }
        m.at(i, i) = offsum + margin(rng);
    }
    return m;
}

/// Random strictly dominant M-matrix: nonpositive off-diagonals, positive
/// dominant diagonal.
inline obdiff::BandedMatrix random_m_matrix(std::mt19937_64& rng, int n, int lower,
                                            int upper) {
    std::uniform_real_distribution<double> off(-1.0, 0.0);
    std::uniform_real_distribution<double> margin(0.05, 1.0);
    obdiff::BandedMatrix m(n, lower, upper);
    for (int d = -lower; d <= upper; ++d) {
        if (d == 0) continue;
        for (auto& v : m.diagonal(d)) v = off(rng);
    }
    for (int i = 0; i < n; ++i) {
        double offsum = 0.0;
        for (int d = -lower; d <= upper; ++d) {
            const int j = i + d;
            if (d != 0 && j >= 0 && j < n) offsum += std::abs(m.get(i, j));
        }
        m.at(i, i) = offsum + margin(rng);
    }
    return m;
}

}  // namespace testutil
