#include "obdiff/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obdiff/kernels.hpp"

namespace obdiff {

BandedMatrix::BandedMatrix(int n, int lower, int upper) : n_(n), lower_(lower), upper_(upper) {
    if (n < 1) throw std::invalid_argument("BandedMatrix: dimension must be positive");
    if (lower < 0 || lower > max_bandwidth || upper < 0 || upper > max_bandwidth)
        throw std::invalid_argument("BandedMatrix: bandwidth outside {0,1,2}");
    for (int off = -lower_; off <= upper_; ++off) {
        const int len = n_ - std::abs(off);
        bands_[off + max_bandwidth].assign(len > 0 ? static_cast<std::size_t>(len) : 0, 0.0);
    }
}

BandedMatrix BandedMatrix::identity(int n) {
    BandedMatrix m(n, 0, 0);
    std::ranges::fill(m.diagonal(0), 1.0);
    return m;
}

BandedMatrix BandedMatrix::tridiagonal(int n, double lower, double diag, double upper) {
    BandedMatrix m(n, 1, 1);
    std::ranges::fill(m.diagonal(-1), lower);
    std::ranges::fill(m.diagonal(0), diag);
    std::ranges::fill(m.diagonal(1), upper);
    return m;
}

BandedMatrix BandedMatrix::pentadiagonal(int n, double m2, double m1, double diag,
                                         double p1, double p2) {
    BandedMatrix m(n, 2, 2);
    std::ranges::fill(m.diagonal(-2), m2);
    std::ranges::fill(m.diagonal(-1), m1);
    std::ranges::fill(m.diagonal(0), diag);
    std::ranges::fill(m.diagonal(1), p1);
    std::ranges::fill(m.diagonal(2), p2);
    return m;
}

std::span<double> BandedMatrix::diagonal(int offset) {
    if (offset < -lower_ || offset > upper_)
        throw std::out_of_range("BandedMatrix::diagonal: offset outside band");
    return bands_[offset + max_bandwidth];
}

std::span<const double> BandedMatrix::diagonal(int offset) const {
    if (offset < -lower_ || offset > upper_)
        throw std::out_of_range("BandedMatrix::diagonal: offset outside band");
    return bands_[offset + max_bandwidth];
}

double& BandedMatrix::at(int i, int j) {
    const int off = j - i;
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || off < -lower_ || off > upper_)
        throw std::out_of_range("BandedMatrix::at: entry outside band");
    return bands_[off + max_bandwidth][static_cast<std::size_t>(std::min(i, j))];
}

double BandedMatrix::get(int i, int j) const {
    const int off = j - i;
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("BandedMatrix::get: index outside matrix");
    if (off < -lower_ || off > upper_) return 0.0;
    return bands_[off + max_bandwidth][static_cast<std::size_t>(std::min(i, j))];
}

void matvec_into(const BandedMatrix& m, std::span<const double> x, std::span<double> y) {
    const int n = m.size();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("matvec: dimension mismatch");
    const auto& k = kernels::active();
    std::ranges::fill(y, 0.0);
    for (int off = -m.lower_bandwidth(); off <= m.upper_bandwidth(); ++off) {
        const auto band = m.diagonal(off);
        if (off >= 0)
            k.fmadd(y.data(), band.data(), x.data() + off, band.size());
        else
            k.fmadd(y.data() - off, band.data(), x.data(), band.size());
    }
}

std::vector<double> matvec(const BandedMatrix& m, std::span<const double> x) {
    std::vector<double> y(static_cast<std::size_t>(m.size()));
    matvec_into(m, x, y);
    return y;
}

// LAPACK-style band storage for the factorization: column j of the matrix
// lives in ab_[j*ldab + kl + ku + i - j], with kl extra superdiagonal rows
// for pivoting fill.
BandedLU::BandedLU(const BandedMatrix& m)
        : n_(m.size()),
          kl_(m.lower_bandwidth()),
          ku_(m.upper_bandwidth()),
          ldab_(2 * kl_ + ku_ + 1),
          ab_(static_cast<std::size_t>(ldab_) * n_, 0.0),
          pivot_(n_) {
    const int kv = kl_ + ku_;
    double scale = 0.0;
    for (int off = -kl_; off <= ku_; ++off) {
        const auto band = m.diagonal(off);
        for (std::size_t idx = 0; idx < band.size(); ++idx) {
            const int i = off >= 0 ? static_cast<int>(idx) : static_cast<int>(idx) - off;
            const int j = i + off;
            ab_[static_cast<std::size_t>(j) * ldab_ + kv + i - j] = band[idx];
            scale = std::max(scale, std::fabs(band[idx]));
        }
    }
    const double tiny = std::max(scale, 1.0) * 4.0 * std::numeric_limits<double>::epsilon();

    int ju = 0;
    for (int j = 0; j < n_; ++j) {
        double* col = ab_.data() + static_cast<std::size_t>(j) * ldab_;
        const int km = std::min(kl_, n_ - 1 - j);  // subdiagonal entries in this column
        int jp = 0;
        for (int p = 1; p <= km; ++p)
            if (std::fabs(col[kv + p]) > std::fabs(col[kv + jp])) jp = p;
        pivot_[j] = j + jp;
        const double piv = col[kv + jp];
        if (std::fabs(piv) <= tiny)
            throw SingularMatrixError("banded_solve: pivot is zero to working precision");
        ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
        if (jp != 0) {
            for (int c = j; c <= ju; ++c) {
                double* cc = ab_.data() + static_cast<std::size_t>(c) * ldab_;
                std::swap(cc[kv + j + jp - c], cc[kv + j - c]);
            }
        }
        if (km > 0) {
            const double inv = 1.0 / col[kv];
            for (int p = 1; p <= km; ++p) col[kv + p] *= inv;
            for (int c = j + 1; c <= ju; ++c) {
                double* cc = ab_.data() + static_cast<std::size_t>(c) * ldab_;
                const double ajc = cc[kv + j - c];
                if (ajc != 0.0)
                    for (int p = 1; p <= km; ++p) cc[kv + j + p - c] -= col[kv + p] * ajc;
            }
        }
    }
}

void BandedLU::solve_inplace(std::span<double> b) const {
    if (static_cast<int>(b.size()) != n_)
        throw std::invalid_argument("banded_solve: rhs length mismatch");
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
        if (pivot_[j] != j) std::swap(b[j], b[pivot_[j]]);
        const double* col = ab_.data() + static_cast<std::size_t>(j) * ldab_;
        const int km = std::min(kl_, n_ - 1 - j);
        for (int p = 1; p <= km; ++p) b[j + p] -= col[kv + p] * b[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
        const double* col = ab_.data() + static_cast<std::size_t>(j) * ldab_;
        b[j] /= col[kv];
        const int lm = std::min(kv, j);
        for (int p = 1; p <= lm; ++p) b[j - p] -= col[kv - p] * b[j];
    }
}

std::vector<double> banded_solve(const BandedMatrix& m, std::span<const double> rhs) {
    if (static_cast<int>(rhs.size()) != m.size())
        throw std::invalid_argument("banded_solve: rhs length mismatch");
    BandedLU lu(m);
    std::vector<double> x(rhs.begin(), rhs.end());
    lu.solve_inplace(x);
    return x;
}

bool is_strictly_diag_dominant(const BandedMatrix& m) {
    for (int i = 0; i < m.size(); ++i) {
        double offsum = 0.0;
        for (int off = -m.lower_bandwidth(); off <= m.upper_bandwidth(); ++off) {
            if (off == 0) continue;
            const int j = i + off;
            if (j >= 0 && j < m.size()) offsum += std::fabs(m.get(i, j));
        }
        if (!(m.get(i, i) > offsum)) return false;
    }
    return true;
}

bool is_m_matrix(const BandedMatrix& m) {
    for (int i = 0; i < m.size(); ++i) {
        if (!(m.get(i, i) > 0.0)) return false;
        for (int off = -m.lower_bandwidth(); off <= m.upper_bandwidth(); ++off) {
            if (off == 0) continue;
            const int j = i + off;
            if (j >= 0 && j < m.size() && m.get(i, j) > 0.0) return false;
        }
    }
    return is_strictly_diag_dominant(m);
}

}  // namespace obdiff
