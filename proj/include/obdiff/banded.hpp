#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace obdiff {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Square matrix with lower/upper bandwidth at most 2 (pentadiagonal), stored
/// as one contiguous array per diagonal.  This is the only matrix shape used
/// anywhere: tridiagonal for the 2nd-order operator, pentadiagonal for the
/// 4th-order one.
class BandedMatrix {
public:
    static constexpr int max_bandwidth = 2;

    BandedMatrix(int n, int lower, int upper);

    static BandedMatrix identity(int n);
    static BandedMatrix tridiagonal(int n, double lower, double diag, double upper);
    static BandedMatrix pentadiagonal(int n, double m2, double m1, double diag, double p1,
                                      double p2);

    int size() const { return n_; }
    int lower_bandwidth() const { return lower_; }
    int upper_bandwidth() const { return upper_; }

    /// Entries M(i, i+offset), i running over the diagonal's valid rows.
    /// diagonal(offset)[k] is M(k, k+offset) for offset >= 0 and
    /// M(k-offset, k) for offset < 0.
    std::span<double> diagonal(int offset);
    std::span<const double> diagonal(int offset) const;

    double& at(int i, int j);          // must be inside the band
    double get(int i, int j) const;    // zero outside the band

private:
    int n_;
    int lower_;
    int upper_;
    std::vector<double> bands_[2 * max_bandwidth + 1];
};

/// y = M x in O(n * bandwidth).
std::vector<double> matvec(const BandedMatrix& m, std::span<const double> x);
void matvec_into(const BandedMatrix& m, std::span<const double> x, std::span<double> y);

/// Banded LU factorization with partial pivoting confined to the band.
/// Row interchanges can grow the upper bandwidth by up to lower_bandwidth;
/// the factor storage accounts for that.
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& m);
    void solve_inplace(std::span<double> b) const;

private:
    int n_;
    int kl_;
    int ku_;
    int ldab_;
    std::vector<double> ab_;
    std::vector<int> pivot_;
};

/// x with M x = rhs.  Throws SingularMatrixError on a pivot that is zero to
/// working precision.
std::vector<double> banded_solve(const BandedMatrix& m, std::span<const double> rhs);

/// Strict row diagonal dominance: M_ii > sum_{j != i} |M_ij| for every row.
bool is_strictly_diag_dominant(const BandedMatrix& m);

/// Strictly diagonally dominant with M_ii > 0 and M_ij <= 0 off the diagonal.
bool is_m_matrix(const BandedMatrix& m);

}  // namespace obdiff
