#include "obdiff/schemes.hpp"

#include <stdexcept>

#include "obdiff/kernels.hpp"

namespace obdiff {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::CN1: return "cn1";
        case SchemeKind::CN2: return "cn2";
        case SchemeKind::BDF1: return "bdf1";
        case SchemeKind::BDF2: return "bdf2";
        case SchemeKind::BDF3: return "bdf3";
    }
    return "?";
}

SchemeKind scheme_from_string(const std::string& name) {
    if (name == "cn1" || name == "cn") return SchemeKind::CN1;
    if (name == "cn2") return SchemeKind::CN2;
    if (name == "bdf1") return SchemeKind::BDF1;
    if (name == "bdf2") return SchemeKind::BDF2;
    if (name == "bdf3") return SchemeKind::BDF3;
    throw std::invalid_argument("unknown scheme: " + name);
}

BandedMatrix scaled_plus_identity(double alpha, const BandedMatrix& a, double beta) {
    BandedMatrix b = a;
    for (int off = -b.lower_bandwidth(); off <= b.upper_bandwidth(); ++off) {
        auto band = b.diagonal(off);
        for (auto& v : band) v *= alpha;
        if (off == 0)
            for (auto& v : band) v += beta;
    }
    return b;
}

namespace {

// rhs = u^n - s * (A u^n) - cq * q + cf * f
std::vector<double> one_level_rhs(const BandedMatrix* a_now, double s,
                                  std::span<const double> u_now, double cq,
                                  std::span<const double> q, double cf,
                                  std::span<const double> f) {
    const auto& k = kernels::active();
    const std::size_t n = u_now.size();
    std::vector<double> rhs(n);
    if (a_now != nullptr && s != 0.0) {
        matvec_into(*a_now, u_now, rhs);
        k.lincomb2(rhs.data(), 1.0, u_now.data(), -s, rhs.data(), n);
    } else {
        std::copy(u_now.begin(), u_now.end(), rhs.begin());
    }
    k.axpy(rhs.data(), -cq, q.data(), n);
    k.axpy(rhs.data(), cf, f.data(), n);
    return rhs;
}

std::vector<double> add(std::span<const double> x, std::span<const double> y) {
    std::vector<double> out(x.size());
    kernels::active().lincomb2(out.data(), 1.0, x.data(), 1.0, y.data(), x.size());
    return out;
}

void check_lengths(std::size_t n, std::initializer_list<std::size_t> sizes) {
    for (auto s : sizes)
        if (s != n) throw std::invalid_argument("scheme builder: vector length mismatch");
}

}  // namespace

lcp::ObstacleLCP cn1_lcp(const BandedMatrix& a_now, const BandedMatrix& a_next,
                         std::span<const double> q_half, std::span<const double> f_half,
                         std::span<const double> f_next, std::span<const double> phi_next,
                         std::span<const double> u_now, double tau) {
    const auto n = static_cast<std::size_t>(a_next.size());
    check_lengths(n, {q_half.size(), f_half.size(), f_next.size(), phi_next.size(),
                      u_now.size(), static_cast<std::size_t>(a_now.size())});
    return {scaled_plus_identity(0.5 * tau, a_next),
            one_level_rhs(&a_now, 0.5 * tau, u_now, tau, q_half, tau, f_half),
            add(phi_next, f_next)};
}

lcp::ObstacleLCP cn2_lcp(const BandedMatrix& a_now, const BandedMatrix& a_next,
                         std::span<const double> q_half, std::span<const double> f_half,
                         std::span<const double> u_now, double tau) {
    const auto n = static_cast<std::size_t>(a_next.size());
    check_lengths(n, {q_half.size(), f_half.size(), u_now.size(),
                      static_cast<std::size_t>(a_now.size())});
    std::vector<double> g(n);
    kernels::active().lincomb2(g.data(), 1.0, u_now.data(), tau, f_half.data(), n);
    return {scaled_plus_identity(0.5 * tau, a_next),
            one_level_rhs(&a_now, 0.5 * tau, u_now, tau, q_half, tau, f_half),
            std::move(g)};
}

lcp::ObstacleLCP bdf1_lcp(const BandedMatrix& a_next, std::span<const double> q_next,
                          std::span<const double> f_next, std::span<const double> phi_next,
                          std::span<const double> u_now, double tau) {
    const auto n = static_cast<std::size_t>(a_next.size());
    check_lengths(n, {q_next.size(), f_next.size(), phi_next.size(), u_now.size()});
    return {scaled_plus_identity(tau, a_next),
            one_level_rhs(nullptr, 0.0, u_now, tau, q_next, tau, f_next),
            add(phi_next, f_next)};
}

lcp::ObstacleLCP bdf2_lcp(const BandedMatrix& a_next, std::span<const double> q_next,
                          std::span<const double> f_next, std::span<const double> phi_next,
                          std::span<const double> u_now, std::span<const double> u_prev,
                          double tau) {
    const auto n = static_cast<std::size_t>(a_next.size());
    check_lengths(n, {q_next.size(), f_next.size(), phi_next.size(), u_now.size(),
                      u_prev.size()});
    const auto& k = kernels::active();
    std::vector<double> rhs(n);
    k.lincomb2(rhs.data(), 4.0 / 3.0, u_now.data(), -1.0 / 3.0, u_prev.data(), n);
    k.axpy(rhs.data(), -2.0 * tau / 3.0, q_next.data(), n);
    k.axpy(rhs.data(), 2.0 * tau / 3.0, f_next.data(), n);
    return {scaled_plus_identity(2.0 * tau / 3.0, a_next), std::move(rhs),
            add(phi_next, f_next)};
}

lcp::ObstacleLCP bdf3_lcp(const BandedMatrix& a_next, std::span<const double> q_next,
                          std::span<const double> f_next, std::span<const double> phi_next,
                          std::span<const double> u_now, std::span<const double> u_prev,
                          std::span<const double> u_prev2, double tau) {
    const auto n = static_cast<std::size_t>(a_next.size());
    check_lengths(n, {q_next.size(), f_next.size(), phi_next.size(), u_now.size(),
                      u_prev.size(), u_prev2.size()});
    const auto& k = kernels::active();
    std::vector<double> rhs(n);
    k.lincomb3(rhs.data(), 18.0, u_now.data(), -9.0, u_prev.data(), 2.0, u_prev2.data(), n);
    k.axpy(rhs.data(), -6.0 * tau, q_next.data(), n);
    k.axpy(rhs.data(), 6.0 * tau, f_next.data(), n);
    return {scaled_plus_identity(6.0 * tau, a_next, 11.0), std::move(rhs),
            add(phi_next, f_next)};
}

}  // namespace obdiff
