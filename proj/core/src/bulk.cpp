#include "mtc/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mtc {

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0.0, 1.0);

Eigen::Matrix2cd tau_x() { return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(); }
Eigen::Matrix2cd tau_y() { return (Eigen::Matrix2cd() << 0, -I, I, 0).finished(); }
Eigen::Matrix2cd tau_z() { return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(); }

// exp(-i a n.tau) for unit n
Eigen::Matrix2cd su2(double a, double nx, double ny, double nz)
{
    return std::cos(a) * Eigen::Matrix2cd::Identity() - I * std::sin(a) * (nx * tau_x() + ny * tau_y() + nz * tau_z());
}

}  // namespace

BulkParams BulkParams::from_products(double mu1T, double mu2T, double JT, double DeltaT)
{
    return {0.5 * mu1T, 0.5 * mu2T, JT, DeltaT};
}

BulkBandPoint bulk_angle(double k, const BulkParams& p)
{
    BulkBandPoint b;
    b.k = k;
    const double hz = p.mu1 - p.J * std::cos(k);
    const double hy = p.Delta * std::sin(k);
    b.h = std::hypot(hz, hy);
    // sin(h)/h and the z direction at h = 0
    const double sinc = b.h > 1e-300 ? std::sin(b.h) / b.h : 1.0;
    const double arg = std::cos(p.mu2) * std::cos(b.h) - std::sin(p.mu2) * sinc * hz;
    b.theta = std::acos(std::clamp(arg, -1.0, 1.0));
    const double st = std::sin(b.theta);
    if (st > 1e-12) {
        Eigen::Vector3d m;
        m << -hy * sinc * std::sin(p.mu2) / st, hy * sinc * std::cos(p.mu2) / st,
            (std::sin(p.mu2) * std::cos(b.h) + hz * sinc * std::cos(p.mu2)) / st;
        b.m_hat = m;
    }
    return b;
}

Eigen::Matrix2cd direct_floquet(double k, const BulkParams& p)
{
    const double hz = p.mu1 - p.J * std::cos(k);
    const double hy = p.Delta * std::sin(k);
    const double h = std::hypot(hz, hy);
    const Eigen::Matrix2cd u1 = h > 0 ? su2(h, 0.0, hy / h, hz / h) : Eigen::Matrix2cd::Identity().eval();
    return su2(p.mu2, 0.0, 0.0, 1.0) * u1;
}

Eigen::Matrix2cd floquet_from_band(const BulkBandPoint& b)
{
    if (!b.m_hat) return std::cos(b.theta) * Eigen::Matrix2cd::Identity();
    const Eigen::Vector3d& m = *b.m_hat;
    return su2(b.theta, m(0), m(1), m(2));
}

Eigen::Matrix2cd floquet_hamiltonian(const BulkBandPoint& b)
{
    const Eigen::Vector3d m = b.m_hat.value_or(Eigen::Vector3d(0, 0, 1));
    return b.theta * (m(0) * tau_x() + m(1) * tau_y() + m(2) * tau_z());
}

double phs_residual(double k, const BulkParams& p)
{
    const Eigen::Matrix2cd hk = floquet_hamiltonian(bulk_angle(k, p));
    const Eigen::Matrix2cd hmk = floquet_hamiltonian(bulk_angle(-k, p));
    const Eigen::Matrix2cd r = tau_x() * hk.conjugate() * tau_x() + hmk;
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(r);
    return svd.singularValues()(0);
}

BulkGaps bulk_gaps(const BulkParams& p, int k_points)
{
    if (k_points < 201) throw InvalidInput("bulk.k_points: need at least 201 points");
    BulkGaps g;
    g.zero_gap = pi;
    g.pi_gap = pi;
    g.theta_min = pi;
    g.theta_max = 0;
    for (int i = 0; i < k_points; ++i) {
        const double k = -pi + 2.0 * pi * i / (k_points - 1);
        const double th = bulk_angle(k, p).theta;
        g.zero_gap = std::min(g.zero_gap, th);
        g.pi_gap = std::min(g.pi_gap, pi - th);
        g.theta_min = std::min(g.theta_min, th);
        g.theta_max = std::max(g.theta_max, th);
    }
    return g;
}

ConsistencyReport open_vs_bulk_consistency(double mu1T, double mu2T, double JT, double DeltaT, int n_sites,
                                           const EdgeModeOptions& opt, double gap_tol)
{
    ConsistencyReport rep;
    const ChainSpec spec = ChainSpec::from_products(n_sites, 1.0, mu1T, mu2T, JT, DeltaT);
    const EdgeModeSet modes = find_edge_modes(one_period_propagator(spec), opt);
    rep.zero_flag = !modes.zero_modes.empty();
    rep.pi_flag = !modes.pi_modes.empty();
    rep.gaps = bulk_gaps(BulkParams::from_products(mu1T, mu2T, JT, DeltaT));
    rep.flat_band = rep.gaps.theta_max - rep.gaps.theta_min < 1e-9;
    if (rep.zero_flag && rep.gaps.zero_gap <= gap_tol) {
        ++rep.mismatches;
        rep.note += "zero mode flagged with closed zero gap; ";
    }
    if (rep.pi_flag && rep.gaps.pi_gap <= gap_tol) {
        ++rep.mismatches;
        rep.note += "pi mode flagged with closed pi gap; ";
    }
    if (rep.flat_band) rep.note += "flat bulk band (fine-tuned degeneracy); ";
    if (rep.note.empty()) rep.note = "consistent";
    return rep;
}

}  // namespace mtc
