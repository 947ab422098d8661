#include "mtc/chain.hpp"

#include <cmath>

#include "mtc/linalg.hpp"

namespace mtc {

namespace {

void check_length(const char* field, std::size_t got, std::size_t want, bool optional)
{
    if (optional && got == 0) return;
    if (got != want)
        throw InvalidInput(std::string("chain.") + field + ": expected length " +
                           std::to_string(want) + ", got " + std::to_string(got));
}

}  // namespace

void ChainSpec::validate() const
{
    if (n_sites < 1) throw InvalidInput("chain.N: must be >= 1");
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidInput("chain.T: must be > 0");
    const std::size_t bonds = static_cast<std::size_t>(n_sites - 1);
    const std::size_t sites = static_cast<std::size_t>(n_sites);
    check_length("J", hopping.size(), bonds, false);
    check_length("Delta", pairing.size(), bonds, false);
    check_length("h2_hopping", h2_hopping.size(), bonds, true);
    check_length("hopping_offset", hopping_offset.size(), bonds, true);
    check_length("pairing_offset", pairing_offset.size(), bonds, true);
    check_length("mu1_offset", mu1_offset.size(), sites, true);
    check_length("mu2_offset", mu2_offset.size(), sites, true);
}

Complex ChainSpec::bond_hopping(int j) const
{
    return hopping[j] + (hopping_offset.empty() ? 0.0 : hopping_offset[j]);
}

Complex ChainSpec::bond_pairing(int j) const
{
    return pairing[j] + (pairing_offset.empty() ? 0.0 : pairing_offset[j]);
}

double ChainSpec::site_mu1(int j) const { return mu1 + (mu1_offset.empty() ? 0.0 : mu1_offset[j]); }
double ChainSpec::site_mu2(int j) const { return mu2 + (mu2_offset.empty() ? 0.0 : mu2_offset[j]); }

ChainSpec ChainSpec::from_products(int n, double period, double mu1T, double mu2T, Complex JT,
                                   Complex DeltaT, double h2T)
{
    if (n < 1) throw InvalidInput("chain.N: must be >= 1");
    if (!(period > 0.0)) throw InvalidInput("chain.T: must be > 0");
    ChainSpec s;
    s.n_sites = n;
    s.period = period;
    s.mu1 = mu1T / period;
    s.mu2 = mu2T / period;
    s.hopping.assign(n - 1, JT / period);
    s.pairing.assign(n - 1, DeltaT / period);
    s.h2_hopping.assign(n - 1, h2T / period);
    return s;
}

void MajoranaCoupling::add_term(int m, int n, double c)
{
    a(m, n) += 2.0 * c;
    a(n, m) -= 2.0 * c;
}

ModeVector ModeVector::site(int n_sites, int site, Sublattice l, std::string label)
{
    ModeVector v{Vector::Zero(2 * n_sites), std::move(label)};
    v.c(majorana_index(site, l)) = 1.0;
    return v;
}

OrthogonalPropagator OrthogonalPropagator::identity(int dim)
{
    return {Matrix::Identity(dim, dim), 0};
}

ModeVector OrthogonalPropagator::apply(const ModeVector& v) const
{
    if (v.c.size() != r.rows()) throw InvalidInput("mode vector dimension mismatch");
    return {r * v.c, v.label};
}

OrthogonalPropagator OrthogonalPropagator::after(const OrthogonalPropagator& first) const
{
    if (first.r.rows() != r.rows()) throw InvalidInput("propagator dimension mismatch");
    Matrix p = r * first.r;
    // one Newton-Schulz step back onto the orthogonal group
    p = 0.5 * p * (3.0 * Matrix::Identity(p.rows(), p.cols()) - p.transpose() * p);
    return {p, elapsed_periods + first.elapsed_periods};
}

OrthogonalPropagator OrthogonalPropagator::power(long n) const
{
    if (n < 0) throw InvalidInput("negative propagator power");
    OrthogonalPropagator out = identity(size());
    OrthogonalPropagator base = *this;
    while (n > 0) {
        if (n & 1) out = base.after(out);
        n >>= 1;
        if (n) base = base.after(base);
    }
    return out;
}

double OrthogonalPropagator::orthogonality_defect() const
{
    if (r.size() == 0) return 0.0;
    return (r.transpose() * r - Matrix::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
}

void add_bond(MajoranaCoupling& h, int j, int k, Complex J, Complex Delta)
{
    const int a = majorana_index(j, Sublattice::A), b = majorana_index(j, Sublattice::B);
    const int a2 = majorana_index(k, Sublattice::A), b2 = majorana_index(k, Sublattice::B);
    if (J.imag() - Delta.imag() != 0.0) h.add_term(a, a2, 0.5 * (J.imag() - Delta.imag()));
    if (J.imag() + Delta.imag() != 0.0) h.add_term(b, b2, 0.5 * (J.imag() + Delta.imag()));
    if (J.real() + Delta.real() != 0.0) h.add_term(b, a2, -0.5 * (J.real() + Delta.real()));
    if (J.real() - Delta.real() != 0.0) h.add_term(a, b2, 0.5 * (J.real() - Delta.real()));
}

void add_onsite(MajoranaCoupling& h, int j, double mu)
{
    if (mu != 0.0)
        h.add_term(majorana_index(j, Sublattice::A), majorana_index(j, Sublattice::B), -0.5 * mu);
}

MajoranaCoupling build_h1_coupling(const ChainSpec& spec)
{
    spec.validate();
    const int n = spec.n_sites;
    MajoranaCoupling h{Matrix::Zero(2 * n, 2 * n)};
    for (int j = 0; j + 1 < n; ++j) add_bond(h, j, j + 1, spec.bond_hopping(j), spec.bond_pairing(j));
    for (int j = 0; j < n; ++j) add_onsite(h, j, spec.site_mu1(j));
    return h;
}

MajoranaCoupling build_h2_coupling(const ChainSpec& spec)
{
    spec.validate();
    const int n = spec.n_sites;
    MajoranaCoupling h{Matrix::Zero(2 * n, 2 * n)};
    for (int j = 0; j < n; ++j) add_onsite(h, j, spec.site_mu2(j));
    if (!spec.h2_hopping.empty())
        for (int j = 0; j + 1 < n; ++j) add_bond(h, j, j + 1, spec.h2_hopping[j], 0.0);
    return h;
}

OrthogonalPropagator half_period_rotation(const MajoranaCoupling& h, double duration)
{
    if (!(duration > 0.0)) throw InvalidInput("duration must be > 0");
    if (h.a.rows() != h.a.cols()) throw ContractViolation("coupling array not square");
    const double scale = h.a.size() ? std::max(1.0, h.a.cwiseAbs().maxCoeff()) : 1.0;
    if (antisymmetry_defect(h.a) > 1e-14 * scale)
        throw ContractViolation("coupling array is not antisymmetric");
    return {expm_antisymmetric(h.a, duration), 0};
}

OrthogonalPropagator one_period_propagator(const ChainSpec& spec)
{
    const double tau = 0.5 * spec.period;
    OrthogonalPropagator first = half_period_rotation(build_h1_coupling(spec), tau);
    OrthogonalPropagator second = half_period_rotation(build_h2_coupling(spec), tau);
    OrthogonalPropagator u = second.after(first);
    u.elapsed_periods = 1;
    return u;
}

BondRecovery recover_bdg(const MajoranaCoupling& h)
{
    const int n = h.size() / 2;
    BondRecovery out;
    for (int j = 0; j + 1 < n; ++j) {
        const int a = 2 * j, b = 2 * j + 1, a2 = 2 * j + 2, b2 = 2 * j + 3;
        const double aa = h.channel(a, a2), bb = h.channel(b, b2);
        const double ba = h.channel(b, a2), ab = h.channel(a, b2);
        out.hopping.emplace_back(ab - ba, aa + bb);
        out.pairing.emplace_back(-(ab + ba), bb - aa);
    }
    for (int j = 0; j < n; ++j) out.mu.push_back(-2.0 * h.channel(2 * j, 2 * j + 1));
    return out;
}

}  // namespace mtc
