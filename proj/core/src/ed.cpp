#include "mtc/ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mtc/braiding.hpp"
#include "mtc/spectrum.hpp"

namespace mtc {

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0.0, 1.0);

void check_size(int n)
{
    if (n < 1 || n > ed_max_sites)
        throw InvalidInput("ed: N must lie in [1, " + std::to_string(ed_max_sites) + "], got " + std::to_string(n));
}

CMatrix expm_hermitian(const CMatrix& h, double t)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector ph(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) ph(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> unitary_phases(const CMatrix& u)
{
    Eigen::ComplexEigenSolver<CMatrix> es(u, false);
    std::vector<double> out;
    for (Eigen::Index k = 0; k < u.rows(); ++k) out.push_back(wrap_phase(std::arg(es.eigenvalues()(k))));
    std::sort(out.begin(), out.end());
    return out;
}

double circ_dist(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
}

CMatrix majorana_combination(const std::vector<CMatrix>& g, const Vector& v)
{
    CMatrix out = CMatrix::Zero(g[0].rows(), g[0].cols());
    for (int k = 0; k < v.size(); ++k)
        if (v(k) != 0.0) out += v(k) * g[k];
    return out;
}

}  // namespace

double ManyBodyFloquet::unitarity_defect() const
{
    return (unitary.adjoint() * unitary - CMatrix::Identity(dimension, dimension)).cwiseAbs().maxCoeff();
}

std::vector<Matrix> annihilators(int n)
{
    check_size(n);
    const long dim = 1L << n;
    std::vector<Matrix> c;
    for (int j = 0; j < n; ++j) {
        Matrix m = Matrix::Zero(dim, dim);
        for (long b = 0; b < dim; ++b) {
            if (!((b >> j) & 1)) continue;
            const int below = std::popcount(static_cast<unsigned long>(b & ((1L << j) - 1)));
            m(b ^ (1L << j), b) = below % 2 ? -1.0 : 1.0;
        }
        c.push_back(std::move(m));
    }
    return c;
}

std::vector<CMatrix> majorana_operators(int n)
{
    std::vector<CMatrix> g;
    for (const Matrix& c : annihilators(n)) {
        g.push_back((c + c.transpose()).cast<Complex>());
        g.push_back(I * (c - c.transpose()).cast<Complex>());
    }
    return g;
}

ManyBodyHamiltonians many_body_hamiltonians(const ChainSpec& spec)
{
    spec.validate();
    const int n = spec.n_sites;
    check_size(n);
    const auto c = annihilators(n);
    const long dim = 1L << n;
    std::vector<CMatrix> cc, cd;
    for (const auto& m : c) {
        cc.push_back(m.cast<Complex>());
        cd.push_back(m.transpose().cast<Complex>());
    }
    ManyBodyHamiltonians h{CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim)};
    for (int j = 0; j < n; ++j) {
        h.h1 += spec.site_mu1(j) * cd[j] * cc[j];
        h.h2 += spec.site_mu2(j) * cd[j] * cc[j];
    }
    for (int j = 0; j + 1 < n; ++j) {
        CMatrix t = -spec.bond_hopping(j) * cd[j + 1] * cc[j] + spec.bond_pairing(j) * cd[j + 1] * cd[j];
        h.h1 += t + t.adjoint();
        if (!spec.h2_hopping.empty()) {
            CMatrix t2 = -spec.h2_hopping[j] * cd[j + 1] * cc[j];
            h.h2 += t2 + t2.adjoint();
        }
    }
    return h;
}

ManyBodyFloquet fermion_floquet(const ChainSpec& spec)
{
    const ManyBodyHamiltonians h = many_body_hamiltonians(spec);
    const double tau = 0.5 * spec.period;
    ManyBodyFloquet u;
    u.n_sites = spec.n_sites;
    u.dimension = 1L << spec.n_sites;
    u.unitary = expm_hermitian(h.h2, tau) * expm_hermitian(h.h1, tau);
    u.eigenphases = unitary_phases(u.unitary);
    u.provenance = Provenance::Fermion;
    return u;
}

ManyBodyFloquet ising_floquet(double j_ising, double f, int n, double period)
{
    check_size(n);
    if (!(period > 0.0)) throw InvalidInput("ed: T must be > 0");
    const long dim = 1L << n;
    CMatrix h1 = CMatrix::Zero(dim, dim), h2 = CMatrix::Zero(dim, dim);
    for (long b = 0; b < dim; ++b) {
        double zz = 0.0;
        for (int j = 0; j + 1 < n; ++j) zz += (((b >> j) ^ (b >> (j + 1))) & 1) ? -1.0 : 1.0;
        h1(b, b) = -j_ising * zz;
        for (int j = 0; j < n; ++j) h2(b ^ (1L << j), b) += -f;
    }
    const double tau = 0.5 * period;
    ManyBodyFloquet u;
    u.n_sites = n;
    u.dimension = dim;
    u.unitary = expm_hermitian(h2, tau) * expm_hermitian(h1, tau);
    u.eigenphases = unitary_phases(u.unitary);
    u.provenance = Provenance::Spin;
    return u;
}

Matrix heisenberg_matrix(const ManyBodyFloquet& u)
{
    const auto g = majorana_operators(u.n_sites);
    const int m = 2 * u.n_sites;
    Matrix r(m, m);
    for (int k = 0; k < m; ++k) {
        const CMatrix gk = u.unitary.adjoint() * g[k] * u.unitary;
        for (int l = 0; l < m; ++l) r(k, l) = (gk * g[l]).trace().real() / static_cast<double>(u.dimension);
    }
    return r;
}

double parity_commutator(const ManyBodyFloquet& u)
{
    CVector p(u.dimension);
    for (long b = 0; b < u.dimension; ++b) p(b) = std::popcount(static_cast<unsigned long>(b)) % 2 ? -1.0 : 1.0;
    return (u.unitary * p.asDiagonal() - p.asDiagonal() * u.unitary).cwiseAbs().maxCoeff();
}

std::vector<double> sum_rule_phases(const std::vector<double>& single)
{
    std::vector<double> mags;
    for (double e : single) mags.push_back(std::abs(e));
    std::sort(mags.begin(), mags.end());
    std::vector<double> eps;
    for (std::size_t k = 0; k < mags.size(); k += 2) eps.push_back(mags[k]);
    const std::size_t n = eps.size();
    std::vector<double> out;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += ((mask >> k) & 1 ? 0.5 : -0.5) * eps[k];
        out.push_back(wrap_phase(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

double aligned_phase_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size() || a.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    std::vector<double> bs = b, shifted(n);
    std::sort(bs.begin(), bs.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double delta = bs[0] - a[j];
        for (std::size_t k = 0; k < n; ++k) shifted[k] = wrap_phase(a[k] + delta);
        std::sort(shifted.begin(), shifted.end());
        for (std::size_t s = 0; s < n; ++s) {
            double worst = 0.0;
            for (std::size_t k = 0; k < n && worst < best; ++k)
                worst = std::max(worst, circ_dist(shifted[(k + s) % n], bs[k]));
            best = std::min(best, worst);
        }
    }
    return best;
}

SumRuleReport sum_rule_check(const ChainSpec& spec)
{
    const ManyBodyFloquet u = fermion_floquet(spec);
    const OrthogonalPropagator r = one_period_propagator(spec);
    SumRuleReport rep;
    rep.sum_rule_deviation = aligned_phase_distance(sum_rule_phases(quasienergies(r)), u.eigenphases);
    rep.heisenberg_deviation = (heisenberg_matrix(u) - r.r).cwiseAbs().maxCoeff();
    rep.parity_commutator = parity_commutator(u);
    rep.unitarity_defect = u.unitarity_defect();
    return rep;
}

double ising_equivalence_deviation(double j_ising, double f, int n, double period)
{
    ChainSpec s;
    s.n_sites = n;
    s.period = period;
    s.mu1 = 0.0;
    s.mu2 = 2.0 * f;
    s.hopping.assign(n - 1, Complex(-j_ising));
    s.pairing.assign(n - 1, Complex(-j_ising));
    return aligned_phase_distance(fermion_floquet(s).eigenphases, ising_floquet(j_ising, f, n, period).eigenphases);
}

MagicStateResult magic_state_check(const ChainSpec& spec, const StageSchedule& schedule)
{
    spec.validate();
    if (spec.n_sites > 6) throw InvalidInput("magic_state_check: N must be <= 6");
    for (const auto& st : schedule.stages)
        if (st.duration_periods < 1) throw InvalidInput("schedule stage '" + st.name + "' has no periods");
    const int n = spec.n_sites;
    const int m = 2 * n;
    const double tau = 0.5 * spec.period;

    const ChainSpec start = protocol_start(schedule, spec);
    const OrthogonalPropagator r = one_period_propagator(start);
    const EdgePair ep = initial_edge_pair(r, EdgeModeOptions{});

    const Matrix pairs = floquet_vacuum_pairs(r, ep);
    const auto g = majorana_operators(n);
    const long dim = 1L << n;
    auto gam = [&](const Vector& v) { return majorana_combination(g, v); };
    CMatrix stab = CMatrix::Zero(dim, dim);
    for (int k = 0; k < m; k += 2) stab -= I * gam(pairs.col(k)) * gam(pairs.col(k + 1));
    const Vector la = pairs.col(0), ra = pairs.col(1), lb = pairs.col(2);
    Eigen::SelfAdjointEigenSolver<CMatrix> gs(stab);
    const CVector zero = gs.eigenvectors().col(0);
    const CVector one = gam(la) * gam(lb) * zero;

    const CMatrix sz = I * gam(la) * gam(ra);
    const CMatrix sy = I * gam(la) * gam(lb);
    const CMatrix sx = I * gam(ra) * gam(lb);

    MagicStateResult res;
    {
        CMatrix b(dim, 2);
        b << zero, one;
        Eigen::Matrix2cd px, py, pz;
        px << 0, 1, 1, 0;
        py << 0, -I, I, 0;
        pz << 1, 0, 0, -1;
        res.pauli_encoding_defect = std::max({(b.adjoint() * sx * b - px).cwiseAbs().maxCoeff(),
                                              (b.adjoint() * sy * b - py).cwiseAbs().maxCoeff(),
                                              (b.adjoint() * sz * b - pz).cwiseAbs().maxCoeff()});
    }

    const ManyBodyHamiltonians h0 = many_body_hamiltonians(spec);
    const CMatrix u2 = expm_hermitian(h0.h2, tau);
    CVector psi = zero;
    for (int si = 0; si < static_cast<int>(schedule.stages.size()); ++si) {
        const Stage& st = schedule.stages[si];
        double last_s = -1.0;
        CMatrix u;
        for (int p = 0; p < st.duration_periods; ++p) {
            const double s = st.progress(p);
            if (s != last_s) {
                u = u2 * expm_hermitian(many_body_hamiltonians(apply_knobs(spec, schedule.values_at(si, s))).h1, tau);
                last_s = s;
            }
            psi = u * psi;
            ++res.periods;
        }
    }

    const double c8 = std::cos(pi / 8), s8 = std::sin(pi / 8);
    res.full_zero = std::abs(zero.dot(psi));
    res.full_magic = std::abs((c8 * zero - s8 * one).dot(psi));
    res.full_braid = std::abs(((zero - one) / std::numbers::sqrt2).dot(psi));
    res.bloch << psi.dot(sx * psi).real(), psi.dot(sy * psi).real(), psi.dot(sz * psi).real();
    auto logical = [&](const Eigen::Vector3d& t) { return std::sqrt(std::max(0.0, 0.5 * (1.0 + res.bloch.dot(t)))); };
    res.logical_zero = logical({0, 0, 1});
    res.logical_magic = logical({-std::sin(pi / 4), 0, std::cos(pi / 4)});
    res.logical_braid = logical({-1, 0, 0});
    return res;
}

}  // namespace mtc
