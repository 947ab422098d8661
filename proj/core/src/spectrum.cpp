#include "mtc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

namespace mtc {

namespace {

constexpr double pi = std::numbers::pi;

double circ_dist(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
}

void check_propagator(const OrthogonalPropagator& r)
{
    if (r.r.rows() != r.r.cols() || r.r.rows() % 2 != 0)
        throw InvalidInput("propagator must be square with even dimension");
    if (r.orthogonality_defect() > 1e-9)
        throw ContractViolation("propagator is not orthogonal (defect " +
                                std::to_string(r.orthogonality_defect()) + ")");
}

void fix_sign(Vector& v, Edge e)
{
    const int n = static_cast<int>(v.size()) / 2;
    const int outer = majorana_index(e == Edge::Left ? 0 : n - 1, Sublattice::A);
    double ref = v(outer);
    if (std::abs(ref) < 1e-12) {
        Eigen::Index k;
        v.cwiseAbs().maxCoeff(&k);
        ref = v(k);
    }
    if (ref < 0) v = -v;
}

// Splits one degenerate cluster into left/right modes.
void localize_cluster(const OrthogonalPropagator& r, const Matrix& basis, double sign,
                      const EdgeModeOptions& opt, std::vector<EdgeMode>& out)
{
    const int m = static_cast<int>(basis.cols());
    if (m == 0) return;
    const int n = r.size() / 2;
    Matrix pl = Matrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < 2 * (n / 2); ++k) pl(k, k) = 1.0;
    Matrix g = basis.transpose() * pl * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
    const int edge_sites = std::max(1, std::min(opt.edge_sites, n / 2));

    std::vector<EdgeMode> left, right;
    for (int k = m - 1; k >= 0; --k) {
        Vector v = basis * es.eigenvectors().col(k);
        v.normalize();
        const Edge e = es.eigenvalues()(k) > 0.5 ? Edge::Left : Edge::Right;
        fix_sign(v, e);
        EdgeMode mode;
        mode.edge = e;
        mode.localization = edge_weight(v, e, edge_sites);
        mode.residual = (r.r * v - sign * v).norm();
        mode.mode = {v, std::string(sign > 0 ? "zero_" : "pi_") + (e == Edge::Left ? "L" : "R")};
        if (mode.localization > opt.loc_threshold) (e == Edge::Left ? left : right).push_back(mode);
    }
    for (auto& x : left) out.push_back(std::move(x));
    for (auto& x : right) out.push_back(std::move(x));
}

}  // namespace

double wrap_phase(double x)
{
    double y = std::remainder(x, 2.0 * pi);
    if (y <= -pi) y += 2.0 * pi;
    return y;
}

const EdgeMode* EdgeModeSet::zero(Edge e) const
{
    for (const auto& m : zero_modes)
        if (m.edge == e) return &m;
    return nullptr;
}

const EdgeMode* EdgeModeSet::pi(Edge e) const
{
    for (const auto& m : pi_modes)
        if (m.edge == e) return &m;
    return nullptr;
}

bool EdgeModeSet::has_both_edges() const
{
    return zero(Edge::Left) && zero(Edge::Right) && pi(Edge::Left) && pi(Edge::Right);
}

std::vector<double> quasienergies(const OrthogonalPropagator& r)
{
    check_propagator(r);
    Eigen::EigenSolver<Matrix> es(r.r, false);
    std::vector<double> out;
    out.reserve(r.size());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        out.push_back(wrap_phase(std::arg(es.eigenvalues()(k))));
    std::sort(out.begin(), out.end());
    return out;
}

double edge_weight(const Vector& v, Edge e, int edge_sites)
{
    const int n = static_cast<int>(v.size()) / 2;
    const int w = std::min(edge_sites, n);
    const int start = e == Edge::Left ? 0 : 2 * (n - w);
    return v.segment(start, 2 * w).squaredNorm() / v.squaredNorm();
}

EdgeModeSet find_edge_modes(const OrthogonalPropagator& r, const EdgeModeOptions& opt)
{
    check_propagator(r);
    if (!(opt.phase_tol > 0.0 && opt.phase_tol < pi / 4))
        throw InvalidInput("phase_tol must lie in (0, pi/4)");
    if (!(opt.loc_threshold > 0.0 && opt.loc_threshold < 1.0))
        throw InvalidInput("loc_threshold must lie in (0, 1)");

    Matrix s = 0.5 * (r.r + r.r.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    std::vector<int> zero_idx, pi_idx;
    for (int k = 0; k < r.size(); ++k) {
        const double eps = std::acos(std::clamp(es.eigenvalues()(k), -1.0, 1.0));
        if (eps < opt.phase_tol) zero_idx.push_back(k);
        else if (pi - eps < opt.phase_tol) pi_idx.push_back(k);
    }
    auto gather = [&](const std::vector<int>& idx) {
        Matrix b(r.size(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) b.col(k) = es.eigenvectors().col(idx[k]);
        return b;
    };
    EdgeModeSet out;
    localize_cluster(r, gather(zero_idx), 1.0, opt, out.zero_modes);
    localize_cluster(r, gather(pi_idx), -1.0, opt, out.pi_modes);
    return out;
}

SweepParameter parse_sweep_parameter(const std::string& name)
{
    if (name == "mu2") return SweepParameter::Mu2;
    if (name == "J=Delta") return SweepParameter::JEqualsDelta;
    if (name == "mu1") return SweepParameter::Mu1;
    throw InvalidInput("sweep.parameter: unknown parameter '" + name + "' (expected mu2, J=Delta, mu1)");
}

std::string to_string(SweepParameter p)
{
    switch (p) {
    case SweepParameter::Mu2: return "mu2";
    case SweepParameter::JEqualsDelta: return "J=Delta";
    case SweepParameter::Mu1: return "mu1";
    }
    return "";
}

ChainSpec with_sweep_value(const ChainSpec& base, SweepParameter p, double value_times_T)
{
    ChainSpec s = base;
    const double v = value_times_T / base.period;
    switch (p) {
    case SweepParameter::Mu2: s.mu2 = v; break;
    case SweepParameter::Mu1: s.mu1 = v; break;
    case SweepParameter::JEqualsDelta:
        std::fill(s.hopping.begin(), s.hopping.end(), Complex(v));
        std::fill(s.pairing.begin(), s.pairing.end(), Complex(v));
        break;
    }
    return s;
}

std::vector<EdgeFlag> edge_flags(const std::vector<double>& phases, const EdgeModeSet& modes)
{
    std::vector<EdgeFlag> flags(phases.size(), EdgeFlag::None);
    std::vector<std::size_t> order(phases.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(phases[a]) < std::abs(phases[b]); });
    for (std::size_t k = 0; k < modes.zero_modes.size() && k < order.size(); ++k)
        flags[order[k]] = EdgeFlag::Zero;
    std::size_t marked = 0;
    for (auto it = order.rbegin(); it != order.rend() && marked < modes.pi_modes.size(); ++it) {
        if (flags[*it] != EdgeFlag::None) break;
        flags[*it] = EdgeFlag::Pi;
        ++marked;
    }
    return flags;
}

SpectrumTable spectrum_sweep(const ChainSpec& base, SweepParameter p, const std::vector<double>& grid,
                             const EdgeModeOptions& opt, int threads)
{
    base.validate();
    if (grid.empty()) throw InvalidInput("sweep grid is empty");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw InvalidInput("sweep grid must be strictly increasing");

    SpectrumTable t;
    t.parameter = p;
    t.parameter_grid = grid;
    t.eigenphases.resize(grid.size());
    t.flags.resize(grid.size());

    auto work = [&](std::size_t k) {
        const OrthogonalPropagator r = one_period_propagator(with_sweep_value(base, p, grid[k]));
        t.eigenphases[k] = quasienergies(r);
        t.flags[k] = edge_flags(t.eigenphases[k], find_edge_modes(r, opt));
    };
    const std::size_t nthreads = std::max<std::size_t>(1, std::min<std::size_t>(threads, grid.size()));
    if (nthreads == 1) {
        for (std::size_t k = 0; k < grid.size(); ++k) work(k);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < nthreads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < grid.size(); k += nthreads) work(k);
            });
        for (auto& th : pool) th.join();
    }
    return t;
}

TwoPeriodSpectrum two_period_spectrum(const ChainSpec& first, const ChainSpec& second, double zero_tol)
{
    if (first.n_sites != second.n_sites) throw InvalidInput("snapshot specs differ in N");
    const OrthogonalPropagator u2 = one_period_propagator(second).after(one_period_propagator(first));
    TwoPeriodSpectrum out;
    out.phases = quasienergies(u2);
    out.bulk_gap = pi;
    for (double e : out.phases) {
        if (std::abs(e) < zero_tol) {
            ++out.zero_count;
            out.zero_spread = std::max(out.zero_spread, std::abs(e));
        } else {
            out.bulk_gap = std::min(out.bulk_gap, std::abs(e));
        }
    }
    return out;
}

double phase_pairing_defect(const std::vector<double>& phases)
{
    std::vector<double> a = phases, b;
    for (double x : phases) b.push_back(wrap_phase(-x));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size();
    double best = pi;
    for (std::size_t shift : {std::size_t{0}, std::size_t{1}, n - 1}) {
        if (n == 0) return 0.0;
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, circ_dist(a[k], b[(k + shift) % n]));
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace mtc
