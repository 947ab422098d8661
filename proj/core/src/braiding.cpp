#include "mtc/braiding.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "mtc/linalg.hpp"
#include "mtc/rng.hpp"

namespace mtc {

namespace {

constexpr double pi = std::numbers::pi;

struct Correlations {
    double aa, bb, ab, ba;
    Eigen::Matrix2d k;
};

Correlations correlate(const Matrix& x, const Vector& la, const Vector& lb)
{
    Correlations c;
    c.aa = x.col(0).dot(la);
    c.bb = x.col(1).dot(lb);
    c.ab = x.col(0).dot(lb);
    c.ba = x.col(1).dot(la);
    c.k << c.aa, c.ba, c.ab, c.bb;
    return c;
}

double leakage(const Matrix& x, const Matrix& q)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        worst = std::max(worst, 1.0 - (q.transpose() * x.col(j)).squaredNorm());
    return std::clamp(worst, 0.0, 1.0);
}

double pair_defect(const Matrix& x)
{
    Eigen::Matrix2d g = x.transpose() * x;
    return (g - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
}

// Four eigenvectors of sym(R^2) closest to +1.
Matrix instantaneous_span(const Matrix& e2, const MajoranaCoupling& h1, double tau)
{
    const Matrix r = e2 * expm_antisymmetric(h1.a, tau);
    const Matrix r2 = r * r;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r2 + r2.transpose()));
    const Eigen::Index n = r.rows();
    return es.eigenvectors().rightCols(std::min<Eigen::Index>(4, n));
}

void check_unowned_bonds_real(const StageSchedule& schedule, const ChainSpec& base)
{
    int owned_bonds = 0;
    for (Knob k : schedule.owned()) {
        if (k == Knob::J1 || k == Knob::Delta1) owned_bonds = std::max(owned_bonds, 1);
        if (k == Knob::J2 || k == Knob::Delta2) owned_bonds = std::max(owned_bonds, 2);
    }
    for (int j = owned_bonds; j + 1 < base.n_sites; ++j)
        if (base.hopping[j].imag() != 0.0 || base.pairing[j].imag() != 0.0)
            throw InvalidInput("chain bond " + std::to_string(j + 1) +
                               " is complex but not owned by the schedule");
}

std::string spectrum_diagnostic(const OrthogonalPropagator& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "quasienergies:";
    for (double e : quasienergies(r)) os << ' ' << e;
    return os.str();
}

}  // namespace

FidelityReport normalized_fidelity(double theta)
{
    FidelityReport f;
    f.theta = theta;
    f.overlap = std::cos(0.5 * theta - 0.25 * pi);
    f.normalized_fidelity = (f.overlap - 1.0 / std::numbers::sqrt2) / (1.0 - 1.0 / std::numbers::sqrt2);
    return f;
}

double rotation_angle(const Eigen::Matrix2d& k)
{
    return std::atan2(k(1, 0) - k(0, 1), k(0, 0) + k(1, 1));
}

EdgePair initial_edge_pair(const OrthogonalPropagator& r, const EdgeModeOptions& opt)
{
    const EdgeModeSet modes = find_edge_modes(r, opt);
    if (!modes.has_both_edges())
        throw PreconditionFailure("initial parameters lack zero and pi modes on both edges",
                                  spectrum_diagnostic(r));
    auto pick = [&](const std::vector<EdgeMode>& list, Edge e) {
        const EdgeMode* best = nullptr;
        for (const auto& m : list)
            if (m.edge == e && (!best || m.localization > best->localization)) best = &m;
        return best->mode.c;
    };
    EdgePair p;
    const Vector la = (pick(modes.zero_modes, Edge::Left) + pick(modes.pi_modes, Edge::Left)) / std::numbers::sqrt2;
    const Vector ra = (pick(modes.zero_modes, Edge::Right) + pick(modes.pi_modes, Edge::Right)) / std::numbers::sqrt2;
    p.left_a = {la, "gamma_L_A"};
    p.left_b = {r.r * la, "gamma_L_B"};
    p.right_a = {ra, "gamma_R_A"};
    p.right_b = {r.r * ra, "gamma_R_B"};
    return p;
}

ChainSpec protocol_start(const StageSchedule& schedule, const ChainSpec& base)
{
    return apply_knobs(base, schedule.initial_values());
}

Matrix floquet_vacuum_pairs(const OrthogonalPropagator& r, const EdgePair& ep)
{
    const long m = r.r.rows();
    Matrix e(m, 4);
    e << ep.left_a.c, ep.right_a.c, ep.left_b.c, ep.right_b.c;
    // symmetric orthonormalization; hybridized short chains leave small overlaps
    Eigen::SelfAdjointEigenSolver<Matrix> gram(e.transpose() * e);
    e = e * gram.operatorInverseSqrt();
    const Matrix pc = Matrix::Identity(m, m) - e * e.transpose();
    const Matrix sym = 0.5 * (r.r + r.r.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(pc * sym * pc);

    Matrix out(m, m);
    out.leftCols(4) = e;
    long filled = 4;
    for (long k = 0; k < m && filled < m; ++k) {
        Vector u = pc * es.eigenvectors().col(k);
        if (u.norm() < 0.5) continue;
        for (long j = 4; j < filled; ++j) u -= out.col(j).dot(u) * out.col(j);
        if (u.norm() < 1e-6) continue;
        u.normalize();
        Vector v = r.r * u - u.dot(sym * u) * u;
        for (long j = 4; j < filled; ++j) v -= out.col(j).dot(v) * out.col(j);
        if (v.norm() < 1e-9) throw ContractViolation("bulk mode at quasienergy 0 or pi; no vacuum pairing");
        out.col(filled++) = u;
        out.col(filled++) = v.normalized();
    }
    if (filled != m) throw ContractViolation("floquet_vacuum_pairs: incomplete bulk basis");
    return out;
}

double gaussian_overlap(const Matrix& pairs1, const Matrix& pairs2)
{
    const long m = pairs1.rows();
    if (m % 2 || pairs1.cols() != m || pairs2.rows() != m || pairs2.cols() != m)
        throw InvalidInput("gaussian_overlap: need two square 2N x 2N pair matrices");
    auto gamma = [m](const Matrix& p) {
        Matrix g = Matrix::Zero(m, m);
        for (long k = 0; k < m; k += 2)
            g += p.col(k) * p.col(k + 1).transpose() - p.col(k + 1) * p.col(k).transpose();
        return g;
    };
    const Eigen::PartialPivLU<Matrix> lu(gamma(pairs1) + gamma(pairs2));
    double logdet = 0;
    for (long k = 0; k < m; ++k) {
        const double d = std::abs(lu.matrixLU()(k, k));
        if (d == 0.0) return 0.0;
        logdet += std::log(d);
    }
    // |<1|2>|^2 = 2^-N sqrt|det(G1 + G2)|
    return std::exp(0.5 * (-0.5 * m * std::log(2.0) + 0.5 * logdet));
}

Matrix ideal_rotated_pairs(const Matrix& pairs, double theta)
{
    Matrix out = pairs;
    out.col(0) = std::cos(theta) * pairs.col(0) + std::sin(theta) * pairs.col(2);
    out.col(2) = -std::sin(theta) * pairs.col(0) + std::cos(theta) * pairs.col(2);
    return out;
}

ProtocolResult run_protocol(const StageSchedule& schedule, const ChainSpec& base, const ProtocolOptions& opt)
{
    base.validate();
    if (opt.record_every < 1) throw InvalidInput("record_every: must be >= 1");
    check_unowned_bonds_real(schedule, base);
    for (const auto& st : schedule.stages)
        if (st.duration_periods < 1) throw InvalidInput("schedule stage '" + st.name + "' has no periods");

    const ChainSpec start = protocol_start(schedule, base);
    const OrthogonalPropagator r0 = one_period_propagator(start);
    const EdgePair ep = initial_edge_pair(r0, opt.edge);
    const int n2 = 2 * base.n_sites;
    const double tau = 0.5 * base.period;

    Matrix q(n2, 4);
    q << ep.left_a.c, ep.left_b.c, ep.right_a.c, ep.right_b.c;
    q = Eigen::HouseholderQR<Matrix>(q).householderQ() * Matrix::Identity(n2, 4);

    const Matrix e2 = expm_antisymmetric(build_h2_coupling(base).a, tau);
    Matrix x(n2, 2);
    x << ep.left_a.c, ep.left_b.c;
    Matrix pairs, w;
    if (opt.state_overlap) w = pairs = floquet_vacuum_pairs(r0, ep);

    ProtocolResult res;
    res.init_left_a = ep.left_a;
    res.init_left_b = ep.left_b;
    res.init_right_a = ep.right_a;
    res.init_right_b = ep.right_b;

    long period = 0;
    auto record = [&](const MajoranaCoupling* h1) {
        const Correlations c = correlate(x, ep.left_a.c, ep.left_b.c);
        CorrelationRecord rec{period, c.aa, c.bb, c.ab, c.ba, 0.0};
        if (opt.instantaneous_leakage && h1) rec.leakage = leakage(x, instantaneous_span(e2, *h1, tau));
        else rec.leakage = leakage(x, q);
        res.max_leakage = std::max(res.max_leakage, rec.leakage);
        res.max_pair_defect = std::max(res.max_pair_defect, pair_defect(x));
        res.records.push_back(rec);
    };

    const MajoranaCoupling h_start = build_h1_coupling(start);
    record(&h_start);

    for (int si = 0; si < static_cast<int>(schedule.stages.size()); ++si) {
        const Stage& st = schedule.stages[si];
        MajoranaCoupling h1;
        double last_s = -1.0;
        SparseMatrix a1;
        for (int p = 0; p < st.duration_periods; ++p) {
            const double s = st.progress(p);
            if (s != last_s) {
                h1 = build_h1_coupling(apply_knobs(base, schedule.values_at(si, s)));
                a1 = h1.a.sparseView();
                last_s = s;
            }
            apply_expm(a1, tau, x);
            x = e2 * x;
            if (opt.state_overlap) {
                apply_expm(a1, tau, w);
                w = e2 * w;
            }
            ++period;
            const bool last = si + 1 == static_cast<int>(schedule.stages.size()) && p + 1 == st.duration_periods;
            if (period % opt.record_every == 0 || last) record(&h1);
        }
        const Correlations c = correlate(x, ep.left_a.c, ep.left_b.c);
        res.stage_end_theta.push_back(rotation_angle(c.k));
        res.stage_end_block_defect.push_back(
            (c.k.transpose() * c.k - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    }

    const Correlations c = correlate(x, ep.left_a.c, ep.left_b.c);
    res.final_block = c.k;
    res.report = normalized_fidelity(rotation_angle(c.k));
    if (opt.state_overlap) {
        FidelityReport st;
        st.theta = res.report.theta;
        st.overlap = gaussian_overlap(ideal_rotated_pairs(pairs, 0.5 * pi), w);
        st.normalized_fidelity = (st.overlap - 1.0 / std::numbers::sqrt2) / (1.0 - 1.0 / std::numbers::sqrt2);
        res.state = st;
    }
    res.final_leakage = leakage(x, q);
    res.leakage_flag = res.max_leakage > opt.leakage_abort;
    res.left_a = {x.col(0), "gamma_L_A(t)"};
    res.left_b = {x.col(1), "gamma_L_B(t)"};
    return res;
}

void DisorderSpec::validate() const
{
    if (d_hopping < 0 || d_pairing < 0 || d_mu1 < 0 || d_mu2 < 0 || d_h2 < 0)
        throw InvalidInput("disorder: ranges must be >= 0");
    if (realizations < 1) throw InvalidInput("disorder.realizations: must be >= 1");
}

ChainSpec apply_disorder(const ChainSpec& spec, const DisorderSpec& d, int realization_index)
{
    spec.validate();
    d.validate();
    if (realization_index < 0 || realization_index >= d.realizations)
        throw InvalidInput("disorder realization index out of range");
    SplitMix64 rng(SplitMix64::stream(d.master_seed, fnv1a("braid-disorder"), realization_index));
    const int n = spec.n_sites;
    const double t = spec.period;
    std::vector<double> dj(n - 1), dd(n - 1), dm1(n), dm2(n), dh(n - 1);
    for (auto& v : dj) v = rng.symmetric(d.d_hopping) / t;
    for (auto& v : dd) v = rng.symmetric(d.d_pairing) / t;
    for (auto& v : dm1) v = rng.symmetric(d.d_mu1) / t;
    for (auto& v : dm2) v = rng.symmetric(d.d_mu2) / t;
    for (auto& v : dh) v = (d.h2_mean + rng.symmetric(d.d_h2)) / t;

    auto add = [](std::vector<double>& target, const std::vector<double>& delta) {
        if (target.empty()) target.assign(delta.size(), 0.0);
        for (std::size_t k = 0; k < delta.size(); ++k) target[k] += delta[k];
    };
    ChainSpec out = spec;
    if (d.d_hopping > 0) add(out.hopping_offset, dj);
    if (d.d_pairing > 0) add(out.pairing_offset, dd);
    if (d.d_mu1 > 0) add(out.mu1_offset, dm1);
    if (d.d_mu2 > 0) add(out.mu2_offset, dm2);
    if (d.h2_mean != 0 || d.d_h2 > 0) add(out.h2_hopping, dh);
    return out;
}

EnsembleResult disorder_ensemble(const StageSchedule& schedule, const ChainSpec& base, const DisorderSpec& d,
                                 const ProtocolOptions& opt, int threads)
{
    d.validate();
    ProtocolOptions o = opt;
    o.instantaneous_leakage = false;
    o.state_overlap = false;
    o.record_every = std::max(1, schedule.total_periods());

    EnsembleResult out;
    out.runs.resize(d.realizations);
    auto work = [&](int i) {
        ProtocolResult r = run_protocol(schedule, apply_disorder(base, d, i), o);
        r.records.erase(r.records.begin(), r.records.end() - 1);
        out.runs[i] = std::move(r);
    };
    const int nthreads = std::max(1, std::min(threads, d.realizations));
    if (nthreads == 1) {
        for (int i = 0; i < d.realizations; ++i) work(i);
    } else {
        std::vector<std::exception_ptr> errors(nthreads);
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int i = w; i < d.realizations; i += nthreads) work(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    for (const auto& r : out.runs) {
        const CorrelationRecord& f = r.records.back();
        out.mean_aa += f.aa;
        out.mean_bb += f.bb;
        out.mean_ab += f.ab;
        out.mean_ba += f.ba;
        out.mean_theta += r.report.theta;
        out.flagged += r.leakage_flag ? 1 : 0;
    }
    const double n = d.realizations;
    out.mean_aa /= n;
    out.mean_bb /= n;
    out.mean_ab /= n;
    out.mean_ba /= n;
    out.mean_theta /= n;
    return out;
}

StageSchedule multiwire_schedule(int periods_per_step, bool inter_wire_coupling)
{
    if (periods_per_step < 1) throw InvalidInput("schedule.periods_per_step: must be >= 1");
    const Complex I(0.0, 1.0);
    const double g = inter_wire_coupling ? 1.0 : 0.0;
    auto sin_ramp = [](Complex amp) { return [amp](double s) { return amp * std::sin(0.5 * pi * s); }; };
    auto cos_ramp = [](Complex amp) { return [amp](double s) { return amp * std::cos(0.5 * pi * s); }; };

    StageSchedule s;
    s.stages.push_back(make_stage1(periods_per_step));

    Stage couple{"couple", periods_per_step, Cadence::EveryPeriod, {}, {}, false};
    couple.curves = {{Knob::J1, step2_curve(Knob::J1)},
                     {Knob::Delta1, step2_curve(Knob::Delta1)},
                     {Knob::InterJ, sin_ramp(g * I * pi)},
                     {Knob::InterDelta, sin_ramp(-g * I * pi)}};
    s.stages.push_back(couple);

    Stage transfer{"transfer", periods_per_step, Cadence::EveryPeriod, {}, {}, false};
    transfer.curves = {{Knob::J2, sin_ramp(I * pi)},
                       {Knob::Delta2, sin_ramp(-I * pi)},
                       {Knob::InterJ, cos_ramp(g * I * pi)},
                       {Knob::InterDelta, cos_ramp(-g * I * pi)}};
    s.stages.push_back(transfer);

    s.stages.push_back(make_stage3(periods_per_step, StepThreeProfile::cosine()));
    s.stages.push_back(make_stage1(periods_per_step));
    s.stages.push_back(make_stage2(periods_per_step));
    s.stages.push_back(make_stage3(periods_per_step, StepThreeProfile::cosine()));
    return s;
}

MultiwireReport multiwire_protocol(const std::vector<ChainSpec>& wires, int l, int periods_per_step,
                                   const MultiwireOptions& opt)
{
    if (wires.size() < 2) throw InvalidInput("multiwire: at least two wires are required");
    if (l < 0 || l + 1 >= static_cast<int>(wires.size())) throw InvalidInput("multiwire: wire index out of range");
    for (const auto& w : wires) {
        w.validate();
        if (w.n_sites < 4) throw InvalidInput("multiwire: every wire needs N >= 4");
        if (w.period != wires[0].period) throw InvalidInput("multiwire: wires must share the period T");
    }
    const StageSchedule schedule = multiwire_schedule(periods_per_step, opt.inter_wire_coupling);
    const double t = wires[0].period;
    const double tau = 0.5 * t;

    std::vector<int> offset(wires.size() + 1, 0);
    for (std::size_t w = 0; w < wires.size(); ++w) offset[w + 1] = offset[w] + wires[w].n_sites;
    const int n2 = 2 * offset.back();

    auto embed = [&](MajoranaCoupling& big, const MajoranaCoupling& small, int w) {
        big.a.block(2 * offset[w], 2 * offset[w], small.a.rows(), small.a.cols()) += small.a;
    };
    auto array_h1 = [&](const KnobValues& v) {
        MajoranaCoupling h{Matrix::Zero(n2, n2)};
        for (int w = 0; w < static_cast<int>(wires.size()); ++w)
            embed(h, build_h1_coupling(w == l ? apply_knobs(wires[w], v) : wires[w]), w);
        const Complex jc = v[static_cast<int>(Knob::InterJ)].value_or(0.0) / t;
        const Complex dc = v[static_cast<int>(Knob::InterDelta)].value_or(0.0) / t;
        add_bond(h, offset[l] + 1, offset[l + 1], jc, dc);
        return h;
    };

    MajoranaCoupling h2{Matrix::Zero(n2, n2)};
    for (int w = 0; w < static_cast<int>(wires.size()); ++w) embed(h2, build_h2_coupling(wires[w]), w);
    const Matrix e2 = expm_antisymmetric(h2.a, tau);

    const EdgePair pl =
        initial_edge_pair(one_period_propagator(apply_knobs(wires[l], schedule.initial_values())), opt.edge);
    const EdgePair pn = initial_edge_pair(one_period_propagator(wires[l + 1]), opt.edge);
    Matrix init = Matrix::Zero(n2, 4);
    init.block(2 * offset[l], 0, 2 * wires[l].n_sites, 1) = pl.left_a.c;
    init.block(2 * offset[l], 1, 2 * wires[l].n_sites, 1) = pl.left_b.c;
    init.block(2 * offset[l + 1], 2, 2 * wires[l + 1].n_sites, 1) = pn.left_a.c;
    init.block(2 * offset[l + 1], 3, 2 * wires[l + 1].n_sites, 1) = pn.left_b.c;

    Matrix x = init;
    for (int si = 0; si < static_cast<int>(schedule.stages.size()); ++si) {
        const Stage& st = schedule.stages[si];
        double last_s = -1.0;
        SparseMatrix a1;
        for (int p = 0; p < st.duration_periods; ++p) {
            const double s = st.progress(p);
            if (s != last_s) {
                a1 = array_h1(schedule.values_at(si, s)).a.sparseView();
                last_s = s;
            }
            apply_expm(a1, tau, x);
            x = e2 * x;
        }
    }

    MultiwireReport rep;
    rep.overlaps = init.transpose() * x;
    rep.total_periods = schedule.total_periods();
    const int nl = 2 * wires[l].n_sites, nn = 2 * wires[l + 1].n_sites;
    for (int j = 0; j < 2; ++j) {
        rep.max_cross_wire_weight =
            std::max(rep.max_cross_wire_weight, x.col(j).segment(2 * offset[l + 1], nn).squaredNorm());
        rep.max_cross_wire_weight =
            std::max(rep.max_cross_wire_weight, x.col(2 + j).segment(2 * offset[l], nl).squaredNorm());
    }
    return rep;
}

}  // namespace mtc
