#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mtc/braiding.hpp"
#include "mtc/ed.hpp"

using namespace mtc;

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0, 1);

ChainSpec special(int n) { return ChainSpec::from_products(n, 1.0, 0, pi, pi, pi); }

int ia(int site) { return majorana_index(site, Sublattice::A); }
int ib(int site) { return majorana_index(site, Sublattice::B); }

ProtocolOptions quick()
{
    ProtocolOptions o;
    o.record_every = 50;
    o.instantaneous_leakage = false;
    return o;
}

}  // namespace

TEST_CASE("fidelity normalization")
{
    const FidelityReport ideal = normalized_fidelity(pi / 2);
    CHECK(ideal.overlap == doctest::Approx(1.0));
    CHECK(ideal.normalized_fidelity == doctest::Approx(1.0));
    const FidelityReport none = normalized_fidelity(0.0);
    CHECK(none.overlap == doctest::Approx(1 / std::numbers::sqrt2));
    CHECK(std::abs(none.normalized_fidelity) < 1e-12);
    for (double t : {0.3, 1.0, 1.4})
        CHECK(rotation_angle((Eigen::Matrix2d() << std::cos(t), -std::sin(t), std::sin(t), std::cos(t)).finished()) ==
              doctest::Approx(t));
}

TEST_CASE("clean braid at the special point")
{
    ProtocolOptions o;
    o.record_every = 100;
    const ProtocolResult r = run_protocol(canonical_schedule(special(100), 200), special(100), o);
    const CorrelationRecord& f = r.records.back();
    CHECK(f.period == 1200);
    // diagonals follow the residual angle of the step-3 path
    const double miss = pi / 2 - r.report.theta;
    CHECK(miss > 0);
    CHECK(f.aa == doctest::Approx(std::sin(miss)).epsilon(0.05));
    CHECK(f.bb == doctest::Approx(std::sin(miss)).epsilon(0.05));
    CHECK(std::abs(f.aa) < 2e-2);
    CHECK(std::abs(f.ab - 1) < 1e-2);
    CHECK(std::abs(f.ba + 1) < 1e-2);
    CHECK(r.max_leakage < 1e-3);
    CHECK_FALSE(r.leakage_flag);
    REQUIRE(r.stage_end_theta.size() == 6);
    CHECK(r.stage_end_theta[2] == doctest::Approx(pi / 4).epsilon(0.02));
    CHECK(r.stage_end_theta[5] == doctest::Approx(2 * r.stage_end_theta[2]).epsilon(0.02));
    CHECK(r.report.normalized_fidelity > 0.99);
    CHECK(r.max_pair_defect < 1e-10);
    // symmetric under A <-> B with R -> L at the special point
    CHECK(std::abs(f.ab + f.ba) < 1e-3);
}

TEST_CASE("step 3 residual angle is adiabatic, not discretization")
{
    const ChainSpec b = special(20);
    std::vector<double> miss;
    for (int p : {200, 400, 800})
        miss.push_back(pi / 2 - run_protocol(canonical_schedule(b, p), b, quick()).report.theta);
    // converges to a finite value
    CHECK(std::abs(miss[2] - miss[1]) < 0.5 * std::abs(miss[1] - miss[0]));
    CHECK(miss[2] > 0.01);
    CHECK(miss[2] < 0.015);
}

TEST_CASE("step 1 moves gamma_1 to the third site")
{
    const StageSchedule s = canonical_schedule(special(20), 200).prefix(1);
    const ProtocolResult r = run_protocol(s, special(20), quick());
    CHECK(-r.left_a.c(ia(2)) > 0.99);
    CHECK(-r.left_b.c(ib(2)) > 0.99);
    CHECK(std::abs(r.init_left_a.c(ia(0))) > 1 - 1e-10);
}

TEST_CASE("empty and trivial protocols")
{
    const ProtocolResult r = run_protocol(canonical_schedule(special(20), 10).prefix(0), special(20), quick());
    CHECK(std::abs(r.report.theta) < 1e-12);
    CHECK_THROWS_AS(run_protocol(canonical_schedule(special(20), 10), ChainSpec::from_products(20, 1, 0, 1.0, 0.2, 0.2), quick()),
                    PreconditionFailure);
}

TEST_CASE("instantaneous eigenmodes along steps 1 and 2")
{
    const int n = 20;
    for (int j = 0; j < 5; ++j) {
        const double phi = j * pi / 8;
        ChainSpec s = special(n);
        s.hopping[0] = pi * (1 + std::sin(phi));
        s.pairing[0] = pi * (1 - std::sin(phi));
        s.hopping[1] = s.pairing[1] = pi * std::cos(phi);
        const Matrix rr = one_period_propagator(s).r;
        Vector a = Vector::Zero(2 * n), b = Vector::Zero(2 * n);
        a(ia(0)) = std::cos(phi);
        a(ia(2)) = -std::sin(phi);
        b(ib(0)) = std::cos(phi);
        b(ib(2)) = -std::sin(phi);
        const Vector zero = (a + b) / std::numbers::sqrt2, pim = (a - b) / std::numbers::sqrt2;
        CHECK((rr * zero - zero).norm() < 1e-10);
        CHECK((rr * pim + pim).norm() < 1e-10);
    }
    for (int j = 0; j < 5; ++j) {
        const double phi = j * pi / 8;
        ChainSpec s = special(n);
        s.hopping[0] = pi * (1 + std::cos(phi));
        s.pairing[0] = pi * (std::cos(phi) - 1);
        s.hopping[1] = I * pi * std::sin(phi);
        s.pairing[1] = -I * pi * std::sin(phi);
        const Matrix rr = one_period_propagator(s).r;
        Vector a = Vector::Zero(2 * n), b = Vector::Zero(2 * n);
        a(ia(2)) = -std::cos(phi);
        a(ib(0)) = std::sin(phi);
        b(ib(2)) = std::cos(phi);
        b(ia(0)) = std::sin(phi);
        const Vector zero = (a - b) / std::numbers::sqrt2, pim = (a + b) / std::numbers::sqrt2;
        CHECK((rr * zero - zero).norm() < 1e-10);
        CHECK((rr * pim + pim).norm() < 1e-10);
    }
}

TEST_CASE("generic braid")
{
    const ChainSpec base = ChainSpec::from_products(100, 1.0, 0.3, 3.0, 3.3, 2.9);
    ProtocolOptions o = quick();
    o.record_every = 200;
    const ProtocolResult r = run_protocol(canonical_schedule(base, 200), base, o);
    const CorrelationRecord& f = r.records.back();
    CHECK(std::abs(f.aa) < 5e-2);
    CHECK(std::abs(f.bb) < 5e-2);
    CHECK(std::abs(f.ab - 1) < 5e-2);
    CHECK(std::abs(f.ba + 1) < 5e-2);
}

TEST_CASE("Gaussian state overlap agrees with exact diagonalization")
{
    for (double mu1 : {0.0, 0.3}) {
        const ChainSpec base = ChainSpec::from_products(5, 1.0, mu1, pi, pi, pi);
        const StageSchedule s = canonical_schedule(base, 60);
        ProtocolOptions o = quick();
        o.state_overlap = true;
        const ProtocolResult r = run_protocol(s, base, o);
        REQUIRE(r.state.has_value());
        const MagicStateResult ed = magic_state_check(base, s);
        CHECK(r.state->overlap == doctest::Approx(ed.full_braid).epsilon(1e-9));
    }
    // identical states overlap 1; swapping a pair's sign flips parity and gives 0
    const Matrix q = Eigen::HouseholderQR<Matrix>(Matrix::Random(8, 8)).householderQ();
    CHECK(gaussian_overlap(q, q) == doctest::Approx(1.0));
    Matrix p = q;
    p.col(0).swap(p.col(1));
    CHECK(gaussian_overlap(q, p) < 1e-7);
    CHECK(gaussian_overlap(q, ideal_rotated_pairs(q, 0.0)) == doctest::Approx(1.0));
    CHECK(gaussian_overlap(q, ideal_rotated_pairs(q, pi / 2)) == doctest::Approx(1 / std::numbers::sqrt2));
}

TEST_CASE("robustness to small smooth deformations of step 3")
{
    const ChainSpec base = ChainSpec::from_products(40, 1.0, 0.3, 3.0, 3.3, 2.9);
    const StageSchedule clean = canonical_schedule(base, 200);
    for (unsigned seed = 0; seed < 10; ++seed) {
        std::mt19937_64 g(seed);
        std::uniform_real_distribution<double> u(-0.05 * pi, 0.05 * pi);
        StageSchedule s = clean;
        for (auto t : {DeformationTarget::DeltaDelta1, DeformationTarget::DeltaJ2, DeformationTarget::DeltaDelta2}) {
            const Complex a(u(g), u(g)), b(u(g), u(g));
            const Complex k = t == DeformationTarget::DeltaDelta1 ? Complex(a.real(), 0) : a;
            s = apply_deformation(s, t, [=](double x) { return k * std::sin(pi * x) + b.real() * std::sin(2 * pi * x); });
        }
        const ProtocolResult r = run_protocol(s, base, quick());
        CHECK(r.report.normalized_fidelity > 0.98);
    }
}

TEST_CASE("disorder")
{
    const ChainSpec base = ChainSpec::from_products(30, 1.0, 0.3, 3.0, 3.3, 2.9);
    DisorderSpec d;
    d.realizations = 4;
    d.master_seed = 7;

    DisorderSpec zero = d;
    zero.d_hopping = zero.d_pairing = zero.d_mu1 = zero.d_mu2 = zero.h2_mean = zero.d_h2 = 0;
    const ChainSpec same = apply_disorder(base, zero, 3);
    for (int j = 0; j < 29; ++j) {
        CHECK(same.bond_hopping(j) == base.bond_hopping(j));
        CHECK(same.bond_pairing(j) == base.bond_pairing(j));
    }
    for (int j = 0; j < 30; ++j) CHECK(same.site_mu2(j) == base.site_mu2(j));

    const ChainSpec x = apply_disorder(base, d, 2), y = apply_disorder(base, d, 2), z = apply_disorder(base, d, 3);
    CHECK(x.hopping_offset == y.hopping_offset);
    CHECK(x.mu2_offset == y.mu2_offset);
    CHECK(x.hopping_offset != z.hopping_offset);
    for (double v : x.hopping_offset) CHECK(std::abs(v) <= 0.1 + 1e-15);
    for (double v : x.h2_hopping) CHECK(std::abs(v - 0.025) <= 0.01 + 1e-15);

    DisorderSpec bad = d;
    bad.d_mu1 = -0.1;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);

    const StageSchedule s = canonical_schedule(base, 60);
    const EnsembleResult one = disorder_ensemble(s, base, d, quick(), 1);
    const EnsembleResult four = disorder_ensemble(s, base, d, quick(), 4);
    REQUIRE(one.runs.size() == 4);
    CHECK(one.mean_ab == four.mean_ab);
    CHECK(one.mean_ba == four.mean_ba);
    CHECK(one.mean_aa == four.mean_aa);
    for (std::size_t i = 0; i < 4; ++i) CHECK(one.runs[i].records.back().ab == four.runs[i].records.back().ab);
}

TEST_CASE("two-wire protocol")
{
    const std::vector<ChainSpec> wires{special(40), special(40)};
    const MultiwireReport r = multiwire_protocol(wires, 0, 200);
    CHECK(r.a_next_to_minus_b() > 0.99);
    CHECK(r.b_next_to_a() > 0.99);
    CHECK(r.a_to_a_next() > 0.99);
    CHECK(r.b_to_b_next() > 0.99);

    MultiwireOptions off;
    off.inter_wire_coupling = false;
    CHECK(multiwire_protocol(wires, 0, 50, off).max_cross_wire_weight < 1e-8);
    CHECK_THROWS_AS(multiwire_protocol({special(40)}, 0, 50), InvalidInput);
    CHECK_THROWS_AS(multiwire_protocol(wires, 1, 50), InvalidInput);
}
