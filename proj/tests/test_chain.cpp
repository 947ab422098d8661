#include <doctest.h>

#include <numbers>

#include "mtc/chain.hpp"
#include "mtc/rng.hpp"

using namespace mtc;

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0, 1);

// Symbolic expansion: an operator linear in Majoranas is a complex coefficient
// vector; c_j = (g_2j - i g_2j+1)/2. Products are collected into K_mn g_m g_n
// (m < n), constants dropped.
struct Bilinear {
    Eigen::MatrixXcd k;
    explicit Bilinear(int m) : k(Eigen::MatrixXcd::Zero(m, m)) {}

    void add(Complex c, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b)
    {
        for (int m = 0; m < a.size(); ++m)
            for (int n = m + 1; n < a.size(); ++n) k(m, n) += c * (a(m) * b(n) - a(n) * b(m));
    }

    // H = (i/4) sum A_mn g_m g_n  =>  A_mn = -2i K_mn for m < n
    Matrix coupling(double* imag_residue) const
    {
        const long m = k.rows();
        Matrix a = Matrix::Zero(m, m);
        double worst = 0;
        for (long i = 0; i < m; ++i)
            for (long j = i + 1; j < m; ++j) {
                const Complex v = -2.0 * I * k(i, j);
                worst = std::max(worst, std::abs(v.imag()));
                a(i, j) = v.real();
                a(j, i) = -v.real();
            }
        *imag_residue = worst;
        return a;
    }
};

Eigen::VectorXcd annihilate(int n, int j)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
    v(2 * j) = 0.5;
    v(2 * j + 1) = -0.5 * I;
    return v;
}

Eigen::VectorXcd create(int n, int j) { return annihilate(n, j).conjugate(); }

// H1 = sum mu1 n_j + sum [-J c+_{j+1} c_j + Delta c+_{j+1} c+_j + h.c.]
Matrix oracle_h1(const ChainSpec& s, double* imag_residue)
{
    const int n = s.n_sites;
    Bilinear b(2 * n);
    for (int j = 0; j < n; ++j) b.add(s.site_mu1(j), create(n, j), annihilate(n, j));
    for (int j = 0; j + 1 < n; ++j) {
        const Complex J = s.bond_hopping(j), D = s.bond_pairing(j);
        b.add(-J, create(n, j + 1), annihilate(n, j));
        b.add(-std::conj(J), create(n, j), annihilate(n, j + 1));
        b.add(D, create(n, j + 1), create(n, j));
        b.add(std::conj(D), annihilate(n, j), annihilate(n, j + 1));
    }
    return b.coupling(imag_residue);
}

ChainSpec random_spec(int n, std::uint64_t seed, bool complex_bonds)
{
    SplitMix64 rng(SplitMix64::stream(seed, fnv1a("test-chain"), n));
    ChainSpec s;
    s.n_sites = n;
    s.period = 0.5 + rng.uniform01();
    s.mu1 = rng.symmetric(3.0);
    s.mu2 = rng.symmetric(3.0);
    for (int j = 0; j + 1 < n; ++j) {
        s.hopping.emplace_back(rng.symmetric(3.0), complex_bonds ? rng.symmetric(3.0) : 0.0);
        s.pairing.emplace_back(rng.symmetric(3.0), complex_bonds ? rng.symmetric(3.0) : 0.0);
    }
    return s;
}

}  // namespace

TEST_CASE("h1 coupling matches the symbolic fermion expansion")
{
    for (int n : {2, 3, 5})
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const ChainSpec s = random_spec(n, seed, true);
            double residue = 1;
            const Matrix expected = oracle_h1(s, &residue);
            CHECK(residue < 1e-14);
            CHECK((build_h1_coupling(s).a - expected).cwiseAbs().maxCoeff() < 1e-13);
        }
}

TEST_CASE("N=3 purely imaginary bond populates only the AA and BB channels")
{
    ChainSpec s;
    s.n_sites = 3;
    s.hopping = {0.0, I * pi / 2.0};
    s.pairing = {0.0, -I * pi / 2.0};
    const MajoranaCoupling h = build_h1_coupling(s);
    double residue = 1;
    const Matrix expected = oracle_h1(s, &residue);
    CHECK((h.a - expected).cwiseAbs().maxCoeff() < 1e-15);

    const int a2 = majorana_index(1, Sublattice::A), b2 = majorana_index(1, Sublattice::B);
    const int a3 = majorana_index(2, Sublattice::A), b3 = majorana_index(2, Sublattice::B);
    // J = -Delta: the BB weight (Im J + Im Delta)/2 cancels, AA carries Im J
    CHECK(std::abs(h.channel(a2, a3)) == doctest::Approx(pi / 2));
    CHECK(h.channel(b2, b3) == 0.0);
    for (int m = 0; m < 6; ++m)
        for (int k = 0; k < 6; ++k) {
            const bool allowed = (m == a2 && k == a3) || (m == a3 && k == a2) || (m == b2 && k == b3) ||
                                 (m == b3 && k == b2);
            if (!allowed) CHECK(h.a(m, k) == 0.0);
        }

    // J = +Delta flips the roles
    s.pairing = {0.0, I * pi / 2.0};
    const MajoranaCoupling g = build_h1_coupling(s);
    CHECK(g.channel(a2, a3) == 0.0);
    CHECK(std::abs(g.channel(b2, b3)) == doctest::Approx(pi / 2));
    CHECK((g.a - oracle_h1(s, &residue)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("N=2 special bond has only the B1 A2 channel")
{
    const ChainSpec s = ChainSpec::from_products(2, 1.0, 0.0, 0.0, pi, pi);
    const MajoranaCoupling h = build_h1_coupling(s);
    const int b1 = majorana_index(0, Sublattice::B), a2 = majorana_index(1, Sublattice::A);
    CHECK(std::abs(h.channel(b1, a2)) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(h.channel(majorana_index(0, Sublattice::A), majorana_index(1, Sublattice::B)) == 0.0);
    int nonzero = 0;
    for (int m = 0; m < 4; ++m)
        for (int k = m + 1; k < 4; ++k) nonzero += h.a(m, k) != 0.0;
    CHECK(nonzero == 1);
}

TEST_CASE("couplings are exactly antisymmetric and vanish for a zero spec")
{
    const ChainSpec s = random_spec(6, 11, true);
    const Matrix a = build_h1_coupling(s).a;
    CHECK((a + a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Matrix a2 = build_h2_coupling(s).a;
    CHECK((a2 + a2.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const ChainSpec zero = ChainSpec::from_products(4, 1.0, 0, 0, 0, 0);
    CHECK(build_h1_coupling(zero).a.isZero(0));
    CHECK(build_h2_coupling(zero).a.isZero(0));
}

TEST_CASE("h2 coupling")
{
    SUBCASE("single site mu2 T = pi")
    {
        ChainSpec s;
        s.n_sites = 1;
        s.period = 2.0;
        s.mu2 = pi / s.period;
        const MajoranaCoupling h = build_h2_coupling(s);
        REQUIRE(h.size() == 2);
        CHECK(std::abs(h.channel(0, 1)) == doctest::Approx(pi / (2 * s.period)));
        CHECK(h.a(0, 0) == 0.0);
        CHECK(h.a(1, 1) == 0.0);
    }
    SUBCASE("h2 hopping equals an h1 bond with J = hopping, Delta = 0")
    {
        const ChainSpec s = ChainSpec::from_products(3, 1.0, 0, 0, 0, 0, 0.025);
        const ChainSpec ref = ChainSpec::from_products(3, 1.0, 0, 0, 0.025, 0.0);
        CHECK((build_h2_coupling(s).a - build_h1_coupling(ref).a).cwiseAbs().maxCoeff() < 1e-17);
    }
}

TEST_CASE("half-period rotations")
{
    SUBCASE("zero coupling gives the identity")
    {
        MajoranaCoupling h{Matrix::Zero(6, 6)};
        CHECK(half_period_rotation(h, 0.5).r.isIdentity(0));
    }
    SUBCASE("single site mu2 T = pi rotates A into B")
    {
        ChainSpec s;
        s.n_sites = 1;
        s.mu2 = pi;
        const OrthogonalPropagator r = half_period_rotation(build_h2_coupling(s), 0.5);
        const ModeVector out = r.apply(ModeVector::site(1, 0, Sublattice::A));
        CHECK(std::abs(out.c(0)) < 1e-15);
        CHECK(std::abs(std::abs(out.c(1)) - 1.0) < 1e-15);
    }
    SUBCASE("N=2 bond: quarter turn at JT = pi/2, half turn at JT = pi")
    {
        const ModeVector b1 = ModeVector::site(2, 0, Sublattice::B);
        const int a2 = majorana_index(1, Sublattice::A);
        const ChainSpec q = ChainSpec::from_products(2, 1.0, 0, 0, pi / 2, pi / 2);
        const ModeVector out = half_period_rotation(build_h1_coupling(q), 0.5).apply(b1);
        CHECK(std::abs(std::abs(out.c(a2)) - 1.0) < 1e-14);

        const ChainSpec s = ChainSpec::from_products(2, 1.0, 0, 0, pi, pi);
        const ModeVector back = half_period_rotation(build_h1_coupling(s), 0.5).apply(b1);
        CHECK(back.c(1) == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(std::abs(back.c(a2)) < 1e-14);
        // A1 is unpaired at J = Delta
        const ModeVector a1 = ModeVector::site(2, 0, Sublattice::A);
        CHECK((half_period_rotation(build_h1_coupling(s), 0.5).apply(a1).c - a1.c).norm() < 1e-14);
    }
    SUBCASE("errors")
    {
        MajoranaCoupling h{Matrix::Zero(2, 2)};
        CHECK_THROWS_AS(half_period_rotation(h, 0.0), InvalidInput);
        h.a(0, 1) = 1.0;
        CHECK_THROWS_AS(half_period_rotation(h, 0.5), ContractViolation);
    }
}

TEST_CASE("one-period propagator")
{
    CHECK(one_period_propagator(ChainSpec::from_products(5, 1.0, 0, 0, 0, 0)).r.isIdentity(1e-15));

    const ChainSpec sp = ChainSpec::from_products(50, 1.0, 0, pi, pi, pi);
    const OrthogonalPropagator r = one_period_propagator(sp);
    const ModeVector a1 = ModeVector::site(50, 0, Sublattice::A);
    const ModeVector b1 = ModeVector::site(50, 0, Sublattice::B);
    CHECK(std::abs(std::abs(r.apply(a1).c.dot(b1.c)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(r.apply(r.apply(a1)).c.dot(a1.c)) - 1.0) < 1e-12);
    CHECK(r.orthogonality_defect() < 1e-12);
    CHECK(std::abs(r.determinant() - 1.0) < 1e-9);
}

TEST_CASE("orthogonality and norm survive 10^4 periods")
{
    const ChainSpec s = random_spec(8, 3, true);
    const OrthogonalPropagator r = one_period_propagator(s);
    const OrthogonalPropagator big = r.power(10000);
    CHECK(big.elapsed_periods == 10000);
    CHECK(big.orthogonality_defect() < 1e-12);
    CHECK(std::abs(big.determinant() - 1.0) < 1e-9);

    ModeVector v{Vector::Ones(16).normalized(), "v"};
    for (int k = 0; k < 10000; ++k) v = r.apply(v);
    CHECK(v.norm_defect() < 1e-10);
}

TEST_CASE("complex BdG parameters are recovered from the coupling")
{
    const ChainSpec s = random_spec(7, 5, true);
    const BondRecovery back = recover_bdg(build_h1_coupling(s));
    REQUIRE(back.hopping.size() == 6);
    for (int j = 0; j < 6; ++j) {
        CHECK(std::abs(back.hopping[j] - s.bond_hopping(j)) < 1e-12);
        CHECK(std::abs(back.pairing[j] - s.bond_pairing(j)) < 1e-12);
    }
    for (int j = 0; j < 7; ++j) CHECK(std::abs(back.mu[j] - s.site_mu1(j)) < 1e-12);
}

TEST_CASE("spec validation")
{
    ChainSpec s = ChainSpec::from_products(4, 1.0, 0, 0, 1, 1);
    CHECK_NOTHROW(s.validate());
    s.hopping.pop_back();
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    CHECK_THROWS_AS(build_h1_coupling(s), InvalidInput);
    ChainSpec t = ChainSpec::from_products(4, 1.0, 0, 0, 1, 1);
    t.period = 0.0;
    CHECK_THROWS_AS(t.validate(), InvalidInput);
    ChainSpec u = ChainSpec::from_products(4, 1.0, 0, 0, 1, 1);
    u.h2_hopping = {0.1};
    CHECK_THROWS_AS(u.validate(), InvalidInput);
}
