#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mtc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct PreconditionFailure : std::runtime_error {
    PreconditionFailure(const std::string& what, std::string diag)
        : std::runtime_error(what), diagnostic(std::move(diag)) {}
    std::string diagnostic;
};

enum class Sublattice { A = 0, B = 1 };

// site is zero-based; A before B, site-major
inline int majorana_index(int site, Sublattice l) { return 2 * site + static_cast<int>(l); }

// Energies are absolute (1/time); use from_products for JT-style inputs.
// Offsets are static disorder added on top of the nominal values and are
// never touched by a schedule. Empty offset arrays mean zero.
struct ChainSpec {
    int n_sites = 2;
    double period = 1.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    std::vector<Complex> hopping;
    std::vector<Complex> pairing;
    std::vector<double> h2_hopping;

    std::vector<double> hopping_offset;
    std::vector<double> pairing_offset;
    std::vector<double> mu1_offset;
    std::vector<double> mu2_offset;

    void validate() const;

    Complex bond_hopping(int j) const;
    Complex bond_pairing(int j) const;
    double site_mu1(int j) const;
    double site_mu2(int j) const;

    static ChainSpec from_products(int n, double period, double mu1T, double mu2T, Complex JT,
                                   Complex DeltaT, double h2T = 0.0);
};

struct MajoranaCoupling {
    Matrix a;

    int size() const { return static_cast<int>(a.rows()); }
    // adds i*c*g_m*g_n to H
    void add_term(int m, int n, double c);
    double channel(int m, int n) const { return 0.5 * a(m, n); }
};

struct ModeVector {
    Vector c;
    std::string label;

    static ModeVector site(int n_sites, int site, Sublattice l, std::string label = {});
    double norm_defect() const { return std::abs(c.norm() - 1.0); }
};

struct OrthogonalPropagator {
    Matrix r;
    long elapsed_periods = 0;

    static OrthogonalPropagator identity(int dim);
    int size() const { return static_cast<int>(r.rows()); }
    ModeVector apply(const ModeVector& v) const;
    // this after first
    OrthogonalPropagator after(const OrthogonalPropagator& first) const;
    OrthogonalPropagator power(long n) const;
    double orthogonality_defect() const;
    double determinant() const { return r.determinant(); }
};

// Bond channels between site j (plays j) and site k (plays j+1).
void add_bond(MajoranaCoupling& h, int j, int k, Complex J, Complex Delta);
void add_onsite(MajoranaCoupling& h, int j, double mu);

MajoranaCoupling build_h1_coupling(const ChainSpec& spec);
MajoranaCoupling build_h2_coupling(const ChainSpec& spec);

OrthogonalPropagator half_period_rotation(const MajoranaCoupling& h, double duration);
OrthogonalPropagator one_period_propagator(const ChainSpec& spec);

struct BondRecovery {
    std::vector<Complex> hopping;
    std::vector<Complex> pairing;
    std::vector<double> mu;
};

// Inverse of build_h1_coupling on a chain layout.
BondRecovery recover_bdg(const MajoranaCoupling& h);

}  // namespace mtc
