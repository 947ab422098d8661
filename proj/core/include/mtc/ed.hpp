#pragma once

#include <vector>

#include "mtc/chain.hpp"
#include "mtc/schedule.hpp"

namespace mtc {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int ed_max_sites = 8;

enum class Provenance { Fermion, Spin };

struct ManyBodyFloquet {
    int n_sites = 0;
    long dimension = 0;
    CMatrix unitary;
    std::vector<double> eigenphases;
    Provenance provenance = Provenance::Fermion;

    double unitarity_defect() const;
};

// Fock basis: bit j of the index is the occupation of site j; Jordan-Wigner signs.
std::vector<Matrix> annihilators(int n_sites);
// gamma_{2j} = c_j + c_j^dag, gamma_{2j+1} = i(c_j - c_j^dag)
std::vector<CMatrix> majorana_operators(int n_sites);

struct ManyBodyHamiltonians {
    CMatrix h1, h2;
};

ManyBodyHamiltonians many_body_hamiltonians(const ChainSpec& spec);

ManyBodyFloquet fermion_floquet(const ChainSpec& spec);
ManyBodyFloquet ising_floquet(double j_ising, double f, int n_sites, double period);

// R_kl = Tr(U^dag g_k U g_l) / 2^N
Matrix heisenberg_matrix(const ManyBodyFloquet& u);

double parity_commutator(const ManyBodyFloquet& u);

// All sums (1/2) sum_k s_k eps_k, s_k = +-1, from the 2N single-particle phases.
std::vector<double> sum_rule_phases(const std::vector<double>& single_particle);

// Multiset distance on the circle, minimized over a global phase offset.
double aligned_phase_distance(const std::vector<double>& a, const std::vector<double>& b);

struct SumRuleReport {
    double sum_rule_deviation = 0;
    double heisenberg_deviation = 0;
    double parity_commutator = 0;
    double unitarity_defect = 0;
};

SumRuleReport sum_rule_check(const ChainSpec& spec);

// Identification J = Delta = -J_ising, mu2 = 2 f, mu1 = 0.
double ising_equivalence_deviation(double j_ising, double f, int n_sites, double period);

struct MagicStateResult {
    // |<target|psi>| on the full many-body state
    double full_zero = 0, full_magic = 0, full_braid = 0;
    // sqrt((1 + r.r_t)/2) from logical Pauli expectations r
    double logical_zero = 0, logical_magic = 0, logical_braid = 0;
    Eigen::Vector3d bloch = Eigen::Vector3d::Zero();
    // |<0|s|0>| etc. with s the logical Paulis; checks the encoding
    double pauli_encoding_defect = 0;
    int periods = 0;
};

MagicStateResult magic_state_check(const ChainSpec& spec, const StageSchedule& schedule);

}  // namespace mtc
