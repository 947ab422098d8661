#pragma once

#include <string>
#include <vector>

#include "mtc/chain.hpp"

namespace mtc {

enum class Edge { Left, Right };
enum class EdgeFlag { None = 0, Zero = 1, Pi = 2 };

struct EdgeModeOptions {
    double phase_tol = 1e-2;
    double loc_threshold = 0.9;
    int edge_sites = 5;
};

struct EdgeMode {
    ModeVector mode;
    Edge edge = Edge::Left;
    double localization = 0.0;
    double residual = 0.0;
};

struct EdgeModeSet {
    std::vector<EdgeMode> zero_modes;
    std::vector<EdgeMode> pi_modes;

    const EdgeMode* zero(Edge e) const;
    const EdgeMode* pi(Edge e) const;
    bool has_both_edges() const;
};

std::vector<double> quasienergies(const OrthogonalPropagator& r);

EdgeModeSet find_edge_modes(const OrthogonalPropagator& r, const EdgeModeOptions& opt = {});

// Weight of v on the outermost sites of one edge.
double edge_weight(const Vector& v, Edge e, int edge_sites);

enum class SweepParameter { Mu2, JEqualsDelta, Mu1 };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

struct SpectrumTable {
    SweepParameter parameter = SweepParameter::Mu2;
    std::vector<double> parameter_grid;  // product units (value * T)
    std::vector<std::vector<double>> eigenphases;
    std::vector<std::vector<EdgeFlag>> flags;
};

ChainSpec with_sweep_value(const ChainSpec& base, SweepParameter p, double value_times_T);

std::vector<EdgeFlag> edge_flags(const std::vector<double>& phases, const EdgeModeSet& modes);

SpectrumTable spectrum_sweep(const ChainSpec& base, SweepParameter p, const std::vector<double>& grid,
                             const EdgeModeOptions& opt = {}, int threads = 1);

struct TwoPeriodSpectrum {
    std::vector<double> phases;
    int zero_count = 0;
    double zero_spread = 0.0;   // max |eps2| inside the zero cluster
    double bulk_gap = 0.0;      // min |eps2| outside the cluster
};

TwoPeriodSpectrum two_period_spectrum(const ChainSpec& first, const ChainSpec& second,
                                      double zero_tol = 1e-2);

// Largest deviation of the phase multiset from its own negation, mod 2pi.
double phase_pairing_defect(const std::vector<double>& phases);

// Wrap to (-pi, pi].
double wrap_phase(double x);

}  // namespace mtc
