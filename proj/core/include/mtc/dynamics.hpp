#pragma once

#include <vector>

#include "mtc/chain.hpp"

namespace mtc {

struct ZSeries {
    std::vector<double> values;  // Z(nT), n = 0..n_max
    ChainSpec spec;
    int n_max = 0;
    double max_norm_defect = 0.0;
};

struct PowerSpectrum {
    std::vector<double> omega_t;  // omega * T on [0, 2pi)
    std::vector<double> magnitude_sq;

    std::size_t argmax() const;
    double peak_omega_over_pi() const;
};

ZSeries stroboscopic_z(const ChainSpec& spec, int n_max);

// Plain DFT of the samples on the grid 2*pi*k/len.
PowerSpectrum power_spectrum(const std::vector<double>& z);
// Uses the n_max samples n = 0..n_max-1, grid 2*pi*k/n_max.
PowerSpectrum power_spectrum(const ZSeries& s);

// Standard deviation of |Z(nT)| over the whole series.
double envelope_std(const ZSeries& s);

}  // namespace mtc
