#include "mtc/dynamics.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mtc {

ZSeries stroboscopic_z(const ChainSpec& spec, int n_max)
{
    if (n_max < 1) throw InvalidInput("dtc.n_max: must be >= 1");
    const OrthogonalPropagator r = one_period_propagator(spec);
    ZSeries out;
    out.spec = spec;
    out.n_max = n_max;
    out.values.reserve(n_max + 1);
    Vector c = ModeVector::site(spec.n_sites, 0, Sublattice::A).c;
    Vector next(c.size());
    for (int n = 0; n <= n_max; ++n) {
        out.values.push_back(c(0) * c(0) - c(1) * c(1));
        out.max_norm_defect = std::max(out.max_norm_defect, std::abs(c.norm() - 1.0));
        next.noalias() = r.r * c;
        c.swap(next);
    }
    return out;
}

PowerSpectrum power_spectrum(const std::vector<double>& z)
{
    if (z.size() < 16) throw InvalidInput("power spectrum needs at least 16 samples");
    const std::size_t len = z.size();
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    std::vector<std::complex<double>> c;
    fft.fwd(c, z);
    PowerSpectrum out;
    out.omega_t.resize(len);
    out.magnitude_sq.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        // real input: upper half mirrors the lower
        const std::complex<double> v = k < c.size() ? c[k] : std::conj(c[len - k]);
        out.omega_t[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
        out.magnitude_sq[k] = std::norm(v);
    }
    return out;
}

PowerSpectrum power_spectrum(const ZSeries& s)
{
    return power_spectrum(std::vector<double>(s.values.begin(), s.values.begin() + s.n_max));
}

std::size_t PowerSpectrum::argmax() const
{
    return static_cast<std::size_t>(std::max_element(magnitude_sq.begin(), magnitude_sq.end()) -
                                    magnitude_sq.begin());
}

double PowerSpectrum::peak_omega_over_pi() const { return omega_t[argmax()] / std::numbers::pi; }

double envelope_std(const ZSeries& s)
{
    double mean = 0.0;
    for (double v : s.values) mean += std::abs(v);
    mean /= static_cast<double>(s.values.size());
    double var = 0.0;
    for (double v : s.values) var += (std::abs(v) - mean) * (std::abs(v) - mean);
    return std::sqrt(var / static_cast<double>(s.values.size()));
}

}  // namespace mtc
