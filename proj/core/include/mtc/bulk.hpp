#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "mtc/spectrum.hpp"

namespace mtc {

// Momentum-space parameters in the T = 2 units of the closed forms.
struct BulkParams {
    double mu1 = 0, mu2 = 0, J = 0, Delta = 0;

    // Main-text products -> closed-form units. The half-period phases give
    // mu_B = mu T / 2; the nearest-neighbour Fourier factor 2 cancels the 1/2
    // for J and Delta.
    static BulkParams from_products(double mu1T, double mu2T, double JT, double DeltaT);
};

struct BulkBandPoint {
    double k = 0;
    double theta = 0;
    double h = 0;
    std::optional<Eigen::Vector3d> m_hat;
};

BulkBandPoint bulk_angle(double k, const BulkParams& p);

// exp(-i h2) exp(-i h1) with h1 = (mu1 - J cos k) tz + Delta sin k ty, h2 = mu2 tz
Eigen::Matrix2cd direct_floquet(double k, const BulkParams& p);

// cos(theta) - i sin(theta) m.tau
Eigen::Matrix2cd floquet_from_band(const BulkBandPoint& b);

// theta m.tau; at sin(theta) = 0 the axis falls back to z
Eigen::Matrix2cd floquet_hamiltonian(const BulkBandPoint& b);

double phs_residual(double k, const BulkParams& p);

struct BulkGaps {
    double zero_gap = 0;
    double pi_gap = 0;
    double theta_min = 0, theta_max = 0;
};

BulkGaps bulk_gaps(const BulkParams& p, int k_points = 201);

struct ConsistencyReport {
    bool zero_flag = false, pi_flag = false;
    BulkGaps gaps;
    bool flat_band = false;
    int mismatches = 0;
    std::string note;
};

ConsistencyReport open_vs_bulk_consistency(double mu1T, double mu2T, double JT, double DeltaT, int n_sites = 60,
                                           const EdgeModeOptions& opt = {}, double gap_tol = 1e-6);

}  // namespace mtc
