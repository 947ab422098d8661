#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mtc/dynamics.hpp"

using namespace mtc;

namespace {

constexpr double pi = std::numbers::pi;

double total(const PowerSpectrum& p)
{
    double s = 0;
    for (double v : p.magnitude_sq) s += v;
    return s;
}

}  // namespace

TEST_CASE("special point: exact period doubling")
{
    const ZSeries z = stroboscopic_z(ChainSpec::from_products(50, 1.0, 0, pi, pi, pi), 200);
    REQUIRE(z.values.size() == 201);
    double worst = 0;
    for (std::size_t n = 0; n < z.values.size(); ++n)
        worst = std::max(worst, std::abs(z.values[n] - (n % 2 ? -1.0 : 1.0)));
    CHECK(worst < 1e-10);
    CHECK(z.max_norm_defect < 1e-10);
    const PowerSpectrum p = power_spectrum(z);
    CHECK(p.omega_t.size() == 200);
    CHECK(p.omega_t[p.argmax()] == pi);
    CHECK(p.peak_omega_over_pi() == 1.0);
}

TEST_CASE("trivial drives")
{
    for (double v : stroboscopic_z(ChainSpec::from_products(6, 1.0, 0, 0, 0, 0), 40).values) CHECK(v == 1.0);

    // J = Delta = 0, mu2 T = pi: each period is a quarter turn on site 1 squared
    const ZSeries z = stroboscopic_z(ChainSpec::from_products(6, 1.0, 0, pi, 0, 0), 40);
    for (std::size_t n = 0; n < z.values.size(); ++n) CHECK(std::abs(z.values[n] - (n % 2 ? -1.0 : 1.0)) < 1e-14);
    CHECK_THROWS_AS(stroboscopic_z(ChainSpec::from_products(6, 1.0, 0, pi, 0, 0), 0), InvalidInput);
}

TEST_CASE("power spectrum of closed-form series")
{
    std::vector<double> alt(256), one(256, 1.0);
    for (int n = 0; n < 256; ++n) alt[n] = n % 2 ? -1.0 : 1.0;
    const PowerSpectrum a = power_spectrum(alt);
    CHECK(a.omega_t[a.argmax()] == pi);
    CHECK(a.magnitude_sq[a.argmax()] == doctest::Approx(256.0 * 256.0));
    CHECK(a.magnitude_sq[a.argmax()] / total(a) > 1 - 1e-12);

    const PowerSpectrum c = power_spectrum(one);
    CHECK(c.argmax() == 0);
    CHECK(c.magnitude_sq[0] / total(c) > 1 - 1e-12);
    for (double v : c.magnitude_sq) CHECK(v >= 0.0);

    CHECK_THROWS_AS(power_spectrum(std::vector<double>(15, 1.0)), InvalidInput);
}

TEST_CASE("generic drive: subharmonic peak and finite-size beating")
{
    // "DeltaT = 1.5 JT = 4.2" read as JT = 2.8, DeltaT = 4.2
    const ZSeries small = stroboscopic_z(ChainSpec::from_products(50, 1.0, 0.1, 3.0, 2.8, 4.2), 200);
    const ZSeries large = stroboscopic_z(ChainSpec::from_products(200, 1.0, 0.1, 3.0, 2.8, 4.2), 200);
    CHECK(power_spectrum(small).peak_omega_over_pi() == 1.0);
    CHECK(power_spectrum(large).peak_omega_over_pi() == 1.0);
    CHECK(envelope_std(large) < envelope_std(small));
    CHECK(envelope_std(small) > 1e-3);
    for (double v : small.values) CHECK(std::abs(v) <= 1.0 + 1e-12);
    CHECK(small.max_norm_defect < 1e-10);
    CHECK(large.max_norm_defect < 1e-10);
}

TEST_CASE("rigidity of the subharmonic peak against mu2 detuning")
{
    for (double d : {-0.3, -0.2, -0.1, 0.1, 0.2, 0.3}) {
        const ZSeries z = stroboscopic_z(ChainSpec::from_products(50, 1.0, 0, pi + d, pi, pi), 200);
        CHECK(power_spectrum(z).peak_omega_over_pi() == 1.0);
    }
}
