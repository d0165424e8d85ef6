// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/em_core.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace oamcapa;

namespace {

// lambda = 1 m
const WaveContext unit_ctx = WaveContext::at_frequency(kSpeedOfLight);
const WaveContext ctx58 = WaveContext::at_frequency(5.8e9);

double rel(const Dyadic3& a, const Dyadic3& b) { return (a - b).norm() / b.norm(); }

} // namespace

TEST_CASE("wave context derived quantities")
{
    CHECK(unit_ctx.wavelength() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit_ctx.wavenumber() == doctest::Approx(2 * kPi).epsilon(1e-15));
    CHECK(ctx58.impedance() == doctest::Approx(376.730313668).epsilon(1e-10));
    const double kz = ctx58.wavenumber() * ctx58.impedance();
    const double wmu = ctx58.angular_frequency() * kVacuumPermeability;
    CHECK(std::abs(kz - wmu) / wmu < 1e-12);

    CHECK_THROWS_AS(WaveContext::at_frequency(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WaveContext::at_frequency(-1e9), std::invalid_argument);
    CHECK_THROWS_AS(WaveContext::at_frequency(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(WaveContext::at_frequency(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("scalar green function values")
{
    const cdouble one = scalar_green(unit_ctx, RealVec3(0, 0, 1));
    CHECK(one.real() == doctest::Approx(1 / (4 * kPi)).epsilon(1e-12));
    CHECK(std::abs(one.imag()) < 1e-15);

    const cdouble half = scalar_green(unit_ctx, RealVec3(0.5, 0, 0));
    CHECK(half.real() == doctest::Approx(-1 / (2 * kPi)).epsilon(1e-12));
    CHECK(std::abs(half.imag()) < 1e-15);

    const RealVec3 p(0.3, -1.7, 2.2);
    CHECK(scalar_green(ctx58, p) == scalar_green(ctx58, -p));

    CHECK_THROWS_AS(scalar_green(ctx58, RealVec3::Zero()), SingularityError);
}

TEST_CASE("dyadic green along the propagation axis")
{
    const double lam = unit_ctx.wavelength();
    const double k0 = unit_ctx.wavenumber();
    const double z0 = unit_ctx.impedance();
    for (double d : {0.2, 1.0, 3.7, 50.0}) {
        const cdouble pre =
            cdouble(0, k0 * z0) * std::exp(cdouble(0, k0 * d)) / (4 * kPi * d);
        const double u = lam / (2 * kPi * d);
        const Dyadic3 g = dyadic_green(unit_ctx, RealVec3(0, 0, d), RealVec3::Zero());
        const cdouble xx = pre * cdouble(1 - u * u, u);
        const cdouble zz = pre * cdouble(2 * u * u, -2 * u);
        CHECK(std::abs(g(0, 0) - xx) / std::abs(xx) < 1e-12);
        CHECK(std::abs(g(1, 1) - xx) / std::abs(xx) < 1e-12);
        CHECK(std::abs(g(2, 2) - zz) / std::abs(zz) < 1e-12);
        CHECK(std::abs(g(0, 1)) < 1e-12 * std::abs(xx));
        CHECK(std::abs(g(0, 2)) < 1e-12 * std::abs(xx));
    }
}

TEST_CASE("longitudinal to transverse ratio at 1000 wavelengths")
{
    const double d = 1000 * ctx58.wavelength();
    const Dyadic3 g = dyadic_green(ctx58, RealVec3(0, 0, d), RealVec3::Zero());
    const double ratio = std::abs(g(2, 2)) / std::abs(g(0, 0));
    const double expected = 2 * ctx58.wavelength() / (2 * kPi * d);
    CHECK(expected == doctest::Approx(3.18e-4).epsilon(1e-3));
    CHECK(std::abs(ratio / expected - 1) < 0.01);
}

TEST_CASE("dyadic green matches the Hessian form")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const RealVec3 r(coord(rng), coord(rng), coord(rng));
        const RealVec3 s(coord(rng), coord(rng), coord(rng));
        CHECK(rel(dyadic_green(ctx58, r, s), oracle::dyadic_green(5.8e9, r, s)) < 1e-12);
    }
}

TEST_CASE("reciprocity over random pairs")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coord(-5 * ctx58.wavelength(), 5 * ctx58.wavelength());
    for (int i = 0; i < 100; ++i) {
        const RealVec3 r(coord(rng), coord(rng), coord(rng));
        const RealVec3 s(coord(rng), coord(rng), coord(rng));
        const Dyadic3 g = dyadic_green(ctx58, r, s);
        CHECK(rel(dyadic_green(ctx58, s, r).transpose(), g) < 1e-12);
        CHECK(rel(g.transpose(), g) < 1e-12);
    }
}

TEST_CASE("far-field decay is 1/|p|")
{
    const RealVec3 dir = RealVec3(1, 2, 2).normalized();
    const double lam = ctx58.wavelength();
    const double a = dyadic_green(ctx58, dir * 1e3 * lam, RealVec3::Zero()).norm();
    const double b = dyadic_green(ctx58, dir * 2e3 * lam, RealVec3::Zero()).norm();
    CHECK(a / b == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("coincident points are singular")
{
    const RealVec3 p(0.1, 0.2, 0.3);
    CHECK_THROWS_AS(dyadic_green(ctx58, p, p), SingularityError);
}
