// SPDX-License-Identifier: Apache-2.0
//
// Free-space constants, 3-vector / 3x3 dyadic types and the scalar and
// dyadic Green's functions of the Helmholtz equation.
//
// Conventions: SI units throughout, time dependence e^{-i w t} suppressed,
// outgoing waves carry e^{+i k0 |p|}.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oamcapa {

using cdouble = std::complex<double>;

using RealVec3 = Eigen::Vector3d;     // position or displacement [m]
using ComplexVec3 = Eigen::Vector3cd; // field [V/m] or current weight [A/m]
using Dyadic3 = Eigen::Matrix3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s, exact
inline constexpr double kVacuumPermeability = 1.25663706212e-6; // H/m
// Derived from mu0 and c so that mu0 * eps0 * c^2 == 1 holds to rounding.
inline constexpr double kVacuumPermittivity =
    1.0 / (kVacuumPermeability * kSpeedOfLight * kSpeedOfLight);

// Raised when source and observation points coincide.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Frequency-dependent quantities shared by every formula.
class WaveContext {
public:
    // Throws std::invalid_argument unless frequency_hz is finite and > 0.
    static WaveContext at_frequency(double frequency_hz);

    double frequency() const { return frequency_; }
    double wavelength() const { return wavelength_; }
    double wavenumber() const { return wavenumber_; }
    double angular_frequency() const { return 2.0 * kPi * frequency_; }
    // sqrt(mu0 / eps0), about 376.730 ohm.
    double impedance() const { return impedance_; }

private:
    WaveContext(double f, double lambda, double k, double z)
        : frequency_(f), wavelength_(lambda), wavenumber_(k), impedance_(z) {}

    double frequency_;
    double wavelength_;
    double wavenumber_;
    double impedance_;
};

// e^{i k0 |p|} / (4 pi |p|). Throws SingularityError when |p| == 0.
cdouble scalar_green(const WaveContext& ctx, const RealVec3& p);

/// Free-space dyadic Green's function G(r, s), p = r - s, including the
/// i k0 Z prefactor:
///
///   G = i k0 Z e^{i k0 |p|} / (4 pi |p|)
///       * [ (I - p^p^T) + i u (I - 3 p^p^T) - u^2 (I - 3 p^p^T) ],
///   u = lambda / (2 pi |p|).
///
/// The prefactor equals i w mu0, so E(r) = integral of G(r, s) J(s) ds with
/// no further factor. The result is complex symmetric.
Dyadic3 dyadic_green(const WaveContext& ctx, const RealVec3& r, const RealVec3& s);

// Pluggable dyadic kernel. Production code always passes dyadic_green; the
// verification suite swaps in perturbed kernels.
using DyadicKernel = Dyadic3 (*)(const WaveContext&, const RealVec3&, const RealVec3&);

} // namespace oamcapa
