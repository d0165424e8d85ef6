// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/em_core.hpp"

#include <cmath>

namespace oamcapa {

WaveContext WaveContext::at_frequency(double frequency_hz)
{
    if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0)
        throw std::invalid_argument("frequency must be finite and positive, got " +
                                    std::to_string(frequency_hz));
    const double lambda = kSpeedOfLight / frequency_hz;
    const double k0 = 2.0 * kPi / lambda;
    const double z0 = std::sqrt(kVacuumPermeability / kVacuumPermittivity);
    return WaveContext(frequency_hz, lambda, k0, z0);
}

cdouble scalar_green(const WaveContext& ctx, const RealVec3& p)
{
    const double dist = p.norm();
    if (!(dist > 0.0))
        throw SingularityError("scalar_green: source and observation points coincide");
    return std::polar(1.0 / (4.0 * kPi * dist), ctx.wavenumber() * dist);
}

Dyadic3 dyadic_green(const WaveContext& ctx, const RealVec3& r, const RealVec3& s)
{
    const RealVec3 p = r - s;
    const double dist = p.norm();
    if (!(dist > 0.0))
        throw SingularityError("dyadic_green: source and observation points coincide");

    const double k0 = ctx.wavenumber();
    const cdouble prefactor =
        cdouble(0.0, k0 * ctx.impedance()) * std::polar(1.0 / (4.0 * kPi * dist), k0 * dist);

    // u = lambda / (2 pi |p|) = 1 / (k0 |p|)
    const double u = 1.0 / (k0 * dist);
    const cdouble identity_coeff(1.0 - u * u, u);           // 1 + iu - u^2
    const cdouble outer_coeff(-1.0 + 3.0 * u * u, -3.0 * u); // -1 - 3iu + 3u^2

    const RealVec3 dir = p / dist;
    Dyadic3 g = (outer_coeff * (dir * dir.transpose()).cast<cdouble>());
    g.diagonal().array() += identity_coeff;
    return prefactor * g;
}

} // namespace oamcapa
