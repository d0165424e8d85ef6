// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oamcapa {

const char* to_string(Polarization pol)
{
    switch (pol) {
    case Polarization::Azimuthal:
        return "azimuthal";
    case Polarization::LinearX:
        return "linear_x";
    }
    return "unknown";
}

Polarization parse_polarization(const std::string& name)
{
    if (name == "azimuthal")
        return Polarization::Azimuthal;
    if (name == "linear_x")
        return Polarization::LinearX;
    throw std::invalid_argument("unknown polarization '" + name +
                                "' (expected azimuthal or linear_x)");
}

RingAperture::RingAperture(double radius, double axial_position, Polarization polarization,
                           int quadrature_points)
    : radius_(radius), axial_position_(axial_position), polarization_(polarization),
      quadrature_points_(quadrature_points)
{
    if (!std::isfinite(radius) || radius <= 0.0)
        throw std::invalid_argument("ring radius must be finite and positive");
    if (!std::isfinite(axial_position))
        throw std::invalid_argument("ring axial position must be finite");
    if (quadrature_points < kMinQuadrature)
        throw std::invalid_argument("ring quadrature needs at least " +
                                    std::to_string(kMinQuadrature) + " points, got " +
                                    std::to_string(quadrature_points));
}

RealVec3 RingAperture::point_at(double angle) const
{
    return {radius_ * std::cos(angle), radius_ * std::sin(angle), axial_position_};
}

RealVec3 RingAperture::direction_at(double angle) const
{
    if (polarization_ == Polarization::Azimuthal)
        return {-std::sin(angle), std::cos(angle), 0.0};
    return {1.0, 0.0, 0.0};
}

RingAperture RingAperture::with_quadrature(int quadrature_points) const
{
    return RingAperture(radius_, axial_position_, polarization_, quadrature_points);
}

OamModeSet::OamModeSet(std::vector<int> modes) : modes_(std::move(modes))
{
    if (modes_.empty())
        throw std::invalid_argument("OAM mode set must not be empty");
    std::set<int> seen(modes_.begin(), modes_.end());
    if (seen.size() != modes_.size())
        throw std::invalid_argument("OAM mode set contains duplicate indices");
}

OamModeSet OamModeSet::centered(int count)
{
    if (count < 1)
        throw std::invalid_argument("centered mode set needs at least one mode");
    std::vector<int> modes;
    modes.reserve(static_cast<std::size_t>(count));
    for (int l = -(count / 2); l < count - count / 2; ++l)
        modes.push_back(l);
    return OamModeSet(std::move(modes));
}

int OamModeSet::max_abs() const
{
    int m = 0;
    for (int l : modes_)
        m = std::max(m, std::abs(l));
    return m;
}

int OamModeSet::spread() const
{
    const auto [lo, hi] = std::minmax_element(modes_.begin(), modes_.end());
    return *hi - *lo;
}

int default_quadrature(const OamModeSet& modes)
{
    return std::max(256, 8 * modes.max_abs() + 64);
}

int resolving_quadrature(const WaveContext& ctx, double radius)
{
    return std::max(256, 2 * static_cast<int>(std::ceil(ctx.wavenumber() * radius)) + 64);
}

std::vector<RingSample> sample_points(const RingAperture& ap)
{
    const int q_count = ap.quadrature_points();
    const double weight = ap.circumference() / q_count;
    std::vector<RingSample> out;
    out.reserve(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        const double angle = 2.0 * kPi * q / q_count;
        out.push_back({angle, ap.point_at(angle), ap.direction_at(angle), weight});
    }
    return out;
}

BasisSample basis_eval(const RingAperture& ap, int mode, double angle)
{
    const double norm = 1.0 / std::sqrt(ap.circumference());
    return {ap.point_at(angle), ap.direction_at(angle), std::polar(norm, mode * angle)};
}

Eigen::MatrixXcd weighted_basis_matrix(const RingAperture& ap, const OamModeSet& modes)
{
    const auto nodes = sample_points(ap);
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(nodes.size()), modes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q)
        for (int n = 0; n < modes.size(); ++n)
            out(static_cast<Eigen::Index>(q), n) =
                nodes[q].weight * basis_eval(ap, modes[n], nodes[q].angle).phase_weight;
    return out;
}

GramResult gram_matrix(const RingAperture& ap, const OamModeSet& modes)
{
    const auto nodes = sample_points(ap);
    const int n_modes = modes.size();
    Eigen::MatrixXcd unweighted(static_cast<Eigen::Index>(nodes.size()), n_modes);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        weights(static_cast<Eigen::Index>(q)) = nodes[q].weight;
        for (int n = 0; n < n_modes; ++n)
            unweighted(static_cast<Eigen::Index>(q), n) =
                basis_eval(ap, modes[n], nodes[q].angle).phase_weight;
    }
    // Directions are unit vectors, so the vector inner product reduces to
    // the scalar phase product.
    Eigen::MatrixXcd gram = unweighted.adjoint() * weights.asDiagonal() * unweighted;
    const int q_count = ap.quadrature_points();
    return {std::move(gram), q_count, q_count <= modes.spread()};
}

std::vector<ComplexVec3> synthesize_current(const RingAperture& ap, const OamModeSet& modes,
                                            const Eigen::VectorXcd& coefficients)
{
    if (coefficients.size() != modes.size())
        throw std::invalid_argument("synthesize_current: " +
                                    std::to_string(coefficients.size()) +
                                    " coefficients for " + std::to_string(modes.size()) +
                                    " modes");
    const auto nodes = sample_points(ap);
    std::vector<ComplexVec3> out;
    out.reserve(nodes.size());
    for (const auto& node : nodes) {
        cdouble amplitude = 0.0;
        for (int n = 0; n < modes.size(); ++n)
            amplitude += coefficients(n) * basis_eval(ap, modes[n], node.angle).phase_weight;
        out.push_back(node.tangent.cast<cdouble>() * amplitude);
    }
    return out;
}

Eigen::VectorXcd project_coefficients(const RingAperture& ap, const OamModeSet& modes,
                                      std::span<const ComplexVec3> samples)
{
    const auto nodes = sample_points(ap);
    if (samples.size() != nodes.size())
        throw std::invalid_argument("project_coefficients: " + std::to_string(samples.size()) +
                                    " samples do not match the " +
                                    std::to_string(nodes.size()) + "-point ring grid");
    Eigen::VectorXcd scalar(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t q = 0; q < nodes.size(); ++q)
        scalar(static_cast<Eigen::Index>(q)) =
            nodes[q].tangent.cast<cdouble>().dot(samples[q]); // tangent is real
    return weighted_basis_matrix(ap, modes).adjoint() * scalar;
}

std::vector<ComplexVec3> radiate_field(const WaveContext& ctx, const RingAperture& tx,
                                       std::span<const ComplexVec3> current,
                                       std::span<const RealVec3> observation_points,
                                       DyadicKernel kernel)
{
    const auto nodes = sample_points(tx);
    if (current.size() != nodes.size())
        throw std::invalid_argument("radiate_field: current sample count " +
                                    std::to_string(current.size()) +
                                    " does not match the transmit grid");
    std::vector<ComplexVec3> out;
    out.reserve(observation_points.size());
    for (const auto& r : observation_points) {
        ComplexVec3 field = ComplexVec3::Zero();
        for (std::size_t q = 0; q < nodes.size(); ++q)
            field += nodes[q].weight * (kernel(ctx, r, nodes[q].position) * current[q]);
        out.push_back(field);
    }
    return out;
}

} // namespace oamcapa
