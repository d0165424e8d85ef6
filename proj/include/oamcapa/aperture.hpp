// SPDX-License-Identifier: Apache-2.0
//
// Circular ring apertures, OAM Fourier basis functions and the quadrature
// operators that move between current/field samples and mode coefficients.
//
// Surface integrals over an aperture are arc-length line integrals over the
// ring, discretised with the composite trapezoid rule on a uniform angle grid.
// For the smooth periodic integrands involved this converges spectrally.

#pragma once

#include "oamcapa/em_core.hpp"

#include <span>
#include <vector>

namespace oamcapa {

enum class Polarization {
    Azimuthal, // tangent to the ring, (-sin a, cos a, 0)
    LinearX,   // fixed x direction
};

const char* to_string(Polarization pol);
// Accepts "azimuthal" or "linear_x". Throws std::invalid_argument otherwise.
Polarization parse_polarization(const std::string& name);

class RingAperture {
public:
    static constexpr int kMinQuadrature = 8;

    // Throws std::invalid_argument for radius <= 0, non-finite values or
    // quadrature_points < kMinQuadrature.
    RingAperture(double radius, double axial_position, Polarization polarization,
                 int quadrature_points);

    double radius() const { return radius_; }
    double axial_position() const { return axial_position_; }
    Polarization polarization() const { return polarization_; }
    int quadrature_points() const { return quadrature_points_; }

    double circumference() const { return 2.0 * kPi * radius_; }
    // Point at azimuth `angle` on the ring.
    RealVec3 point_at(double angle) const;
    // Unit current/field direction at azimuth `angle`.
    RealVec3 direction_at(double angle) const;

    RingAperture with_quadrature(int quadrature_points) const;

private:
    double radius_;
    double axial_position_;
    Polarization polarization_;
    int quadrature_points_;
};

// Ordered list of distinct integer OAM mode indices.
class OamModeSet {
public:
    explicit OamModeSet(std::vector<int> modes);

    // {-floor(n/2), ..., ceil(n/2) - 1}
    static OamModeSet centered(int count);

    const std::vector<int>& modes() const { return modes_; }
    int size() const { return static_cast<int>(modes_.size()); }
    int operator[](int i) const { return modes_[static_cast<std::size_t>(i)]; }
    int max_abs() const;
    // max - min; discrete orthogonality on Q nodes is exact when Q > spread.
    int spread() const;

    bool operator==(const OamModeSet&) const = default;

private:
    std::vector<int> modes_;
};

// max(256, 8 * max|l| + 64)
int default_quadrature(const OamModeSet& modes);

// Quadrature that resolves the Green kernel's azimuthal bandwidth on a ring
// of the given radius: max(256, 2 ceil(k0 R) + 64).
int resolving_quadrature(const WaveContext& ctx, double radius);

// One quadrature node.
struct RingSample {
    double angle;
    RealVec3 position;
    RealVec3 tangent; // unit direction per polarization
    double weight;    // arc length 2 pi R / Q
};

struct BasisSample {
    RealVec3 point;
    RealVec3 direction;
    cdouble phase_weight; // e^{i l angle} / sqrt(2 pi R)
};

std::vector<RingSample> sample_points(const RingAperture& ap);

BasisSample basis_eval(const RingAperture& ap, int mode, double angle);

struct GramResult {
    Eigen::MatrixXcd matrix;
    int quadrature_points;
    // Set when Q <= mode spread: discrete orthogonality no longer exact.
    bool degraded;
};

// entry (n, n') = sum_q w_q conj(phi_n(q)) phi_n'(q)
GramResult gram_matrix(const RingAperture& ap, const OamModeSet& modes);

// Q x N matrix whose column n holds w_q * e^{i l_n a_q} / sqrt(2 pi R).
// Multiplying its adjoint with scalar samples projects onto the basis.
Eigen::MatrixXcd weighted_basis_matrix(const RingAperture& ap, const OamModeSet& modes);

// Current at each node: direction * sum_n xi_n e^{i l_n a} / sqrt(2 pi R).
std::vector<ComplexVec3> synthesize_current(const RingAperture& ap, const OamModeSet& modes,
                                            const Eigen::VectorXcd& coefficients);

// alpha_n = sum_q w_q conj(phi_n(q)) . samples[q]. Throws std::invalid_argument
// when samples.size() != Q.
Eigen::VectorXcd project_coefficients(const RingAperture& ap, const OamModeSet& modes,
                                      std::span<const ComplexVec3> samples);

// E(r) = sum_q w_q G(r, s_q) J(s_q). Throws SingularityError when an
// observation point sits on a quadrature node.
std::vector<ComplexVec3> radiate_field(const WaveContext& ctx, const RingAperture& tx,
                                       std::span<const ComplexVec3> current,
                                       std::span<const RealVec3> observation_points,
                                       DyadicKernel kernel = dyadic_green);

} // namespace oamcapa
