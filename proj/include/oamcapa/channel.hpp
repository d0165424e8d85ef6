// SPDX-License-Identifier: Apache-2.0
//
// OAM mode-coupling matrices between coaxial ring apertures.
//
//   h_mn = integral over rx, integral over tx of
//          psi_m(r)^H G(r, s) phi_n(s) ds dr
//
// Rows index receive modes, columns transmit modes. The continuous model
// (arc-length quadrature) and the UCA model (K, V discrete elements with
// 1/sqrt(K), 1/sqrt(V) normalisation) share one factorisation:
//
//   Lambda = R_psi^H * G_EM * T_phi
//
// where G_EM holds polarisation-projected Green samples e^T G j.

#pragma once

#include "oamcapa/aperture.hpp"

namespace oamcapa {

// Transmit ring at z = 0, receive ring at z = d > 0, both centred on the z axis.
class LinkGeometry {
public:
    // Throws std::invalid_argument unless tx sits at z = 0 and rx at z > 0.
    LinkGeometry(WaveContext ctx, RingAperture tx, RingAperture rx);

    // Both rings share polarisation and quadrature.
    static LinkGeometry coaxial(const WaveContext& ctx, double tx_radius, double rx_radius,
                                double distance, Polarization polarization, int quadrature);

    const WaveContext& context() const { return ctx_; }
    const RingAperture& tx() const { return tx_; }
    const RingAperture& rx() const { return rx_; }
    double distance() const { return rx_.axial_position() - tx_.axial_position(); }

    LinkGeometry with_quadrature(int tx_quadrature, int rx_quadrature) const;
    LinkGeometry with_distance(double distance) const;

private:
    WaveContext ctx_;
    RingAperture tx_;
    RingAperture rx_;
};

struct CouplingMatrix {
    Eigen::MatrixXcd entries; // M x N
    OamModeSet tx_modes;
    OamModeSet rx_modes;
    LinkGeometry geometry;
    int tx_quadrature;
    int rx_quadrature;
    // Quadrature too coarse for exact orthogonality of one of the mode sets.
    bool degraded;

    // |h_mm|^2 for m < min(M, N).
    std::vector<double> diagonal_gains() const;
};

struct DiscreteModel {
    Eigen::MatrixXcd t_phi;    // K x N
    Eigen::MatrixXcd g_em;     // V x K
    Eigen::MatrixXcd r_psi_h;  // M x V
    Eigen::MatrixXcd lambda;   // M x N
    int tx_elements;
    int rx_elements;
    OamModeSet tx_modes;
    OamModeSet rx_modes;
    // Mode count exceeds the element count, two modes collide modulo the
    // element count, or some |l| >= elements / 2.
    bool aliasing;

    std::vector<double> diagonal_gains() const;
};

// V x K matrix of e_v^T G(r_v, s_k) j_k between the given node lists.
Eigen::MatrixXcd projected_green_samples(const WaveContext& ctx,
                                         const std::vector<RingSample>& rx_nodes,
                                         const std::vector<RingSample>& tx_nodes,
                                         DyadicKernel kernel = dyadic_green);

// Entrywise double quadrature for one (receive mode, transmit mode) pair.
cdouble coupling_coefficient(const LinkGeometry& geom, int rx_mode, int tx_mode,
                             DyadicKernel kernel = dyadic_green);

CouplingMatrix coupling_matrix(const LinkGeometry& geom, const OamModeSet& tx_modes,
                               const OamModeSet& rx_modes, DyadicKernel kernel = dyadic_green);

// UCA model with `tx_elements` / `rx_elements` elements placed on the
// geometry's rings (the rings' own quadrature settings are ignored).
DiscreteModel discrete_uca_model(const LinkGeometry& geom, int tx_elements, int rx_elements,
                                 const OamModeSet& tx_modes, const OamModeSet& rx_modes,
                                 DyadicKernel kernel = dyadic_green);

// ceil(2 pi R / (lambda / 2)): element count of a half-wavelength-spaced UCA.
int half_wavelength_element_count(const WaveContext& ctx, double radius);

} // namespace oamcapa
