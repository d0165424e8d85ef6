// SPDX-License-Identifier: Apache-2.0
//
// Spectrum efficiency, coupling strength, transmit-side kernel, effective
// degrees of freedom and the equal-power SE bounds.

#pragma once

#include "oamcapa/channel.hpp"

#include <span>

namespace oamcapa {

// sum_m log2(1 + gains[m] * snr) in bit/s/Hz.
double spectral_efficiency(std::span<const double> gains, double snr);

// sum_m |h_mm|^2
double coupling_strength(const CouplingMatrix& coupling);
double coupling_strength(std::span<const double> gains);

// K_T[k][k'] = sum_v w_v conj(g(v, k)) g(v, k') over the geometry's
// quadrature; Q_t x Q_t, Hermitian positive semidefinite.
Eigen::MatrixXcd kernel_kt(const LinkGeometry& geom, DyadicKernel kernel = dyadic_green);

// Participation ratio (sum_k w_k K_kk)^2 / sum_kk' w_k w_k' |K_kk'|^2.
// Throws std::domain_error when the kernel vanishes.
double edof_from_kernel(const Eigen::MatrixXcd& kt, const Eigen::VectorXd& tx_weights);

double edof(const LinkGeometry& geom, DyadicKernel kernel = dyadic_green);

// Same participation ratio on the unweighted Green samples of a UCA with
// tx_elements / rx_elements elements on the geometry's rings.
double edof_uca(const LinkGeometry& geom, int tx_elements, int rx_elements,
                DyadicKernel kernel = dyadic_green);

// eps * log2(1 + snr * gamma / eps). Throws std::invalid_argument for
// gamma < 0, eps < 1 or snr < 0.
double se_upper_bound(double gamma, double eps, double snr);

// modes * log2(1 + snr * gamma / modes), the equal-gain Jensen bound that
// holds for any gain profile spread over `modes` channels.
double se_jensen_bound(double gamma, int modes, double snr);

enum class ApertureDimension { Diameter, Radius };

// 2 D^2 / lambda with D taken from the larger of the two rings.
double rayleigh_distance(const WaveContext& ctx, const RingAperture& tx, const RingAperture& rx,
                         ApertureDimension dimension = ApertureDimension::Diameter);

// Rescales gains so that they sum to their count (gamma = M).
std::vector<double> normalize_gains(std::span<const double> gains);

struct ChannelMetrics {
    double se = 0.0;
    double coupling_strength = 0.0;
    double edof = 1.0;
    double se_upper_bound = 0.0;
    double se_jensen_bound = 0.0;
    double snr_per_mode = 0.0;
    std::vector<double> mode_gains;

    bool bound_holds(double tolerance = 1e-9) const { return se <= se_upper_bound + tolerance; }
};

ChannelMetrics evaluate_metrics(std::vector<double> gains, double snr, double eps);

} // namespace oamcapa
