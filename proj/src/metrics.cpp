// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oamcapa {

double spectral_efficiency(std::span<const double> gains, double snr)
{
    double se = 0.0;
    for (double g : gains)
        se += std::log2(1.0 + g * snr);
    return se;
}

double coupling_strength(std::span<const double> gains)
{
    return std::accumulate(gains.begin(), gains.end(), 0.0);
}

double coupling_strength(const CouplingMatrix& coupling)
{
    const auto gains = coupling.diagonal_gains();
    return coupling_strength(gains);
}

Eigen::MatrixXcd kernel_kt(const LinkGeometry& geom, DyadicKernel kernel)
{
    const auto rx_nodes = sample_points(geom.rx());
    const Eigen::MatrixXcd g =
        projected_green_samples(geom.context(), rx_nodes, sample_points(geom.tx()), kernel);
    Eigen::VectorXd rx_weights(g.rows());
    for (Eigen::Index v = 0; v < g.rows(); ++v)
        rx_weights(v) = rx_nodes[static_cast<std::size_t>(v)].weight;
    return g.adjoint() * rx_weights.asDiagonal() * g;
}

double edof_from_kernel(const Eigen::MatrixXcd& kt, const Eigen::VectorXd& tx_weights)
{
    if (kt.rows() != kt.cols() || kt.rows() != tx_weights.size())
        throw std::invalid_argument("edof: kernel and weight dimensions disagree");
    const double trace = (kt.diagonal().real().array() * tx_weights.array()).sum();
    const double frobenius =
        (tx_weights.asDiagonal() * kt.cwiseAbs2() * tx_weights.asDiagonal()).sum();
    if (!(frobenius > 0.0))
        throw std::domain_error("edof undefined: channel kernel vanishes");
    return trace * trace / frobenius;
}

double edof(const LinkGeometry& geom, DyadicKernel kernel)
{
    const auto tx_nodes = sample_points(geom.tx());
    Eigen::VectorXd w(static_cast<Eigen::Index>(tx_nodes.size()));
    for (std::size_t k = 0; k < tx_nodes.size(); ++k)
        w(static_cast<Eigen::Index>(k)) = tx_nodes[k].weight;
    return edof_from_kernel(kernel_kt(geom, kernel), w);
}

double edof_uca(const LinkGeometry& geom, int tx_elements, int rx_elements, DyadicKernel kernel)
{
    if (tx_elements < 1 || rx_elements < 1)
        throw std::invalid_argument("edof_uca: element counts must be positive");
    // Unweighted Green samples are G_EM of the discrete model; mode sets do
    // not enter the kernel.
    const DiscreteModel model = discrete_uca_model(geom, tx_elements, rx_elements,
                                                   OamModeSet({0}), OamModeSet({0}), kernel);
    const Eigen::MatrixXcd kt = model.g_em.adjoint() * model.g_em;
    return edof_from_kernel(kt, Eigen::VectorXd::Ones(tx_elements));
}

double se_upper_bound(double gamma, double eps, double snr)
{
    if (!(gamma >= 0.0))
        throw std::invalid_argument("se_upper_bound: coupling strength must be >= 0");
    if (!(eps >= 1.0))
        throw std::invalid_argument("se_upper_bound: EDoF must be >= 1");
    if (!(snr >= 0.0))
        throw std::invalid_argument("se_upper_bound: SNR must be >= 0");
    return eps * std::log2(1.0 + snr * gamma / eps);
}

double se_jensen_bound(double gamma, int modes, double snr)
{
    if (modes < 1)
        throw std::invalid_argument("se_jensen_bound: need at least one mode");
    return modes * std::log2(1.0 + snr * gamma / modes);
}

double rayleigh_distance(const WaveContext& ctx, const RingAperture& tx, const RingAperture& rx,
                         ApertureDimension dimension)
{
    const double r = std::max(tx.radius(), rx.radius());
    const double d = dimension == ApertureDimension::Diameter ? 2.0 * r : r;
    return 2.0 * d * d / ctx.wavelength();
}

std::vector<double> normalize_gains(std::span<const double> gains)
{
    const double total = coupling_strength(gains);
    std::vector<double> out(gains.begin(), gains.end());
    if (total > 0.0)
        for (double& g : out)
            g *= static_cast<double>(out.size()) / total;
    return out;
}

ChannelMetrics evaluate_metrics(std::vector<double> gains, double snr, double eps)
{
    ChannelMetrics m;
    m.se = spectral_efficiency(gains, snr);
    m.coupling_strength = coupling_strength(gains);
    m.edof = eps;
    m.se_upper_bound = se_upper_bound(m.coupling_strength, eps, snr);
    m.se_jensen_bound =
        se_jensen_bound(m.coupling_strength, static_cast<int>(gains.size()), snr);
    m.snr_per_mode = snr;
    m.mode_gains = std::move(gains);
    return m;
}

} // namespace oamcapa
