// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/channel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oamcapa {

namespace {

std::vector<double> squared_diagonal(const Eigen::MatrixXcd& m)
{
    const Eigen::Index n = std::min(m.rows(), m.cols());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = std::norm(m(i, i));
    return out;
}

// Element-sum basis of a K-element UCA: entry (k, n) = e^{i l_n 2 pi k / K} / sqrt(K).
Eigen::MatrixXcd uca_basis(int elements, const OamModeSet& modes)
{
    Eigen::MatrixXcd out(elements, modes.size());
    const double norm = 1.0 / std::sqrt(static_cast<double>(elements));
    for (int k = 0; k < elements; ++k)
        for (int n = 0; n < modes.size(); ++n)
            out(k, n) = std::polar(norm, modes[n] * 2.0 * kPi * k / elements);
    return out;
}

bool uca_aliasing(int elements, const OamModeSet& modes)
{
    if (modes.size() > elements)
        return true;
    std::set<int> residues;
    for (int l : modes.modes()) {
        if (2 * std::abs(l) >= elements)
            return true;
        residues.insert(((l % elements) + elements) % elements);
    }
    return static_cast<int>(residues.size()) != modes.size();
}

} // namespace

LinkGeometry::LinkGeometry(WaveContext ctx, RingAperture tx, RingAperture rx)
    : ctx_(ctx), tx_(std::move(tx)), rx_(std::move(rx))
{
    if (tx_.axial_position() != 0.0)
        throw std::invalid_argument("transmit ring must sit in the plane z = 0");
    if (!(rx_.axial_position() > 0.0))
        throw std::invalid_argument("link distance must be positive");
}

LinkGeometry LinkGeometry::coaxial(const WaveContext& ctx, double tx_radius, double rx_radius,
                                   double distance, Polarization polarization, int quadrature)
{
    return LinkGeometry(ctx, RingAperture(tx_radius, 0.0, polarization, quadrature),
                        RingAperture(rx_radius, distance, polarization, quadrature));
}

LinkGeometry LinkGeometry::with_quadrature(int tx_quadrature, int rx_quadrature) const
{
    return LinkGeometry(ctx_, tx_.with_quadrature(tx_quadrature),
                        rx_.with_quadrature(rx_quadrature));
}

LinkGeometry LinkGeometry::with_distance(double distance) const
{
    return LinkGeometry(ctx_, tx_,
                        RingAperture(rx_.radius(), distance, rx_.polarization(),
                                     rx_.quadrature_points()));
}

std::vector<double> CouplingMatrix::diagonal_gains() const { return squared_diagonal(entries); }

std::vector<double> DiscreteModel::diagonal_gains() const { return squared_diagonal(lambda); }

Eigen::MatrixXcd projected_green_samples(const WaveContext& ctx,
                                         const std::vector<RingSample>& rx_nodes,
                                         const std::vector<RingSample>& tx_nodes,
                                         DyadicKernel kernel)
{
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(rx_nodes.size()),
                         static_cast<Eigen::Index>(tx_nodes.size()));
    for (std::size_t k = 0; k < tx_nodes.size(); ++k) {
        const ComplexVec3 j = tx_nodes[k].tangent.cast<cdouble>();
        for (std::size_t v = 0; v < rx_nodes.size(); ++v) {
            const Dyadic3 g = kernel(ctx, rx_nodes[v].position, tx_nodes[k].position);
            // e is real, so e^H G j == e^T G j
            out(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(k)) =
                rx_nodes[v].tangent.cast<cdouble>().dot(g * j);
        }
    }
    return out;
}

cdouble coupling_coefficient(const LinkGeometry& geom, int rx_mode, int tx_mode,
                             DyadicKernel kernel)
{
    const auto& ctx = geom.context();
    const auto tx_nodes = sample_points(geom.tx());
    const auto rx_nodes = sample_points(geom.rx());
    cdouble sum = 0.0;
    for (const auto& r : rx_nodes) {
        const BasisSample psi = basis_eval(geom.rx(), rx_mode, r.angle);
        const ComplexVec3 psi_vec = psi.direction.cast<cdouble>() * psi.phase_weight;
        cdouble inner = 0.0;
        for (const auto& s : tx_nodes) {
            const BasisSample phi = basis_eval(geom.tx(), tx_mode, s.angle);
            const ComplexVec3 phi_vec = phi.direction.cast<cdouble>() * phi.phase_weight;
            inner += s.weight * psi_vec.dot(kernel(ctx, psi.point, phi.point) * phi_vec);
        }
        sum += r.weight * inner;
    }
    return sum;
}

CouplingMatrix coupling_matrix(const LinkGeometry& geom, const OamModeSet& tx_modes,
                               const OamModeSet& rx_modes, DyadicKernel kernel)
{
    const Eigen::MatrixXcd g = projected_green_samples(
        geom.context(), sample_points(geom.rx()), sample_points(geom.tx()), kernel);
    const Eigen::MatrixXcd t_phi = weighted_basis_matrix(geom.tx(), tx_modes);
    const Eigen::MatrixXcd r_psi = weighted_basis_matrix(geom.rx(), rx_modes);
    const int q_tx = geom.tx().quadrature_points();
    const int q_rx = geom.rx().quadrature_points();
    return {r_psi.adjoint() * g * t_phi,
            tx_modes,
            rx_modes,
            geom,
            q_tx,
            q_rx,
            q_tx <= tx_modes.spread() || q_rx <= rx_modes.spread()};
}

DiscreteModel discrete_uca_model(const LinkGeometry& geom, int tx_elements, int rx_elements,
                                 const OamModeSet& tx_modes, const OamModeSet& rx_modes,
                                 DyadicKernel kernel)
{
    if (tx_elements < 1 || rx_elements < 1)
        throw std::invalid_argument("UCA needs at least one element at each end");

    // Element positions follow the ring sampling; the minimum quadrature
    // guard of RingAperture does not apply to physical element counts.
    auto elements = [](const RingAperture& ap, int count) {
        std::vector<RingSample> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            const double angle = 2.0 * kPi * k / count;
            out.push_back({angle, ap.point_at(angle), ap.direction_at(angle), 1.0});
        }
        return out;
    };

    DiscreteModel model{uca_basis(tx_elements, tx_modes),
                        projected_green_samples(geom.context(), elements(geom.rx(), rx_elements),
                                                elements(geom.tx(), tx_elements), kernel),
                        uca_basis(rx_elements, rx_modes).adjoint(),
                        {},
                        tx_elements,
                        rx_elements,
                        tx_modes,
                        rx_modes,
                        uca_aliasing(tx_elements, tx_modes) || uca_aliasing(rx_elements, rx_modes)};
    model.lambda = model.r_psi_h * model.g_em * model.t_phi;
    return model;
}

int half_wavelength_element_count(const WaveContext& ctx, double radius)
{
    return static_cast<int>(std::ceil(2.0 * kPi * radius / (0.5 * ctx.wavelength()) - 1e-9));
}

} // namespace oamcapa
