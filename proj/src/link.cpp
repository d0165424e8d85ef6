// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/link.hpp"

#include <cmath>
#include <limits>

namespace oamcapa {

AwgnLink::AwgnLink(Eigen::MatrixXcd channel, double noise_variance, double total_power)
    : channel_(std::move(channel)), noise_variance_(noise_variance), total_power_(total_power)
{
    if (!(noise_variance_ > 0.0) || !std::isfinite(noise_variance_))
        throw std::invalid_argument("noise variance must be positive");
    if (!(total_power_ > 0.0) || !std::isfinite(total_power_))
        throw std::invalid_argument("total transmit power must be positive");
    if (channel_.size() == 0)
        throw std::invalid_argument("channel matrix is empty");
}

AwgnLink::AwgnLink(const CouplingMatrix& coupling, double noise_variance, double total_power)
    : AwgnLink(coupling.entries, noise_variance, total_power)
{
}

Eigen::VectorXcd transmit(const AwgnLink& link, const Eigen::VectorXcd& symbols,
                          std::mt19937_64& rng, Noise noise)
{
    if (symbols.size() != link.tx_modes())
        throw std::invalid_argument("transmit: " + std::to_string(symbols.size()) +
                                    " symbols for " + std::to_string(link.tx_modes()) +
                                    " transmit modes");
    Eigen::VectorXcd y = link.channel() * symbols;
    if (noise == Noise::On) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * link.noise_variance()));
        for (Eigen::Index m = 0; m < y.size(); ++m) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            y(m) += cdouble(re, im);
        }
    }
    return y;
}

Eigen::VectorXcd transmit(const AwgnLink& link, const Eigen::VectorXcd& symbols,
                          std::uint64_t seed, Noise noise)
{
    std::mt19937_64 rng(seed);
    return transmit(link, symbols, rng, noise);
}

Constellation::Constellation(std::vector<cdouble> points) : points_(std::move(points))
{
    if (points_.empty())
        throw std::invalid_argument("constellation must not be empty");
}

Constellation Constellation::qpsk(double amplitude)
{
    const double a = amplitude / std::sqrt(2.0);
    return Constellation({{a, a}, {-a, a}, {a, -a}, {-a, -a}});
}

int Constellation::nearest(cdouble value) const
{
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
        const double dist = std::norm(value - points_[static_cast<std::size_t>(i)]);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

Detection equalize_and_detect(const AwgnLink& link, const Eigen::VectorXcd& received,
                              const Constellation& constellation)
{
    const Eigen::Index modes = std::min(link.channel().rows(), link.channel().cols());
    if (received.size() != link.rx_modes())
        throw std::invalid_argument("equalize_and_detect: received vector has wrong length");
    Detection out;
    out.symbols.reserve(static_cast<std::size_t>(modes));
    out.snr_per_mode.resize(modes);
    for (Eigen::Index m = 0; m < modes; ++m) {
        const cdouble h = link.channel()(m, m);
        if (h == cdouble(0.0))
            throw std::domain_error("equalize_and_detect: zero diagonal gain on mode index " +
                                    std::to_string(m));
        out.symbols.push_back(constellation.nearest(received(m) / h));
        out.snr_per_mode(m) = std::norm(h) * link.snr();
    }
    return out;
}

} // namespace oamcapa
