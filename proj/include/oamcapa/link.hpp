// SPDX-License-Identifier: Apache-2.0
//
// Parallel-channel AWGN link over an OAM coupling matrix: y = H x + z.

#pragma once

#include "oamcapa/channel.hpp"

#include <cstdint>
#include <random>

namespace oamcapa {

class AwgnLink {
public:
    // Throws std::invalid_argument unless noise_variance > 0 and total_power > 0.
    AwgnLink(Eigen::MatrixXcd channel, double noise_variance, double total_power);
    AwgnLink(const CouplingMatrix& coupling, double noise_variance, double total_power);

    const Eigen::MatrixXcd& channel() const { return channel_; }
    double noise_variance() const { return noise_variance_; }
    double total_power() const { return total_power_; }
    int tx_modes() const { return static_cast<int>(channel_.cols()); }
    int rx_modes() const { return static_cast<int>(channel_.rows()); }
    // Equal allocation: P_t / M.
    double per_mode_power() const { return total_power_ / rx_modes(); }
    // P_t / (M sigma^2)
    double snr() const { return per_mode_power() / noise_variance_; }

private:
    Eigen::MatrixXcd channel_;
    double noise_variance_;
    double total_power_;
};

enum class Noise { On, Off };

// Circularly-symmetric complex Gaussian noise, total variance sigma^2 per
// receive mode (sigma^2 / 2 per real dimension).
Eigen::VectorXcd transmit(const AwgnLink& link, const Eigen::VectorXcd& symbols,
                          std::mt19937_64& rng, Noise noise = Noise::On);
Eigen::VectorXcd transmit(const AwgnLink& link, const Eigen::VectorXcd& symbols,
                          std::uint64_t seed, Noise noise = Noise::On);

class Constellation {
public:
    explicit Constellation(std::vector<cdouble> points);

    // Gray-labelled QPSK with symbol energy amplitude^2: index bit 0 selects
    // the sign of the real part, bit 1 the sign of the imaginary part.
    static Constellation qpsk(double amplitude = 1.0);

    const std::vector<cdouble>& points() const { return points_; }
    int size() const { return static_cast<int>(points_.size()); }
    int nearest(cdouble value) const;

private:
    std::vector<cdouble> points_;
};

struct Detection {
    std::vector<int> symbols;          // constellation indices, one per receive mode
    Eigen::VectorXd snr_per_mode;      // |h_mm|^2 P_t / (M sigma^2)
};

// Zero-forcing on the diagonal: nearest point to y_m / h_mm. Throws
// std::domain_error when a diagonal entry is zero.
Detection equalize_and_detect(const AwgnLink& link, const Eigen::VectorXcd& received,
                              const Constellation& constellation);

} // namespace oamcapa
