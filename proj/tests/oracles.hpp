// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations written independently of the library, used as
// test oracles. Each follows the textbook form rather than the library's
// factorisation.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double c0 = 299792458.0;
constexpr double mu0 = 1.25663706212e-6;

// G = i w mu0 (I + grad grad / k^2) e^{ikp}/(4 pi p), Hessian in closed form.
inline Eigen::Matrix3cd dyadic_green(double freq, const Eigen::Vector3d& r,
                                     const Eigen::Vector3d& s)
{
    const double w = 2 * pi * freq;
    const double k = w / c0;
    const Eigen::Vector3d p = r - s;
    const double d = p.norm();
    const Eigen::Vector3d u = p / d;
    const cd g = std::exp(cd(0, k * d)) / (4 * pi * d);
    const cd ik(0, k);
    // d_i d_j g = g [ (3/d^2 - 3ik/d - k^2) u_i u_j + (ik/d - 1/d^2) delta_ij ]
    const cd a = 3.0 / (d * d) - 3.0 * ik / d - k * k;
    const cd b = ik / d - 1.0 / (d * d);
    Eigen::Matrix3cd hess = (a * (u * u.transpose()).cast<cd>() +
                             b * Eigen::Matrix3cd::Identity()) * g;
    return cd(0, w * mu0) * (g * Eigen::Matrix3cd::Identity() + hess / (k * k));
}

inline Eigen::Vector3d ring_direction(bool azimuthal, double a)
{
    return azimuthal ? Eigen::Vector3d(-std::sin(a), std::cos(a), 0)
                     : Eigen::Vector3d(1, 0, 0);
}

// h_mn = sum_v sum_k dv dk conj(psi_m(v)) e_v^T G j_k phi_n(k), trapezoid
// nodes at angle 2 pi q / Q, psi/phi = e^{i l a}/sqrt(2 pi R).
inline cd coupling(double freq, double rt, double rr, double dist, bool azimuthal, int q, int m,
                   int n)
{
    cd sum = 0;
    const double dt = 2 * pi * rt / q, dr = 2 * pi * rr / q;
    for (int v = 0; v < q; ++v) {
        const double av = 2 * pi * v / q;
        const Eigen::Vector3d r(rr * std::cos(av), rr * std::sin(av), dist);
        const Eigen::Vector3d e = ring_direction(azimuthal, av);
        const cd psi = std::exp(cd(0, m * av)) / std::sqrt(2 * pi * rr);
        for (int k = 0; k < q; ++k) {
            const double ak = 2 * pi * k / q;
            const Eigen::Vector3d s(rt * std::cos(ak), rt * std::sin(ak), 0);
            const Eigen::Vector3d j = ring_direction(azimuthal, ak);
            const cd phi = std::exp(cd(0, n * ak)) / std::sqrt(2 * pi * rt);
            const cd proj = (e.cast<cd>().transpose() * dyadic_green(freq, r, s) * j.cast<cd>())(0);
            sum += dr * dt * std::conj(psi) * proj * phi;
        }
    }
    return sum;
}

// (sum sigma)^2 / sum sigma^2 from a dense Hermitian eigendecomposition.
inline double participation_ratio(const Eigen::MatrixXcd& hermitian)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    return ev.sum() * ev.sum() / ev.squaredNorm();
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Gray-mapped QPSK bit error probability at symbol SNR Es/N0.
inline double qpsk_ber(double snr) { return q_function(std::sqrt(snr)); }

} // namespace oracle
