// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/verify.hpp"
#include "oamcapa/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace oamcapa {

namespace {

constexpr double kFrequency = 5.8e9;
constexpr double kRadiusWavelengths = 20.0;

CheckResult make(std::string name, double value, double threshold, std::string detail)
{
    return {std::move(name), value < threshold, value, threshold, std::move(detail)};
}

CheckResult check_reciprocity(const WaveContext& ctx, DyadicKernel kernel, std::mt19937& rng)
{
    std::uniform_real_distribution<double> coord(-5.0 * ctx.wavelength(), 5.0 * ctx.wavelength());
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const RealVec3 r(coord(rng), coord(rng), coord(rng));
        const RealVec3 s(coord(rng), coord(rng), coord(rng));
        const Dyadic3 forward = kernel(ctx, r, s);
        const Dyadic3 backward = kernel(ctx, s, r).transpose();
        worst = std::max(worst, (forward - backward).norm() / forward.norm());
    }
    return make("green_reciprocity", worst, 1e-12, "max |G(r,s) - G(s,r)^T| / |G| over 100 pairs");
}

CheckResult check_far_field(const WaveContext& ctx, DyadicKernel kernel)
{
    const double limit = ctx.wavenumber() * ctx.impedance() / (4.0 * kPi) * std::sqrt(2.0);
    double worst = 0.0;
    for (double dist : {1e3, 1e4}) {
        const RealVec3 s(0.1, -0.2, 0.3);
        const RealVec3 dir = RealVec3(0.3, -0.5, 0.8).normalized();
        const RealVec3 r = s + dir * dist * ctx.wavelength();
        const double scaled = kernel(ctx, r, s).norm() * dist * ctx.wavelength();
        worst = std::max(worst, std::abs(scaled / limit - 1.0));
    }
    return make("green_far_field_decay", worst, 1e-3,
                "|G|_F |p| vs k0 Z sqrt(2) / (4 pi) at 1e3 and 1e4 wavelengths");
}

CheckResult check_prefactor(const WaveContext& ctx)
{
    const double a = ctx.wavenumber() * ctx.impedance();
    const double b = ctx.angular_frequency() * kVacuumPermeability;
    return make("green_prefactor", std::abs(a - b) / b, 1e-12, "k0 Z vs omega mu0");
}

// G = i k0 Z (I + grad grad / k0^2) g, with the Hessian of the scalar Green
// function taken by central differences.
CheckResult check_helmholtz(const WaveContext& ctx, DyadicKernel kernel)
{
    const double lam = ctx.wavelength();
    const double h = 1e-4 * lam;
    const double k0 = ctx.wavenumber();
    double worst = 0.0;
    const std::vector<RealVec3> offsets = {
        RealVec3(0.3, 0.1, 0.2) * lam, RealVec3(-0.5, 0.4, 0.6) * lam, RealVec3(1.2, -0.7, 0.9) * lam};
    for (const auto& p : offsets) {
        auto g = [&](const RealVec3& x) { return scalar_green(ctx, x); };
        Dyadic3 hess;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const RealVec3 ei = RealVec3::Unit(i) * h, ej = RealVec3::Unit(j) * h;
                hess(i, j) = (g(p + ei + ej) - g(p + ei - ej) - g(p - ei + ej) + g(p - ei - ej)) /
                             (4.0 * h * h);
            }
        const Dyadic3 reference = cdouble(0.0, k0 * ctx.impedance()) *
                                  (g(p) * Dyadic3::Identity() + hess / (k0 * k0));
        const Dyadic3 value = kernel(ctx, p, RealVec3::Zero());
        worst = std::max(worst, (value - reference).norm() / reference.norm());
    }
    return make("green_helmholtz_fd", worst, 1e-5,
                "dyadic Green vs i k0 Z (I + grad grad / k0^2) g by finite differences");
}

CheckResult check_gram(std::mt19937& rng)
{
    const auto ctx = WaveContext::at_frequency(kFrequency);
    std::uniform_int_distribution<int> index(-40, 40);
    std::uniform_int_distribution<int> count(1, 12);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> modes;
        const int n = count(rng);
        while (static_cast<int>(modes.size()) < n) {
            const int l = index(rng);
            if (std::find(modes.begin(), modes.end(), l) == modes.end())
                modes.push_back(l);
        }
        const OamModeSet set(modes);
        const RingAperture ap(kRadiusWavelengths * ctx.wavelength(), 0.0, Polarization::Azimuthal,
                              std::max(RingAperture::kMinQuadrature, set.spread() + 1 + trial));
        const auto gram = gram_matrix(ap, set);
        worst = std::max(worst,
                         (gram.matrix - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
    }
    return make("gram_identity", worst, 1e-12, "20 random mode sets with Q > spread");
}

struct ChannelFixture {
    WaveContext ctx = WaveContext::at_frequency(kFrequency);
    double radius = kRadiusWavelengths * ctx.wavelength();
    int quadrature;
    DyadicKernel kernel;

    LinkGeometry geometry(double distance_wavelengths,
                          Polarization pol = Polarization::Azimuthal) const
    {
        return LinkGeometry::coaxial(ctx, radius, radius, distance_wavelengths * ctx.wavelength(),
                                     pol, quadrature);
    }
};

} // namespace

bool VerifyReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult& VerifyReport::check(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return c;
    throw std::out_of_range("no verification check named " + name);
}

std::string VerifyReport::to_json() const
{
    nlohmann::json j;
    j["passed"] = passed();
    j["warnings"] = warnings;
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"threshold", c.threshold},
                               {"detail", c.detail}});
    return j.dump(2);
}

std::string VerifyReport::to_text() const
{
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.value << " (limit "
           << c.threshold << ") " << c.detail << '\n';
    for (const auto& w : warnings)
        os << "[WARN] " << w << '\n';
    os << (passed() ? "all checks passed" : "verification FAILED") << '\n';
    return os.str();
}

VerifyReport verify_suite(const VerifyOptions& options)
{
    VerifyReport report;
    std::mt19937 rng(options.seed);
    const ChannelFixture fx{.quadrature = options.quadrature > 0 ? options.quadrature : 256,
                            .kernel = options.kernel};
    const auto& ctx = fx.ctx;

    report.checks.push_back(check_reciprocity(ctx, options.kernel, rng));
    report.checks.push_back(check_far_field(ctx, options.kernel));
    report.checks.push_back(check_prefactor(ctx));
    report.checks.push_back(check_helmholtz(ctx, options.kernel));
    report.checks.push_back(check_gram(rng));

    const OamModeSet modes = OamModeSet::centered(17); // |l| <= 8
    if (fx.quadrature <= modes.spread())
        report.warnings.push_back("quadrature " + std::to_string(fx.quadrature) +
                                  " does not exceed the mode spread " +
                                  std::to_string(modes.spread()) +
                                  ": orthogonality is degraded (aliasing)");

    // Diagonality and conjugate-mode symmetry on the aligned azimuthal link.
    double diag_worst = 0.0, mirror_worst = 0.0;
    for (double d : {10.0, 100.0, 1000.0}) {
        const CouplingMatrix h = coupling_matrix(fx.geometry(d), modes, modes, fx.kernel);
        Eigen::MatrixXcd off = h.entries;
        off.diagonal().setZero();
        diag_worst = std::max(diag_worst, off.cwiseAbs().maxCoeff() /
                                              h.entries.diagonal().cwiseAbs().maxCoeff());
        const Eigen::Index n = h.entries.rows();
        const double scale = h.entries.diagonal().cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i) {
            const int l = modes[static_cast<int>(i)];
            const auto it = std::find(modes.modes().begin(), modes.modes().end(), -l);
            if (it == modes.modes().end())
                continue;
            const Eigen::Index j = it - modes.modes().begin();
            mirror_worst = std::max(mirror_worst,
                                    std::abs(h.entries(i, i) - h.entries(j, j)) / scale);
        }
    }
    report.checks.push_back(make("coupling_diagonality", diag_worst, 1e-10,
                                 "max off-diagonal / max diagonal, |l| <= 8, d = 10/100/1000 lambda"));
    report.checks.push_back(make("conjugate_mode_symmetry", mirror_worst, 1e-10,
                                 "|h_ll - h_-l-l| / max diagonal"));

    {
        const auto geom = fx.geometry(50.0);
        const auto h = coupling_matrix(geom, modes, modes, fx.kernel);
        const auto h2 = coupling_matrix(geom.with_quadrature(2 * fx.quadrature, 2 * fx.quadrature),
                                        modes, modes, fx.kernel);
        const double change =
            (h.entries - h2.entries).cwiseAbs().maxCoeff() / h2.entries.cwiseAbs().maxCoeff();
        report.checks.push_back(make("quadrature_convergence", change, 1e-9,
                                     "coupling matrix change from Q to 2Q at d = 50 lambda"));
        if (h.degraded)
            report.warnings.push_back("coupling matrix at d = 50 lambda flagged degraded");
    }

    {
        const auto geom = fx.geometry(30.0, Polarization::LinearX);
        const Eigen::MatrixXcd kt = kernel_kt(geom, fx.kernel);
        const double herm = (kt - kt.adjoint()).cwiseAbs().maxCoeff() / kt.cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (kt + kt.adjoint()),
                                                            Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
        report.checks.push_back(make("kernel_hermitian_psd", std::max(herm, std::max(0.0, -lo / hi)),
                                     1e-12, "max(Hermitian defect, -min eig / max eig) of K_T"));

        const double w = geom.tx().circumference() / geom.tx().quadrature_points();
        const double trace_eps = edof_from_kernel(kt, Eigen::VectorXd::Constant(kt.rows(), w));
        const Eigen::VectorXd sigma = eig.eigenvalues() * w;
        const double eig_eps = sigma.sum() * sigma.sum() / sigma.squaredNorm();
        report.checks.push_back(make("edof_trace_vs_eigen", std::abs(trace_eps - eig_eps) / eig_eps,
                                     1e-9, "participation ratio: trace formula vs eigenvalues"));
    }

    {
        double gd2[2];
        int i = 0;
        for (double d : {2000.0, 4000.0}) {
            const auto geom = fx.geometry(d);
            gd2[i++] = coupling_strength(coupling_matrix(geom, modes, modes, fx.kernel)) *
                       std::pow(geom.distance(), 2);
        }
        report.checks.push_back(make("coupling_inverse_square", std::abs(gd2[0] / gd2[1] - 1.0),
                                     1e-2, "d^2 gamma at 2000 vs 4000 lambda"));
    }

    {
        double worst_jensen = -1e300, worst_edof = -1e300;
        int edof_cases = 0;
        for (double d : {20.0, 50.0, 300.0, 3000.0}) {
            const auto geom = fx.geometry(d);
            const double eps = edof(geom, fx.kernel);
            for (int m : {4, 8, 16}) {
                const OamModeSet set = OamModeSet::centered(m);
                const auto gains = coupling_matrix(geom, set, set, fx.kernel).diagonal_gains();
                const double gamma = coupling_strength(gains);
                for (double snr_db = -90; snr_db <= 0; snr_db += 10) {
                    const double snr = std::pow(10.0, snr_db / 10);
                    const double se = spectral_efficiency(gains, snr);
                    worst_jensen = std::max(worst_jensen, se - se_jensen_bound(gamma, m, snr));
                    if (eps >= m) {
                        ++edof_cases;
                        worst_edof = std::max(worst_edof, se - se_upper_bound(gamma, eps, snr));
                    }
                }
            }
        }
        report.checks.push_back(make("se_jensen_bound", worst_jensen, 1e-9,
                                     "max(C - M log2(1 + SNR gamma / M)) over d, M, SNR"));
        report.checks.push_back(make("se_edof_bound", worst_edof, 1e-9,
                                     "max(C - eps log2(1 + SNR gamma / eps)) over " +
                                         std::to_string(edof_cases) + " cases with eps >= M"));
    }
    return report;
}

} // namespace oamcapa
