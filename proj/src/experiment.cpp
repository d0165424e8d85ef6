// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/experiment.hpp"
#include "oamcapa/link.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>

namespace oamcapa {

namespace {

constexpr double kBoundTolerance = 1e-9;

double from_db(double db) { return std::pow(10.0, db / 10.0); }

int capa_quadrature(const ExperimentConfig& cfg, const WaveContext& ctx, const OamModeSet& modes)
{
    if (cfg.quadrature > 0)
        return cfg.quadrature;
    return std::max(default_quadrature(modes),
                    resolving_quadrature(ctx, std::max(cfg.tx_radius_m, cfg.rx_radius_m)));
}

int kernel_quadrature(const ExperimentConfig& cfg, const WaveContext& ctx, double radius)
{
    return cfg.quadrature > 0 ? cfg.quadrature : resolving_quadrature(ctx, radius);
}

// Diagonal gains, EDoF and bookkeeping of one channel realisation.
struct SeriesChannel {
    std::string label;
    int modes = 0;
    int elements = 0; // 0 for CAPA
    int quadrature = 0;
    std::vector<double> gains;
    double eps = 1.0;
};

SeriesChannel capa_channel(const ExperimentConfig& cfg, const WaveContext& ctx, double distance,
                           int mode_count)
{
    const OamModeSet modes = OamModeSet::centered(mode_count);
    const int q = capa_quadrature(cfg, ctx, modes);
    const auto geom = LinkGeometry::coaxial(ctx, cfg.tx_radius_m, cfg.rx_radius_m, distance,
                                            cfg.polarization, q);
    const CouplingMatrix h = coupling_matrix(geom, modes, modes);
    return {"CAPA-" + std::to_string(mode_count), mode_count, 0, q, h.diagonal_gains(),
            edof(geom)};
}

SeriesChannel uca_channel(const ExperimentConfig& cfg, const WaveContext& ctx, double distance,
                          int elements_cfg)
{
    const int elements = elements_cfg == kHalfWavelengthElements
                             ? half_wavelength_element_count(ctx, cfg.tx_radius_m)
                             : elements_cfg;
    const OamModeSet modes = OamModeSet::centered(elements);
    const auto geom = LinkGeometry::coaxial(ctx, cfg.tx_radius_m, cfg.rx_radius_m, distance,
                                            cfg.polarization, RingAperture::kMinQuadrature);
    const DiscreteModel model = discrete_uca_model(geom, elements, elements, modes, modes);
    std::string label = "UCA-" + std::to_string(elements);
    if (elements_cfg == kHalfWavelengthElements)
        label += " (lambda/2)";
    return {label, elements, elements, 0, model.diagonal_gains(),
            edof_uca(geom, elements, elements)};
}

std::vector<Column> se_columns()
{
    return {{"series", "", true},        {"distance", "m"},
            {"distance", "wavelengths"}, {"snr", "db"},
            {"modes", "count"},          {"elements", "count"},
            {"quadrature", "points"},    {"se", "bpshz"},
            {"se_upper_bound", "bpshz"}, {"se_jensen_bound", "bpshz"},
            {"coupling_strength", "1"},  {"edof", "1"},
            {"bound_ok", "flag"}};
}

struct SeRowSink {
    ResultTable& table;
    int violations = 0;

    void add(const SeriesChannel& ch, GainScaling scaling, double distance, double lambda,
             double snr_db)
    {
        std::vector<double> gains =
            scaling == GainScaling::Normalized ? normalize_gains(ch.gains) : ch.gains;
        const ChannelMetrics m = evaluate_metrics(std::move(gains), from_db(snr_db), ch.eps);
        const bool ok = m.bound_holds(kBoundTolerance);
        if (!ok)
            ++violations;
        table.add_row({ch.label, distance, distance / lambda, snr_db, double(ch.modes),
                       double(ch.elements), double(ch.quadrature), m.se, m.se_upper_bound,
                       m.se_jensen_bound, m.coupling_strength, m.edof, ok ? 1.0 : 0.0});
    }
};

ExperimentResult run_se_vs_snr(const ExperimentConfig& cfg)
{
    const auto ctx = WaveContext::at_frequency(cfg.frequency_hz);
    ResultTable table(se_columns());
    SeRowSink sink{table};
    PlotSpec plot{"Spectrum efficiency vs SNR", "SNR per mode [dB]", "SE [bit/s/Hz]", false, {}};
    for (double d : cfg.distances_m) {
        std::vector<SeriesChannel> series;
        for (int n : cfg.capa_modes)
            series.push_back(capa_channel(cfg, ctx, d, n));
        for (int k : cfg.uca_elements)
            series.push_back(uca_channel(cfg, ctx, d, k));
        for (const auto& ch : series) {
            PlotSeries ps{ch.label, {}, {}};
            if (cfg.distances_m.size() > 1)
                ps.label += " d=" + format_number(d / ctx.wavelength()) + "lambda";
            for (double s : cfg.snr_db) {
                sink.add(ch, cfg.scaling, d, ctx.wavelength(), s);
                ps.x.push_back(s);
                ps.y.push_back(table.number(table.rows().size() - 1, "se"));
            }
            plot.series.push_back(std::move(ps));
        }
    }
    return {std::move(table), {std::move(plot)}, sink.violations, 0.0};
}

ExperimentResult run_se_vs_distance(const ExperimentConfig& cfg)
{
    const auto ctx = WaveContext::at_frequency(cfg.frequency_hz);
    ResultTable table(se_columns());
    SeRowSink sink{table};
    std::vector<PlotSpec> plots;
    for (double s : cfg.snr_db)
        plots.push_back({"Spectrum efficiency vs distance (SNR " + format_number(s) + " dB)",
                         "distance [wavelengths]", "SE [bit/s/Hz]", true, {}});
    for (double d : cfg.distances_m) {
        std::vector<SeriesChannel> series;
        for (int n : cfg.capa_modes)
            series.push_back(capa_channel(cfg, ctx, d, n));
        for (int k : cfg.uca_elements)
            series.push_back(uca_channel(cfg, ctx, d, k));
        for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
            auto& plot = plots[si];
            for (const auto& ch : series) {
                sink.add(ch, cfg.scaling, d, ctx.wavelength(), cfg.snr_db[si]);
                auto it = std::find_if(plot.series.begin(), plot.series.end(),
                                       [&](const PlotSeries& p) { return p.label == ch.label; });
                if (it == plot.series.end()) {
                    plot.series.push_back({ch.label, {}, {}});
                    it = plot.series.end() - 1;
                }
                it->x.push_back(d / ctx.wavelength());
                it->y.push_back(table.number(table.rows().size() - 1, "se"));
            }
        }
    }
    return {std::move(table), std::move(plots), sink.violations, 0.0};
}

ExperimentResult run_edof_vs_distance(const ExperimentConfig& cfg)
{
    const double ref_lambda = cfg.wavelength();
    ResultTable table({{"frequency", "hz"},
                       {"radius", "m"},
                       {"radius", "ref_wavelengths"},
                       {"distance", "m"},
                       {"distance", "ref_wavelengths"},
                       {"quadrature", "points"},
                       {"edof", "1"},
                       {"rayleigh_distance", "m"}});
    PlotSpec plot{"EDoF vs distance", "distance [wavelengths at " +
                                          format_number(cfg.frequency_hz / 1e9) + " GHz]",
                  "EDoF", true, {}};
    for (double f : cfg.frequencies_hz) {
        const auto ctx = WaveContext::at_frequency(f);
        for (double radius : cfg.radii_m) {
            const int q = kernel_quadrature(cfg, ctx, radius);
            PlotSeries ps{format_number(f / 1e9) + " GHz, R=" +
                              format_number(radius / ref_lambda) + "lambda",
                          {}, {}};
            for (double d : cfg.distances_m) {
                const auto geom = LinkGeometry::coaxial(ctx, radius, radius, d, cfg.polarization, q);
                const double eps = edof(geom);
                table.add_row({f, radius, radius / ref_lambda, d, d / ref_lambda, double(q), eps,
                               rayleigh_distance(ctx, geom.tx(), geom.rx(),
                                                 cfg.rayleigh_dimension)});
                ps.x.push_back(d / ref_lambda);
                ps.y.push_back(eps);
            }
            plot.series.push_back(std::move(ps));
        }
    }
    return {std::move(table), {std::move(plot)}, 0, 0.0};
}

ExperimentResult run_edof_vs_elements(const ExperimentConfig& cfg)
{
    const auto ctx = WaveContext::at_frequency(cfg.frequency_hz);
    ResultTable table({{"distance", "m"},
                       {"distance", "wavelengths"},
                       {"elements", "count"},
                       {"edof_uca", "1"},
                       {"edof_capa", "1"},
                       {"relative_gap", "1"}});
    PlotSpec plot{"UCA EDoF vs element count", "elements", "EDoF", true, {}};
    const int q = kernel_quadrature(cfg, ctx, std::max(cfg.tx_radius_m, cfg.rx_radius_m));
    for (double d : cfg.distances_m) {
        const auto geom =
            LinkGeometry::coaxial(ctx, cfg.tx_radius_m, cfg.rx_radius_m, d, cfg.polarization, q);
        const double capa = edof(geom);
        PlotSeries uca{"UCA d=" + format_number(d / ctx.wavelength()) + "lambda", {}, {}};
        PlotSeries ref{"CAPA d=" + format_number(d / ctx.wavelength()) + "lambda", {}, {}};
        for (int k : cfg.element_counts) {
            const double e = edof_uca(geom, k, k);
            table.add_row({d, d / ctx.wavelength(), double(k), e, capa, std::abs(e - capa) / capa});
            uca.x.push_back(k);
            uca.y.push_back(e);
            ref.x.push_back(k);
            ref.y.push_back(capa);
        }
        plot.series.push_back(std::move(uca));
        plot.series.push_back(std::move(ref));
    }
    return {std::move(table), {std::move(plot)}, 0, 0.0};
}

// Gray-coded QPSK bit errors between two constellation indices.
int bit_errors(int a, int b) { return __builtin_popcount(static_cast<unsigned>(a ^ b)); }

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

ExperimentResult run_link_ber(const ExperimentConfig& cfg)
{
    const auto ctx = WaveContext::at_frequency(cfg.frequency_hz);
    ResultTable table({{"distance", "m"},
                       {"modes", "count"},
                       {"snr", "db"},
                       {"symbols", "count"},
                       {"ber_sim", "1"},
                       {"ber_theory", "1"},
                       {"ser_sim", "1"}});
    PlotSpec plot{"QPSK BER over OAM modes", "SNR per mode [dB]", "log10 BER", false, {}};
    std::mt19937_64 rng(cfg.seed);
    const double total_power = 1.0;
    for (double d : cfg.distances_m) {
        for (int n : cfg.capa_modes) {
            const OamModeSet modes = OamModeSet::centered(n);
            const auto geom = LinkGeometry::coaxial(ctx, cfg.tx_radius_m, cfg.rx_radius_m, d,
                                                    cfg.polarization,
                                                    capa_quadrature(cfg, ctx, modes));
            CouplingMatrix h = coupling_matrix(geom, modes, modes);
            if (cfg.scaling == GainScaling::Normalized) {
                const double scale = std::sqrt(n / coupling_strength(h));
                h.entries *= scale;
            }
            PlotSeries sim{"sim " + std::to_string(n) + " modes", {}, {}};
            PlotSeries theory{"theory " + std::to_string(n) + " modes", {}, {}};
            for (double s : cfg.snr_db) {
                const double snr = from_db(s);
                const AwgnLink link(h, total_power / (n * snr), total_power);
                const auto constellation = Constellation::qpsk(std::sqrt(link.per_mode_power()));
                std::uniform_int_distribution<int> pick(0, constellation.size() - 1);
                long long bit_err = 0, sym_err = 0;
                for (int t = 0; t < cfg.symbols; ++t) {
                    std::vector<int> sent(static_cast<std::size_t>(n));
                    Eigen::VectorXcd x(n);
                    for (int m = 0; m < n; ++m) {
                        sent[static_cast<std::size_t>(m)] = pick(rng);
                        x(m) = constellation.points()[static_cast<std::size_t>(
                            sent[static_cast<std::size_t>(m)])];
                    }
                    const auto det = equalize_and_detect(link, transmit(link, x, rng), constellation);
                    for (int m = 0; m < n; ++m) {
                        const int e = bit_errors(sent[static_cast<std::size_t>(m)],
                                                 det.symbols[static_cast<std::size_t>(m)]);
                        bit_err += e;
                        sym_err += e > 0;
                    }
                }
                double theory_ber = 0.0;
                for (double g : h.diagonal_gains())
                    theory_ber += q_function(std::sqrt(g * snr));
                theory_ber /= n;
                const double total_symbols = double(cfg.symbols) * n;
                const double ber = bit_err / (2.0 * total_symbols);
                table.add_row({d, double(n), s, total_symbols, ber, theory_ber,
                               sym_err / total_symbols});
                if (ber > 0) {
                    sim.x.push_back(s);
                    sim.y.push_back(std::log10(ber));
                }
                if (theory_ber > 0) {
                    theory.x.push_back(s);
                    theory.y.push_back(std::log10(theory_ber));
                }
            }
            plot.series.push_back(std::move(sim));
            plot.series.push_back(std::move(theory));
        }
    }
    return {std::move(table), {std::move(plot)}, 0, 0.0};
}

ExperimentResult run_convergence(const ExperimentConfig& cfg)
{
    const auto ctx = WaveContext::at_frequency(cfg.frequency_hz);
    ResultTable table({{"distance", "wavelengths"},
                       {"modes", "count"},
                       {"quadrature", "points"},
                       {"max_relative_change", "1"},
                       {"offdiag_ratio", "1"},
                       {"edof", "1"},
                       {"degraded", "flag"}});
    PlotSpec plot{"Quadrature convergence (Q vs 2Q)", "quadrature points",
                  "log10 max relative change", true, {}};
    for (double d : cfg.distances_m) {
        for (int n : cfg.capa_modes) {
            const OamModeSet modes = OamModeSet::centered(n);
            PlotSeries ps{"d=" + format_number(d / ctx.wavelength()) + "lambda, " +
                              std::to_string(n) + " modes",
                          {}, {}};
            for (int q : cfg.quadrature_sweep) {
                const auto geom = LinkGeometry::coaxial(ctx, cfg.tx_radius_m, cfg.rx_radius_m, d,
                                                        cfg.polarization, q);
                const CouplingMatrix h = coupling_matrix(geom, modes, modes);
                const CouplingMatrix h2 =
                    coupling_matrix(geom.with_quadrature(2 * q, 2 * q), modes, modes);
                const double scale = h2.entries.cwiseAbs().maxCoeff();
                const double change = (h.entries - h2.entries).cwiseAbs().maxCoeff() / scale;
                Eigen::MatrixXcd off = h.entries;
                off.diagonal().setZero();
                const double offdiag =
                    off.cwiseAbs().maxCoeff() / h.entries.diagonal().cwiseAbs().maxCoeff();
                table.add_row({d / ctx.wavelength(), double(n), double(q), change, offdiag,
                               edof(geom), h.degraded ? 1.0 : 0.0});
                ps.x.push_back(q);
                ps.y.push_back(std::log10(std::max(change, 1e-17)));
            }
            plot.series.push_back(std::move(ps));
        }
    }
    return {std::move(table), {std::move(plot)}, 0, 0.0};
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result = [&] {
        switch (cfg.experiment) {
        case ExperimentKind::SeVsSnr: return run_se_vs_snr(cfg);
        case ExperimentKind::SeVsDistance: return run_se_vs_distance(cfg);
        case ExperimentKind::EdofVsDistance: return run_edof_vs_distance(cfg);
        case ExperimentKind::EdofVsElements: return run_edof_vs_elements(cfg);
        case ExperimentKind::LinkBer: return run_link_ber(cfg);
        case ExperimentKind::Convergence: return run_convergence(cfg);
        }
        throw std::logic_error("unhandled experiment kind");
    }();
    result.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    auto& t = result.table;
    t.add_metadata("tool", std::string("oamcapa ") + OAMCAPA_VERSION);
    for (auto& [key, value] : cfg.describe())
        t.add_metadata("config." + key, value);
    if (result.bound_violations > 0)
        t.add_metadata("bound_violations", std::to_string(result.bound_violations));
    // The only field that varies between identical runs.
    t.add_metadata("timestamp",
                   utc_timestamp() + "; runtime_s=" + format_number(result.runtime_s));
    return result;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg,
                                                 const ExperimentResult& result)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + cfg.output_dir.string() +
                                 ": " + ec.message());
    std::vector<fs::path> written;
    const std::string stem = to_string(cfg.experiment);
    const fs::path csv = cfg.output_dir / (stem + ".csv");
    {
        std::ofstream out(csv, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + csv.string());
        result.table.write_csv(out);
        if (!out)
            throw std::runtime_error("write failed: " + csv.string());
    }
    written.push_back(csv);
    if (cfg.plot) {
        for (std::size_t i = 0; i < result.plots.size(); ++i) {
            const fs::path svg =
                cfg.output_dir /
                (stem + (result.plots.size() > 1 ? "_" + std::to_string(i + 1) : "") + ".svg");
            std::ofstream out(svg, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + svg.string());
            write_svg(result.plots[i], out);
            written.push_back(svg);
        }
    }
    return written;
}

} // namespace oamcapa
