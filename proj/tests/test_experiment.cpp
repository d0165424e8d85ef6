// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/experiment.hpp"
#include "oamcapa/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace oamcapa;
namespace fs = std::filesystem;

namespace {

const double lam58 = kSpeedOfLight / 5.8e9;

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("oamcapa_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string csv_text(const ResultTable& t)
{
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

std::string without_timestamp(const std::string& csv)
{
    std::istringstream is(csv);
    std::string line, out;
    while (std::getline(is, line))
        if (line.rfind("# timestamp", 0) != 0)
            out += line + "\n";
    return out;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args)
{
    const int status = std::system((std::string(OAMCAPA_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Rows of one series, in table order.
std::vector<std::size_t> series_rows(const ResultTable& t, const std::string& label)
{
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < t.rows().size(); ++i)
        if (t.text(i, "series") == label)
            rows.push_back(i);
    return rows;
}

const char* small_se_config = R"(
[experiment]
name = se_vs_snr
seed = 3
[physics]
tx_radius_wavelengths = 4
rx_radius_wavelengths = 4
[sweep]
distance_wavelengths = 20
snr_db = -60:10:-30
capa_modes = 4, 8
uca_elements = 4, 8, half_wavelength
)";

} // namespace

TEST_CASE("experiment names")
{
    for (auto k : {ExperimentKind::SeVsSnr, ExperimentKind::SeVsDistance,
                   ExperimentKind::EdofVsDistance, ExperimentKind::EdofVsElements,
                   ExperimentKind::LinkBer, ExperimentKind::Convergence})
        CHECK(parse_experiment(to_string(k)) == k);
    CHECK_THROWS_AS(parse_experiment("fig7"), ConfigError);
}

TEST_CASE("default configs describe the reference setup")
{
    const auto se = default_config(ExperimentKind::SeVsSnr);
    CHECK(se.frequency_hz == 5.8e9);
    CHECK(se.tx_radius_m / lam58 == doctest::Approx(20.0));
    CHECK(se.rx_radius_m / lam58 == doctest::Approx(20.0));
    CHECK(se.distances_m.at(0) / lam58 == doctest::Approx(50.0));
    CHECK(se.capa_modes == std::vector<int>{4, 8});
    CHECK(se.uca_elements == std::vector<int>{4, 8, kHalfWavelengthElements});
    CHECK_NOTHROW(se.validate());

    const auto ed = default_config(ExperimentKind::EdofVsDistance);
    CHECK(ed.frequencies_hz == std::vector<double>{5.8e9, 24e9});
    for (auto k : {ExperimentKind::SeVsDistance, ExperimentKind::EdofVsElements,
                   ExperimentKind::LinkBer, ExperimentKind::Convergence})
        CHECK_NOTHROW(default_config(k).validate());
}

TEST_CASE("config parsing")
{
    SUBCASE("sections, lists and wavelength units")
    {
        const auto cfg = load_config_string(small_se_config);
        CHECK(cfg.experiment == ExperimentKind::SeVsSnr);
        CHECK(cfg.seed == 3);
        CHECK(cfg.tx_radius_m / lam58 == doctest::Approx(4.0));
        CHECK(cfg.distances_m.at(0) / lam58 == doctest::Approx(20.0));
        CHECK(cfg.snr_db == std::vector<double>{-60, -50, -40, -30});
        CHECK(cfg.uca_elements == std::vector<int>{4, 8, kHalfWavelengthElements});
    }
    SUBCASE("log spacing and metre lengths")
    {
        const auto cfg = load_config_string("[experiment]\nname = se_vs_distance\n"
                                            "[sweep]\ndistance_m = log:1:100:3\n");
        REQUIRE(cfg.distances_m.size() == 3);
        CHECK(cfg.distances_m[1] == doctest::Approx(10.0));
    }
    SUBCASE("wavelength defaults follow the frequency")
    {
        const auto cfg = load_config_string("[experiment]\nname = se_vs_snr\n"
                                            "[physics]\nfrequency_hz = 24e9\n");
        CHECK(cfg.tx_radius_m / (kSpeedOfLight / 24e9) == doctest::Approx(20.0));
    }
    SUBCASE("overrides win over the file")
    {
        ConfigOverrides o;
        o.seed = 77;
        o.scaling = GainScaling::Normalized;
        o.quadrature = 128;
        const auto cfg = load_config_string(small_se_config, o);
        CHECK(cfg.seed == 77);
        CHECK(cfg.scaling == GainScaling::Normalized);
        CHECK(cfg.quadrature == 128);
    }
}

TEST_CASE("shipped configs load")
{
    int loaded = 0;
    for (const auto& entry : fs::directory_iterator(OAMCAPA_CONFIG_DIR)) {
        if (entry.path().extension() != ".ini")
            continue;
        CAPTURE(entry.path().string());
        const auto cfg = load_config(entry.path());
        CHECK(to_string(cfg.experiment) == entry.path().stem().string());
        ++loaded;
    }
    CHECK(loaded == 6);
}

TEST_CASE("config errors name the field")
{
    const auto field_of = [](const std::string& text) {
        try {
            load_config_string(text);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[physics]\nfrequency = 1\n") ==
          "physics.frequency");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[extras]\nx = 1\n") == "extras");
    CHECK(field_of("[physics]\nfrequency_hz = 1e9\n") == "experiment.name");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[physics]\nfrequency_hz = -5\n") ==
          "physics.frequency_hz");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[physics]\ntx_radius_m = -1\n") ==
          "physics.tx_radius_m");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[sweep]\nsnr_db = \n") == "sweep.snr_db");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[sweep]\ncapa_modes = 4, x\n") ==
          "sweep.capa_modes");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[physics]\npolarization = circular\n") ==
          "physics.polarization");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[physics]\nquadrature = 3\n") ==
          "physics.quadrature");
    CHECK(field_of("[experiment]\nname = se_vs_snr\n[sweep]\ndistance_m = 1\n"
                   "distance_wavelengths = 2\n") == "sweep.distance");
    CHECK_THROWS_AS(load_config(scratch("missing") / "none.ini"), ConfigError);

    ExperimentConfig cfg = default_config(ExperimentKind::SeVsSnr);
    cfg.distances_m.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("CSV layout")
{
    ResultTable t({{"series", "", true}, {"distance", "m"}, {"se", "bpshz"}});
    t.add_metadata("config.seed", "1");
    t.add_row({std::string("CAPA-4, raw"), 0.25, 1.0 / 3.0});
    t.add_row({std::string("say \"hi\""), 2.0, 0.0});
    CHECK_THROWS_AS(t.add_row({1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(t.add_row({std::string("x"), 2.0}), std::invalid_argument);
    CHECK(t.number(0, "distance_m") == 0.25);
    CHECK(t.number(0, "se") == 1.0 / 3.0);
    CHECK_THROWS_AS(t.column_index("nope"), std::out_of_range);

    const std::string csv = csv_text(t);
    CHECK(csv ==
          "# config.seed = 1\r\n"
          "series,distance_m,se_bpshz\r\n"
          "\"CAPA-4, raw\",0.25,0.3333333333333333\r\n"
          "\"say \"\"hi\"\"\",2,0\r\n");

    for (double v : {1.0 / 3.0, 6.02214076e23, -1e-300, 0.1 + 0.2}) {
        const std::string s = format_number(v);
        double back = 0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
}

TEST_CASE("SE experiment: orderings, bounds and determinism")
{
    auto cfg = load_config_string(small_se_config);
    cfg.plot = false;
    const auto a = run_experiment(cfg);
    const auto& t = a.table;
    REQUIRE(t.rows().size() == 5 * 4);

    const auto c4 = series_rows(t, "CAPA-4"), c8 = series_rows(t, "CAPA-8");
    REQUIRE(c4.size() == 4);
    for (std::size_t i = 0; i < c4.size(); ++i) {
        CHECK(t.number(c8[i], "se") > t.number(c4[i], "se"));
        CHECK(t.number(c8[i], "se") <= t.number(c8[i], "se_jensen_bound") + 1e-9);
    }
    const auto dense = series_rows(t, "UCA-51 (lambda/2)");
    REQUIRE(dense.size() == 4);
    const auto u8 = series_rows(t, "UCA-8"), u4 = series_rows(t, "UCA-4");
    for (std::size_t i = 0; i < dense.size(); ++i) {
        CHECK(t.number(dense[i], "se") > t.number(u8[i], "se"));
        CHECK(t.number(u8[i], "se") > t.number(u4[i], "se"));
    }

    int flagged = 0;
    for (std::size_t i = 0; i < t.rows().size(); ++i) {
        const bool ok = t.number(i, "se") <= t.number(i, "se_upper_bound") + 1e-9;
        CHECK(t.number(i, "bound_ok") == (ok ? 1.0 : 0.0));
        flagged += !ok;
    }
    CHECK(flagged == a.bound_violations);

    const auto b = run_experiment(cfg);
    CHECK(without_timestamp(csv_text(a.table)) == without_timestamp(csv_text(b.table)));
    CHECK(csv_text(a.table).find("# config.seed = 3") != std::string::npos);
}

TEST_CASE("SE against distance decreases")
{
    auto cfg = load_config_string("[experiment]\nname = se_vs_distance\n"
                                  "[physics]\ntx_radius_wavelengths = 3\nrx_radius_wavelengths = 3\n"
                                  "[sweep]\ndistance_wavelengths = log:10:1000:9\n"
                                  "capa_modes = 8, 16\nuca_elements = 8\nsnr_db = -60\n");
    const auto t = run_experiment(cfg).table;
    const auto c8 = series_rows(t, "CAPA-8"), c16 = series_rows(t, "CAPA-16");
    REQUIRE(c8.size() == 9);
    for (std::size_t i = 0; i < c8.size(); ++i) {
        CHECK(t.number(c16[i], "se") >= t.number(c8[i], "se"));
        if (i > 0) {
            CHECK(t.number(c8[i], "se") <= t.number(c8[i - 1], "se"));
            CHECK(t.number(c16[i], "se") <= t.number(c16[i - 1], "se"));
        }
    }
}

TEST_CASE("normalized scaling fixes gamma = M")
{
    auto cfg = load_config_string(small_se_config, {.scaling = GainScaling::Normalized});
    const auto t = run_experiment(cfg).table;
    for (std::size_t i = 0; i < t.rows().size(); ++i)
        CHECK(t.number(i, "coupling_strength") == doctest::Approx(t.number(i, "modes")));
}

TEST_CASE("EDoF experiments")
{
    SUBCASE("UCA plateau is higher closer in")
    {
        auto cfg = load_config_string("[experiment]\nname = edof_vs_elements\n"
                                      "[physics]\ntx_radius_wavelengths = 5\nrx_radius_wavelengths = 5\n"
                                      "[sweep]\ndistance_wavelengths = 5, 50\n"
                                      "element_counts = 1, 4, 16, 64, 128\n");
        const auto t = run_experiment(cfg).table;
        REQUIRE(t.rows().size() == 10);
        CHECK(t.number(4, "edof_uca") > t.number(9, "edof_uca"));
        CHECK(t.number(4, "relative_gap") < 0.02);
        CHECK(t.number(9, "relative_gap") < 0.02);
    }
    SUBCASE("both bands are swept")
    {
        auto cfg = load_config_string("[experiment]\nname = edof_vs_distance\n"
                                      "[sweep]\nradii_wavelengths = 2\n"
                                      "distance_wavelengths = 5, 50\n");
        const auto t = run_experiment(cfg).table;
        REQUIRE(t.rows().size() == 4);
        CHECK(t.number(0, "frequency") == 5.8e9);
        CHECK(t.number(2, "frequency") == 24e9);
        CHECK(t.number(2, "edof") > t.number(0, "edof"));
    }
}

TEST_CASE("link and convergence experiments")
{
    auto ber = load_config_string("[experiment]\nname = link_ber\nsymbols = 2000\n"
                                  "[sweep]\nsnr_db = -60\n");
    const auto t = run_experiment(ber).table;
    REQUIRE(t.rows().size() == 1);
    CHECK(t.number(0, "ber_sim") >= 0.0);
    CHECK(t.number(0, "ber_sim") <= 0.5);

    auto conv = load_config_string("[experiment]\nname = convergence\n"
                                   "[physics]\ntx_radius_wavelengths = 2\nrx_radius_wavelengths = 2\n"
                                   "[sweep]\ndistance_wavelengths = 10\nquadrature = 8, 64\n");
    const auto c = run_experiment(conv).table;
    REQUIRE(c.rows().size() == 2);
    CHECK(c.number(0, "degraded") == 1.0);
    CHECK(c.number(1, "degraded") == 0.0);
    CHECK(c.number(1, "max_relative_change") < 1e-9);
}

TEST_CASE("output files")
{
    auto cfg = load_config_string(small_se_config);
    cfg.output_dir = scratch("out");
    const auto result = run_experiment(cfg);
    const auto files = write_outputs(cfg, result);
    REQUIRE(files.size() == 2);
    CHECK(files[0].filename() == "se_vs_snr.csv");
    CHECK(read_file(files[0]) == csv_text(result.table));
    const std::string svg = read_file(files[1]);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("CAPA-8") != std::string::npos);

    cfg.plot = false;
    fs::remove_all(cfg.output_dir);
    CHECK(write_outputs(cfg, result).size() == 1);

    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "x";
    cfg.output_dir = blocker / "sub";
    CHECK_THROWS_AS(write_outputs(cfg, result), std::runtime_error);
}

TEST_CASE("verification suite")
{
    SUBCASE("default run passes and reports JSON")
    {
        const auto report = verify_suite();
        CHECK(report.passed());
        CHECK(report.warnings.empty());
        const auto j = nlohmann::json::parse(report.to_json());
        CHECK(j["passed"] == true);
        CHECK(j["checks"].size() == report.checks.size());
        CHECK(report.to_text().find("[FAIL]") == std::string::npos);
    }
    SUBCASE("near-field sign error is caught")
    {
        VerifyOptions o;
        o.kernel = [](const WaveContext& ctx, const RealVec3& r, const RealVec3& s) -> Dyadic3 {
            // flips the sign of the 1/(k0 p)^2 term
            const RealVec3 p = r - s;
            const double u = 1.0 / (ctx.wavenumber() * p.norm());
            const Dyadic3 pp = (p * p.transpose() / p.squaredNorm()).cast<cdouble>();
            const Dyadic3 id = Dyadic3::Identity();
            const cdouble pre = cdouble(0, ctx.wavenumber() * ctx.impedance()) *
                                scalar_green(ctx, p);
            return pre * ((id - pp) + cdouble(0, u) * (id - 3.0 * pp) + u * u * (id - 3.0 * pp));
        };
        const auto report = verify_suite(o);
        CHECK_FALSE(report.passed());
        CHECK_FALSE(report.check("green_helmholtz_fd").passed);
        CHECK(report.check("green_far_field_decay").passed);
        CHECK(report.check("green_reciprocity").passed);
        CHECK(report.check("coupling_inverse_square").passed);
    }
    SUBCASE("coarse quadrature raises a warning")
    {
        VerifyOptions o;
        o.quadrature = 16;
        const auto report = verify_suite(o);
        CHECK_FALSE(report.warnings.empty());
    }
}

TEST_CASE("command line exit codes")
{
    const fs::path dir = scratch("cli");
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("run") == 1);
    CHECK(run_cli("run --experiment fig9") == 1);
    CHECK(run_cli("run --config " + (dir / "none.ini").string()) == 1);
    CHECK(run_cli("bogus") == 1);
    CHECK(run_cli("verify --report " + (dir / "verify.json").string()) == 1);
    fs::create_directories(dir);
    CHECK(run_cli("verify --report " + (dir / "verify.json").string()) == 0);
    CHECK(fs::exists(dir / "verify.json"));

    const fs::path ini = dir / "small.ini";
    std::ofstream(ini) << "[experiment]\nname = edof_vs_elements\n"
                          "[physics]\ntx_radius_wavelengths = 2\nrx_radius_wavelengths = 2\n"
                          "[sweep]\ndistance_wavelengths = 10\nelement_counts = 1, 8\n";
    CHECK(run_cli("run --config " + ini.string() + " --out " + (dir / "o").string()) == 0);
    CHECK(fs::exists(dir / "o" / "edof_vs_elements.csv"));
    CHECK(fs::exists(dir / "o" / "edof_vs_elements.svg"));
    CHECK(run_cli("run --config " + ini.string() + " --raw --normalized") == 1);
}
