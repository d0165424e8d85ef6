// SPDX-License-Identifier: Apache-2.0
//
// Experiment defaults and the INI config loader.

#include "oamcapa/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace oamcapa {

namespace pt = boost::property_tree;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field))
{
}

const char* to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::SeVsSnr: return "se_vs_snr";
    case ExperimentKind::SeVsDistance: return "se_vs_distance";
    case ExperimentKind::EdofVsDistance: return "edof_vs_distance";
    case ExperimentKind::EdofVsElements: return "edof_vs_elements";
    case ExperimentKind::LinkBer: return "link_ber";
    case ExperimentKind::Convergence: return "convergence";
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name)
{
    for (auto kind : {ExperimentKind::SeVsSnr, ExperimentKind::SeVsDistance,
                      ExperimentKind::EdofVsDistance, ExperimentKind::EdofVsElements,
                      ExperimentKind::LinkBer, ExperimentKind::Convergence})
        if (name == to_string(kind))
            return kind;
    throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

namespace {

std::vector<double> linear_range(double start, double step, double stop)
{
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i)
        out.push_back(start + i * step);
    return out;
}

std::vector<double> log_range(double start, double stop, int count)
{
    std::vector<double> out;
    if (count == 1)
        return {start};
    const double a = std::log10(start), b = std::log10(stop);
    for (int i = 0; i < count; ++i)
        out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
    return out;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& text)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "'" + text + "' is not a number");
    }
}

int parse_int(const std::string& field, const std::string& text)
{
    const double v = parse_double(field, text);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError(field, "'" + text + "' is not an integer");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    return out;
}

// "a, b, c", "start:step:stop" (inclusive) or "log:start:stop:count".
std::vector<double> parse_double_list(const std::string& field, const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        if (item.empty())
            continue;
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_double(field, parts[0]));
        } else if (parts.size() == 3) {
            const double step = parse_double(field, parts[1]);
            if (!(step > 0))
                throw ConfigError(field, "range step must be positive");
            auto r = linear_range(parse_double(field, parts[0]), step,
                                  parse_double(field, parts[2]));
            out.insert(out.end(), r.begin(), r.end());
        } else if (parts.size() == 4 && parts[0] == "log") {
            const double a = parse_double(field, parts[1]), b = parse_double(field, parts[2]);
            const int n = parse_int(field, parts[3]);
            if (!(a > 0) || !(b > 0) || n < 1)
                throw ConfigError(field, "log range needs positive bounds and count");
            auto r = log_range(a, b, n);
            out.insert(out.end(), r.begin(), r.end());
        } else {
            throw ConfigError(field, "cannot parse list item '" + item + "'");
        }
    }
    if (out.empty())
        throw ConfigError(field, "list must not be empty");
    return out;
}

std::vector<int> parse_int_list(const std::string& field, const std::string& text,
                                bool allow_half_wavelength = false)
{
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        if (item.empty())
            continue;
        if (allow_half_wavelength && item == "half_wavelength")
            out.push_back(kHalfWavelengthElements);
        else
            out.push_back(parse_int(field, item));
    }
    if (out.empty())
        throw ConfigError(field, "list must not be empty");
    return out;
}

bool parse_bool(const std::string& field, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(field, "'" + text + "' is not a boolean");
}

template <typename T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        if constexpr (std::is_same_v<T, double>)
            out += format_number(v[i]);
        else
            out += std::to_string(v[i]);
    }
    return out;
}

std::vector<double> scaled(std::vector<double> v, double factor)
{
    for (double& x : v)
        x *= factor;
    return v;
}

const double kReferenceWavelength = kSpeedOfLight / 5.8e9;

void apply_scaling_defaults(ExperimentConfig& cfg)
{
    const bool raw = cfg.scaling == GainScaling::Raw;
    switch (cfg.experiment) {
    case ExperimentKind::SeVsSnr:
        cfg.snr_db = raw ? linear_range(-80, 5, -20) : linear_range(-10, 2.5, 30);
        break;
    case ExperimentKind::SeVsDistance:
        cfg.snr_db = raw ? std::vector<double>{-60} : std::vector<double>{10};
        break;
    case ExperimentKind::LinkBer:
        cfg.snr_db = raw ? linear_range(-70, 2.5, -52.5) : linear_range(0, 2, 12);
        break;
    default:
        break;
    }
}

} // namespace

double ExperimentConfig::wavelength() const { return kSpeedOfLight / frequency_hz; }

ExperimentConfig default_config(ExperimentKind kind)
{
    const double lam = kReferenceWavelength;
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.frequency_hz = 5.8e9;
    cfg.tx_radius_m = cfg.rx_radius_m = 20 * lam;
    switch (kind) {
    case ExperimentKind::SeVsSnr:
        cfg.distances_m = {50 * lam};
        cfg.capa_modes = {4, 8};
        cfg.uca_elements = {4, 8, kHalfWavelengthElements};
        break;
    case ExperimentKind::SeVsDistance:
        cfg.distances_m = scaled(log_range(10, 1e4, 31), lam);
        cfg.capa_modes = {8, 16};
        cfg.uca_elements = {4, 8, kHalfWavelengthElements};
        break;
    case ExperimentKind::EdofVsDistance:
        cfg.frequencies_hz = {5.8e9, 24e9};
        cfg.radii_m = {10 * lam, 20 * lam};
        cfg.distances_m = scaled(log_range(10, 2e4, 25), lam);
        cfg.polarization = Polarization::LinearX;
        break;
    case ExperimentKind::EdofVsElements:
        cfg.distances_m = {10 * lam, 100 * lam};
        cfg.element_counts = {1, 2, 4, 8, 16, 32, 48, 64, 96, 128, 160, 192, 224, 256, 320, 384, 512};
        cfg.polarization = Polarization::LinearX;
        break;
    case ExperimentKind::LinkBer:
        cfg.distances_m = {50 * lam};
        cfg.capa_modes = {4};
        break;
    case ExperimentKind::Convergence:
        cfg.distances_m = {10 * lam, 50 * lam, 1000 * lam};
        cfg.capa_modes = {16};
        cfg.quadrature_sweep = {32, 64, 128, 256, 512};
        break;
    }
    apply_scaling_defaults(cfg);
    return cfg;
}

void ExperimentConfig::validate() const
{
    auto positive = [](const char* field, double v) {
        if (!std::isfinite(v) || !(v > 0))
            throw ConfigError(field, "must be positive and finite");
    };
    auto all_positive = [&](const char* field, const std::vector<double>& v, bool required) {
        if (required && v.empty())
            throw ConfigError(field, "sweep must not be empty");
        for (double x : v)
            positive(field, x);
    };
    positive("physics.frequency_hz", frequency_hz);
    positive("physics.tx_radius_m", tx_radius_m);
    positive("physics.rx_radius_m", rx_radius_m);
    all_positive("sweep.distance_m", distances_m, true);
    const bool needs_snr = experiment == ExperimentKind::SeVsSnr ||
                           experiment == ExperimentKind::SeVsDistance ||
                           experiment == ExperimentKind::LinkBer;
    if (needs_snr && snr_db.empty())
        throw ConfigError("sweep.snr_db", "sweep must not be empty");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw ConfigError("sweep.snr_db", "values must be finite");
    const bool needs_modes = experiment == ExperimentKind::SeVsSnr ||
                             experiment == ExperimentKind::SeVsDistance ||
                             experiment == ExperimentKind::LinkBer ||
                             experiment == ExperimentKind::Convergence;
    if (needs_modes && capa_modes.empty())
        throw ConfigError("sweep.capa_modes", "sweep must not be empty");
    for (int m : capa_modes)
        if (m < 1)
            throw ConfigError("sweep.capa_modes", "mode counts must be >= 1");
    for (int k : uca_elements)
        if (k < 0)
            throw ConfigError("sweep.uca_elements", "element counts must be >= 1 or half_wavelength");
    if (experiment == ExperimentKind::EdofVsDistance) {
        all_positive("physics.frequencies_hz", frequencies_hz, true);
        all_positive("sweep.radii_m", radii_m, true);
    }
    if (experiment == ExperimentKind::EdofVsElements) {
        if (element_counts.empty())
            throw ConfigError("sweep.element_counts", "sweep must not be empty");
        for (int k : element_counts)
            if (k < 1)
                throw ConfigError("sweep.element_counts", "element counts must be >= 1");
    }
    if (experiment == ExperimentKind::Convergence) {
        if (quadrature_sweep.empty())
            throw ConfigError("sweep.quadrature", "sweep must not be empty");
        for (int q : quadrature_sweep)
            if (q < RingAperture::kMinQuadrature)
                throw ConfigError("sweep.quadrature", "values must be >= 8");
    }
    if (quadrature != 0 && quadrature < RingAperture::kMinQuadrature)
        throw ConfigError("physics.quadrature", "must be 0 (automatic) or >= 8");
    if (experiment == ExperimentKind::LinkBer && symbols < 1)
        throw ConfigError("experiment.symbols", "must be >= 1");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::describe() const
{
    std::vector<std::pair<std::string, std::string>> out = {
        {"experiment", to_string(experiment)},
        {"frequency_hz", format_number(frequency_hz)},
        {"tx_radius_m", format_number(tx_radius_m)},
        {"rx_radius_m", format_number(rx_radius_m)},
        {"distance_m", join(distances_m)},
        {"polarization", to_string(polarization)},
        {"quadrature", quadrature == 0 ? "auto" : std::to_string(quadrature)},
        {"scaling", scaling == GainScaling::Raw ? "raw" : "normalized"},
        {"rayleigh_dimension",
         rayleigh_dimension == ApertureDimension::Diameter ? "diameter" : "radius"},
        {"seed", std::to_string(seed)},
    };
    if (!snr_db.empty())
        out.emplace_back("snr_db", join(snr_db));
    if (!capa_modes.empty())
        out.emplace_back("capa_modes", join(capa_modes));
    if (!uca_elements.empty())
        out.emplace_back("uca_elements", join(uca_elements) + " (0 = half_wavelength)");
    if (!frequencies_hz.empty())
        out.emplace_back("frequencies_hz", join(frequencies_hz));
    if (!radii_m.empty())
        out.emplace_back("radii_m", join(radii_m));
    if (!element_counts.empty())
        out.emplace_back("element_counts", join(element_counts));
    if (!quadrature_sweep.empty())
        out.emplace_back("quadrature_sweep", join(quadrature_sweep));
    if (experiment == ExperimentKind::LinkBer)
        out.emplace_back("symbols", std::to_string(symbols));
    return out;
}

namespace {

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o)
{
    if (o.output_dir)
        cfg.output_dir = *o.output_dir;
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.quadrature)
        cfg.quadrature = *o.quadrature;
    if (o.plot)
        cfg.plot = *o.plot;
}

ExperimentConfig from_tree(const pt::ptree& tree, const ConfigOverrides& overrides)
{
    static const std::map<std::string, std::set<std::string>> known = {
        {"experiment", {"name", "seed", "output", "plot", "scaling", "symbols"}},
        {"physics",
         {"frequency_hz", "frequencies_hz", "tx_radius_m", "tx_radius_wavelengths", "rx_radius_m",
          "rx_radius_wavelengths", "polarization", "quadrature", "rayleigh_dimension"}},
        {"sweep",
         {"distance_m", "distance_wavelengths", "snr_db", "capa_modes", "uca_elements",
          "radii_m", "radii_wavelengths", "element_counts", "quadrature"}},
    };
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end())
            throw ConfigError(section, "unknown config section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key))
                throw ConfigError(section + "." + key, "unknown config key");
    }
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.')))
            return trim(*v);
        return std::nullopt;
    };

    std::optional<ExperimentKind> kind = overrides.experiment;
    if (!kind) {
        if (auto name = get("experiment.name"))
            kind = parse_experiment(*name);
        else
            throw ConfigError("experiment.name", "no experiment selected");
    }
    GainScaling scaling = GainScaling::Raw;
    if (auto s = get("experiment.scaling")) {
        if (*s == "raw")
            scaling = GainScaling::Raw;
        else if (*s == "normalized")
            scaling = GainScaling::Normalized;
        else
            throw ConfigError("experiment.scaling", "expected raw or normalized");
    }
    if (overrides.scaling)
        scaling = *overrides.scaling;

    ExperimentConfig cfg = default_config(*kind);
    if (scaling != cfg.scaling) {
        cfg.scaling = scaling;
        apply_scaling_defaults(cfg);
    }

    if (auto v = get("physics.frequency_hz"))
        cfg.frequency_hz = parse_double("physics.frequency_hz", *v);
    if (!(cfg.frequency_hz > 0) || !std::isfinite(cfg.frequency_hz))
        throw ConfigError("physics.frequency_hz", "must be positive and finite");
    const double lam = cfg.wavelength();

    // Lengths given in wavelengths are rescaled against the configured
    // frequency; defaults were set against 5.8 GHz.
    const double rescale = lam / kReferenceWavelength;
    cfg.tx_radius_m *= rescale;
    cfg.rx_radius_m *= rescale;
    cfg.distances_m = scaled(cfg.distances_m, rescale);
    cfg.radii_m = scaled(cfg.radii_m, rescale);

    auto length = [&](const std::string& base, double& target) {
        const auto m = get(base + "_m");
        const auto wl = get(base + "_wavelengths");
        if (m && wl)
            throw ConfigError(base, "give either _m or _wavelengths, not both");
        if (m)
            target = parse_double(base + "_m", *m);
        if (wl)
            target = parse_double(base + "_wavelengths", *wl) * lam;
    };
    auto lengths = [&](const std::string& base, std::vector<double>& target) {
        const auto m = get(base + "_m");
        const auto wl = get(base + "_wavelengths");
        if (m && wl)
            throw ConfigError(base, "give either _m or _wavelengths, not both");
        if (m)
            target = parse_double_list(base + "_m", *m);
        if (wl)
            target = scaled(parse_double_list(base + "_wavelengths", *wl), lam);
    };
    length("physics.tx_radius", cfg.tx_radius_m);
    length("physics.rx_radius", cfg.rx_radius_m);
    lengths("sweep.distance", cfg.distances_m);
    lengths("sweep.radii", cfg.radii_m);

    if (auto v = get("physics.frequencies_hz"))
        cfg.frequencies_hz = parse_double_list("physics.frequencies_hz", *v);
    if (auto v = get("physics.polarization")) {
        try {
            cfg.polarization = parse_polarization(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("physics.polarization", e.what());
        }
    }
    if (auto v = get("physics.quadrature"))
        cfg.quadrature = *v == "auto" ? 0 : parse_int("physics.quadrature", *v);
    if (auto v = get("physics.rayleigh_dimension")) {
        if (*v == "diameter")
            cfg.rayleigh_dimension = ApertureDimension::Diameter;
        else if (*v == "radius")
            cfg.rayleigh_dimension = ApertureDimension::Radius;
        else
            throw ConfigError("physics.rayleigh_dimension", "expected diameter or radius");
    }
    if (auto v = get("sweep.snr_db"))
        cfg.snr_db = parse_double_list("sweep.snr_db", *v);
    if (auto v = get("sweep.capa_modes"))
        cfg.capa_modes = parse_int_list("sweep.capa_modes", *v);
    if (auto v = get("sweep.uca_elements"))
        cfg.uca_elements = parse_int_list("sweep.uca_elements", *v, true);
    if (auto v = get("sweep.element_counts"))
        cfg.element_counts = parse_int_list("sweep.element_counts", *v);
    if (auto v = get("sweep.quadrature"))
        cfg.quadrature_sweep = parse_int_list("sweep.quadrature", *v);
    if (auto v = get("experiment.seed")) {
        const double s = parse_double("experiment.seed", *v);
        if (s < 0 || s != std::floor(s))
            throw ConfigError("experiment.seed", "must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("experiment.symbols"))
        cfg.symbols = parse_int("experiment.symbols", *v);
    if (auto v = get("experiment.output"))
        cfg.output_dir = *v;
    if (auto v = get("experiment.plot"))
        cfg.plot = parse_bool("experiment.plot", *v);

    apply_overrides(cfg, overrides);
    cfg.validate();
    return cfg;
}

} // namespace

ExperimentConfig load_config_string(const std::string& text, const ConfigOverrides& overrides)
{
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
    }
    return from_tree(tree, overrides);
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_config_string(buffer.str(), overrides);
}

ExperimentConfig resolve_config(ExperimentKind kind, const ConfigOverrides& overrides)
{
    ConfigOverrides o = overrides;
    o.experiment = kind;
    return load_config_string("", o);
}

} // namespace oamcapa
