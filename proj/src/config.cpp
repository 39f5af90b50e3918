#include "srled/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "srled/errors.hpp"
#include "srled/presets.hpp"

namespace srled {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError(std::string(key), "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

int to_int(std::string_view key, std::string_view text) {
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

void flatten(const YAML::Node& node, const std::string& prefix, std::vector<Override>& out) {
    if (node.IsMap()) {
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            flatten(kv.second, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (node.IsSequence()) {
        std::string joined;
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (i) joined += ',';
            joined += node[i].as<std::string>();
        }
        out.emplace_back(prefix, joined);
    } else if (node.IsScalar()) {
        out.emplace_back(prefix, node.as<std::string>());
    }
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
    text = trim(text);
    if (text.empty()) return {};
    if (text.starts_with("log:")) {
        std::vector<std::string_view> parts;
        std::string_view rest = text.substr(4);
        while (true) {
            const auto colon = rest.find(':');
            parts.push_back(rest.substr(0, colon));
            if (colon == std::string_view::npos) break;
            rest = rest.substr(colon + 1);
        }
        if (parts.size() != 3) throw ValidationError("grid", "expected log:lo:hi:points");
        return log_grid(to_double("grid", parts[0]), to_double("grid", parts[1]),
                        to_int("grid", parts[2]));
    }
    std::vector<double> values;
    while (!text.empty()) {
        const auto comma = text.find(',');
        values.push_back(to_double("grid", text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return values;
}

void apply_override(RunConfig& c, std::string_view key, std::string_view value) {
    const std::string k(trim(key));
    auto& d = c.device;
    auto& s = c.solver;
    if (k == "device.lambda0") d.lambda0 = to_double(k, value);
    else if (k == "device.n_r") d.n_r = to_double(k, value);
    else if (k == "device.dipole") d.dipole = to_double(k, value);
    else if (k == "device.n_c") d.n_c = to_double(k, value);
    else if (k == "device.N0") d.N0 = to_int(k, value);
    else if (k == "device.gamma_perp") d.gamma_perp = to_double(k, value);
    else if (k == "device.gamma_par") d.gamma_par = to_double(k, value);
    else if (k == "device.kappa") d.kappa = to_double(k, value);
    else if (k == "device.f") d.f = to_double(k, value);
    else if (k == "solver.ne_tol") s.ne_tol = to_double(k, value);
    else if (k == "solver.quad_rel_tol") s.quad_rel_tol = to_double(k, value);
    else if (k == "solver.max_outer_iters") s.max_outer_iters = to_int(k, value);
    else if (k == "solver.max_root_iters") s.max_root_iters = to_int(k, value);
    else if (k == "solver.max_intervals") s.max_intervals = to_int(k, value);
    else if (k == "solver.damping") s.damping = to_double(k, value);
    else if (k == "solver.backend") s.backend = quad_backend_from_string(trim(value));
    else if (k == "pf.model") c.pf.kind = pf_kind_from_string(trim(value));
    else if (k == "pf.narrowness_threshold") s.narrowness_threshold = to_double(k, value);
    else if (k == "sweep.pump") c.pump_grid = parse_grid(value);
    else if (k == "spectrum.pump") c.spectrum_pump = to_double(k, value);
    else if (k == "spectrum.points") c.spectrum_points = to_int(k, value);
    else if (k == "spectrum.span") c.spectrum_span = to_double(k, value);
    else if (k == "run.threads") c.threads = to_int(k, value);
    else throw ValidationError(k, "unknown configuration key");
}

Override parse_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ValidationError("set", "expected key=value, got '" + std::string(assignment) + "'");
    }
    return {std::string(trim(assignment.substr(0, eq))),
            std::string(trim(assignment.substr(eq + 1)))};
}

std::vector<Override> parse_config_text(std::string_view text) {
    std::vector<Override> out;
    try {
        flatten(YAML::Load(std::string(text)), "", out);
    } catch (const YAML::Exception& e) {
        throw ValidationError("config", e.what());
    }
    return out;
}

std::vector<Override> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace srled
