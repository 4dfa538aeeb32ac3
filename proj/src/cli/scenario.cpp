#include "offnet/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace offnet::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {"schema_version", "name", "regime", "params", "free_ps",
                                             "p0", "max_steps", "tol", "step_size", "grid", "sweep",
                                             "output"};
const std::set<std::string> kParamKeys = {"n", "D0", "alpha", "beta", "pa", "pd", "gamma"};

double number_at(const json &obj, const char *key, const char *where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(std::string(where) + ": missing \"" + key + "\"");
    if (!it->is_number()) throw SchemaError(std::string(where) + ": \"" + key + "\" must be a number");
    return it->get<double>();
}

double number_or(const json &obj, const char *key, double fallback, const char *where) {
    if (!obj.contains(key)) return fallback;
    return number_at(obj, key, where);
}

std::size_t count_or(const json &obj, const char *key, std::size_t fallback, const char *where) {
    if (!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw SchemaError(std::string(where) + ": \"" + key + "\" must be a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

// Scalar broadcast to n entries, or an array of exactly n numbers.
Vector vector_field(const json &obj, const char *key, std::size_t n, std::optional<double> fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (!fallback) throw SchemaError(std::string("params: missing \"") + key + "\"");
        return Vector::Constant(static_cast<Eigen::Index>(n), *fallback);
    }
    if (it->is_number()) return Vector::Constant(static_cast<Eigen::Index>(n), it->get<double>());
    if (!it->is_array()) throw SchemaError(std::string("params: \"") + key + "\" must be a number or array");
    if (it->size() != n)
        throw SchemaError(std::string("params: \"") + key + "\" must have " + std::to_string(n) + " entries");
    Vector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!(*it)[i].is_number()) throw SchemaError(std::string("params: \"") + key + "\" entries must be numbers");
        v[static_cast<Eigen::Index>(i)] = (*it)[i].get<double>();
    }
    return v;
}

GameParameters parse_params(const json &p) {
    if (!p.is_object()) throw SchemaError("\"params\" must be an object");
    for (const auto &[k, _] : p.items())
        if (!kParamKeys.count(k)) throw SchemaError("params: unknown key \"" + k + "\"");

    std::size_t n = 1;
    if (p.contains("n")) {
        n = count_or(p, "n", 1, "params");
    } else if (p.contains("pa") && p.at("pa").is_array()) {
        n = p.at("pa").size();
    }
    if (n < 1) throw SchemaError("params: n must be at least 1");

    GameParameters g;
    g.n = n;
    g.D0 = number_at(p, "D0", "params");
    g.alpha = number_at(p, "alpha", "params");
    g.beta = number_or(p, "beta", 0.0, "params");
    g.pa = vector_field(p, "pa", n, std::nullopt);
    g.pd = vector_field(p, "pd", n, 0.0);
    g.gamma = vector_field(p, "gamma", n, 0.5);
    return g;
}

SweepAxis parse_sweep(const json &s, const GameParameters &params) {
    if (!s.is_object()) throw SchemaError("\"sweep\" must be an object");
    SweepAxis axis;
    if (!s.contains("parameter") || !s.at("parameter").is_string())
        throw SchemaError("sweep: \"parameter\" must be a string");
    axis.parameter = s.at("parameter").get<std::string>();
    axis.from = number_at(s, "from", "sweep");
    axis.to = number_at(s, "to", "sweep");
    axis.samples = count_or(s, "samples", 0, "sweep");
    if (!std::isfinite(axis.from) || !std::isfinite(axis.to)) throw SchemaError("sweep: range must be finite");
    if (axis.samples < 2) throw SchemaError("sweep: \"samples\" must be at least 2");
    try {
        (void)with_parameter(params, axis.parameter, axis.from);
    } catch (const SchemaError &e) {
        throw SchemaError(std::string("sweep: ") + e.what());
    }
    return axis;
}

} // namespace

double SweepAxis::value(std::size_t k) const {
    if (k + 1 == samples) return to;
    return from + (to - from) * static_cast<double>(k) / static_cast<double>(samples - 1);
}

const std::vector<std::string> &known_regimes() {
    static const std::vector<std::string> r = {"exante_single", "expost_single", "exante_multi",
                                               "expost_multi_n2", "mixed", "collusion",
                                               "collusion_metrics", "dynamics", "flow", "compare"};
    return r;
}

GameParameters with_parameter(const GameParameters &params, const std::string &name, double value) {
    GameParameters g = params;
    if (name == "D0") {
        g.D0 = value;
        return g;
    }
    if (name == "alpha") {
        g.alpha = value;
        return g;
    }
    if (name == "beta") {
        g.beta = value;
        return g;
    }
    static const std::regex indexed(R"(^(pa|pd|gamma)\[(\d+)\]$)");
    std::smatch m;
    if (!std::regex_match(name, m, indexed)) throw SchemaError("unknown parameter \"" + name + "\"");
    const std::size_t i = std::stoul(m[2].str());
    if (i >= g.n) throw SchemaError("parameter index out of range in \"" + name + "\"");
    const auto idx = static_cast<Eigen::Index>(i);
    if (m[1] == "pa") g.pa[idx] = value;
    else if (m[1] == "pd") g.pd[idx] = value;
    else g.gamma[idx] = value;
    return g;
}

Scenario parse_scenario(const json &doc) {
    if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");
    for (const auto &[k, _] : doc.items())
        if (!kTopLevelKeys.count(k)) throw SchemaError("unknown key \"" + k + "\"");

    Scenario s;
    s.source = doc;
    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer())
        throw SchemaError("\"schema_version\" must be an integer");
    s.schema_version = doc.at("schema_version").get<int>();
    if (s.schema_version != kSchemaVersion)
        throw SchemaError("unsupported schema_version " + std::to_string(s.schema_version));

    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw SchemaError("\"name\" must be a string");
        s.name = doc.at("name").get<std::string>();
    }
    if (!doc.contains("regime") || !doc.at("regime").is_string()) throw SchemaError("\"regime\" must be a string");
    s.regime = doc.at("regime").get<std::string>();
    bool known = false;
    for (const auto &r : known_regimes()) known = known || r == s.regime;
    if (!known) throw SchemaError("unknown regime \"" + s.regime + "\"");

    if (!doc.contains("params")) throw SchemaError("missing \"params\"");
    s.params = parse_params(doc.at("params"));

    s.free_ps = number_or(doc, "free_ps", 0.0, "scenario");
    if (doc.contains("p0")) {
        const auto &p0 = doc.at("p0");
        if (!p0.is_array() || p0.size() != 4) throw SchemaError("\"p0\" must be an array of 4 numbers");
        Price4 v;
        for (int i = 0; i < 4; ++i) {
            if (!p0[static_cast<std::size_t>(i)].is_number()) throw SchemaError("\"p0\" entries must be numbers");
            v[i] = p0[static_cast<std::size_t>(i)].get<double>();
        }
        s.p0 = v;
    }
    s.max_steps = count_or(doc, "max_steps", 0, "scenario");
    s.tol = number_or(doc, "tol", 0.0, "scenario");
    s.step_size = number_or(doc, "step_size", 0.0, "scenario");
    if (s.tol < 0 || s.step_size < 0) throw SchemaError("\"tol\" and \"step_size\" must be nonnegative");
    if (doc.contains("grid")) {
        const auto &g = doc.at("grid");
        if (!g.is_object()) throw SchemaError("\"grid\" must be an object");
        s.grid_resolution = count_or(g, "resolution", 401, "grid");
        if (s.grid_resolution < 3) throw SchemaError("grid: \"resolution\" must be at least 3");
    }
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) throw SchemaError("\"output\" must be a string");
        s.output = doc.at("output").get<std::string>();
    }

    require_valid(s.params);
    if (doc.contains("sweep")) s.sweep = parse_sweep(doc.at("sweep"), s.params);
    return s;
}

Scenario load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableFile("cannot read scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw UnreadableFile("cannot read scenario file " + path.string());
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error &e) {
        throw UnreadableFile("scenario file is not valid JSON: " + std::string(e.what()));
    }
    return parse_scenario(doc);
}

} // namespace offnet::cli
