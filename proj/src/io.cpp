#include "sapg/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sapg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    // Shortest representation that round-trips; deterministic for equal
    // doubles.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
}

namespace {

void write_vector_csv(const std::string& path, const Vector& v) {
    std::ostringstream os;
    for (double x : v) os << format_double(x) << "\n";
    write_text_file(path, os.str());
}

Vector read_vector_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Vector v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        v.push_back(std::stod(line));
    }
    return v;
}

}  // namespace

void write_instance(const std::string& dir, const Instance& instance) {
    fs::create_directories(dir);

    std::string text;
    text.reserve(instance.A.rows() * instance.A.cols() * 20);
    for (std::size_t i = 0; i < instance.A.rows(); ++i) {
        for (std::size_t j = 0; j < instance.A.cols(); ++j) {
            if (j) text += ",";
            text += format_double(instance.A(i, j));
        }
        text += "\n";
    }
    write_text_file(dir + "/A.csv", text);
    write_vector_csv(dir + "/b.csv", instance.b);
    write_vector_csv(dir + "/x_true.csv", instance.x_true);

    json spec;
    spec["m"] = instance.spec.m;
    spec["n"] = instance.spec.n;
    spec["spar"] = instance.spec.spar;
    spec["seed"] = instance.spec.seed;
    spec["noise_scale"] = instance.spec.noise_scale;
    spec["kind"] = to_string(instance.spec.kind);
    write_text_file(dir + "/spec.json", spec.dump(2) + "\n");
}

Instance read_instance(const std::string& dir) {
    const json spec = json::parse(read_text_file(dir + "/spec.json"));
    Instance inst;
    inst.spec.m = spec.at("m").get<int>();
    inst.spec.n = spec.at("n").get<int>();
    inst.spec.spar = spec.at("spar").get<double>();
    inst.spec.seed = spec.at("seed").get<std::uint64_t>();
    inst.spec.noise_scale = spec.at("noise_scale").get<double>();
    inst.spec.kind = instance_kind_from_string(spec.at("kind").get<std::string>());

    std::ifstream in(dir + "/A.csv");
    if (!in) throw std::runtime_error("cannot open " + dir + "/A.csv");
    Vector entries;
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) entries.push_back(std::stod(cell));
    }
    if (rows == 0 || entries.size() % rows != 0) {
        throw std::runtime_error("malformed A.csv in " + dir);
    }
    const std::size_t cols = entries.size() / rows;
    inst.A = DenseMatrix(rows, cols, std::move(entries));
    inst.b = read_vector_csv(dir + "/b.csv");
    inst.x_true = read_vector_csv(dir + "/x_true.csv");
    if (inst.b.size() != inst.A.rows() || inst.x_true.size() != inst.A.cols()) {
        throw std::runtime_error("instance files in " + dir + " have inconsistent sizes");
    }
    return inst;
}

void write_trace_csv(const std::string& path, const SolveTrace& trace) {
    std::ostringstream os;
    os << "k,mu,gamma,f_exact,f_smooth,residual,step_norm,backtracks,time_s\n";
    for (const auto& r : trace.rows) {
        os << r.k << "," << format_double(r.mu) << "," << format_double(r.gamma) << ","
           << format_double(r.f_exact) << "," << format_double(r.f_smooth) << ","
           << format_double(r.residual) << "," << format_double(r.step_norm) << ","
           << r.backtracks << "," << format_double(r.time_s) << "\n";
    }
    write_text_file(path, os.str());
}

void write_result_json(const std::string& path, const SolveResult& result) {
    json j;
    j["x_final"] = result.x_final;
    j["iterations"] = result.iterations;
    j["stop_reason"] = to_string(result.stop_reason);
    j["f_final"] = result.trace.rows.empty() ? 0.0 : result.trace.rows.back().f_exact;
    write_text_file(path, j.dump(2) + "\n");
}

namespace {

const char* kKnownKeys[] = {"mu0",  "gamma0",  "eta",         "alpha",
                            "sigma", "maxiter", "eps",         "zeta",
                            "extrapolate", "x0", "smoothed_residual"};

void apply_config_field(SolverConfig& cfg, const std::string& key, const json& value) {
    if (key == "mu0") cfg.mu0 = value.get<double>();
    else if (key == "gamma0") cfg.gamma0 = value.get<double>();
    else if (key == "eta") cfg.eta = value.get<double>();
    else if (key == "alpha") cfg.alpha = value.get<double>();
    else if (key == "sigma") cfg.sigma = value.get<double>();
    else if (key == "maxiter") cfg.maxiter = value.get<int>();
    else if (key == "eps") cfg.eps = value.get<double>();
    else if (key == "zeta") cfg.zeta = value.get<double>();
    else if (key == "extrapolate") cfg.extrapolate = value.get<bool>();
    else if (key == "smoothed_residual") cfg.smoothed_residual = value.get<bool>();
    else if (key == "x0") cfg.x0 = value.get<Vector>();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

SolverConfig parse_config_json(const std::string& text, const SolverConfig& base) {
    SolverConfig cfg = base;
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    for (const auto& [key, value] : j.items()) apply_config_field(cfg, key, value);
    return cfg;
}

SolverConfig load_config_file(const std::string& path, const SolverConfig& base) {
    return parse_config_json(read_text_file(path), base);
}

void apply_override(SolverConfig& cfg, const std::string& key_equals_value) {
    const auto pos = key_equals_value.find('=');
    if (pos == std::string::npos) {
        throw std::invalid_argument("override '" + key_equals_value + "' is not key=value");
    }
    const std::string key = key_equals_value.substr(0, pos);
    const std::string value = key_equals_value.substr(pos + 1);

    bool known = false;
    for (const char* k : kKnownKeys) {
        if (key == k) known = true;
    }
    if (!known) throw std::invalid_argument("override: unknown key '" + key + "'");
    if (key == "x0") throw std::invalid_argument("override: x0 must come from a config file");

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        throw std::invalid_argument("override: cannot parse value for '" + key + "'");
    }
    apply_config_field(cfg, key, parsed);
}

}  // namespace sapg
