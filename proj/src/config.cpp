#include "estower/config.hpp"

#include "estower/errors.hpp"
#include "estower/lattice.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace estower {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw config_error("key '" + key + "' expects an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "' expects an unsigned integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "' expects a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw config_error("key '" + key + "' expects 0/1, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_int(key, trim(tok)));
    if (out.empty()) throw config_error("key '" + key + "' expects a comma-separated list");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    return model.model == o.model.model && model.j1 == o.model.j1 && model.j2 == o.model.j2 &&
           model.j == o.model.j && model.q == o.model.q && lx == o.lx && ly == o.ly &&
           cut == o.cut && candidates == o.candidates && smax == o.smax && tol == o.tol &&
           max_iter == o.max_iter && seed == o.seed && lambda_floor == o.lambda_floor &&
           out == o.out && dense_check == o.dense_check && nlow == o.nlow &&
           cbjq_single_pairing == o.cbjq_single_pairing;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "model")
        cfg.model.model = model_from_name(value);
    else if (key == "lx")
        cfg.lx = parse_int(key, value);
    else if (key == "ly")
        cfg.ly = parse_int(key, value);
    else if (key == "j1")
        cfg.model.j1 = parse_double(key, value);
    else if (key == "j2")
        cfg.model.j2 = parse_double(key, value);
    else if (key == "j")
        cfg.model.j = parse_double(key, value);
    else if (key == "q")
        cfg.model.q = parse_double(key, value);
    else if (key == "cut")
        cfg.cut = value;
    else if (key == "candidates")
        cfg.candidates = parse_int_list(key, value);
    else if (key == "smax")
        cfg.smax = parse_double(key, value);
    else if (key == "tol")
        cfg.tol = parse_double(key, value);
    else if (key == "max_iter")
        cfg.max_iter = parse_int(key, value);
    else if (key == "seed")
        cfg.seed = parse_u64(key, value);
    else if (key == "lambda_floor")
        cfg.lambda_floor = parse_double(key, value);
    else if (key == "out")
        cfg.out = value;
    else if (key == "dense_check")
        cfg.dense_check = parse_bool(key, value);
    else if (key == "nlow")
        cfg.nlow = parse_int(key, value);
    else if (key == "cbjq_single_pairing")
        cfg.cbjq_single_pairing = parse_bool(key, value);
    else
        throw config_error("unknown config key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not key = value: '" + stripped + "'");
        apply_config_entry(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "model = " << model_name(cfg.model.model) << "\n";
    out << "lx = " << cfg.lx << "\n";
    out << "ly = " << cfg.ly << "\n";
    out << "j1 = " << fmt(cfg.model.j1) << "\n";
    out << "j2 = " << fmt(cfg.model.j2) << "\n";
    out << "j = " << fmt(cfg.model.j) << "\n";
    out << "q = " << fmt(cfg.model.q) << "\n";
    out << "cut = " << cfg.cut << "\n";
    out << "candidates = ";
    for (std::size_t i = 0; i < cfg.candidates.size(); ++i)
        out << (i ? "," : "") << cfg.candidates[i];
    out << "\n";
    out << "smax = " << fmt(cfg.smax) << "\n";
    out << "tol = " << fmt(cfg.tol) << "\n";
    out << "max_iter = " << cfg.max_iter << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "lambda_floor = " << fmt(cfg.lambda_floor) << "\n";
    out << "out = " << cfg.out << "\n";
    out << "dense_check = " << (cfg.dense_check ? 1 : 0) << "\n";
    out << "nlow = " << cfg.nlow << "\n";
    out << "cbjq_single_pairing = " << (cfg.cbjq_single_pairing ? 1 : 0) << "\n";
    return out.str();
}

void validate_config(const RunConfig& cfg) {
    if (cfg.lx == 0 || cfg.ly == 0) throw config_error("lattice dimensions lx, ly are required");
    if (cfg.cut.empty()) throw config_error("cut descriptor is required");
    const Lattice lat(cfg.lx, cfg.ly);                    // even/size checks
    const Cut cut = make_cut(lat, cfg.cut);               // bounds checks
    if (cfg.candidates.empty()) throw config_error("candidate list is empty");
    for (int n : cfg.candidates)
        if (n < 3) throw config_error("candidate N must be >= 3, got " + std::to_string(n));
    if (cfg.smax < 0) throw config_error("smax must be >= 0");
    if (cfg.smax > 0.5 * cut.a_sites.size() + 1e-9)
        throw config_error("smax exceeds |A|/2 for this cut");
    if (cfg.dense_check && cfg.lx * cfg.ly > 12)
        throw config_error("dense check is limited to lattices with n <= 12, got n=" +
                           std::to_string(cfg.lx * cfg.ly));
    if (!(cfg.tol > 0)) throw config_error("tol must be positive");
    if (cfg.max_iter < 1) throw config_error("max_iter must be >= 1");
    if (cfg.lambda_floor < 0) throw config_error("lambda_floor must be >= 0");
    if (cfg.nlow < 1) throw config_error("nlow must be >= 1");
    // coupling sanity for the active model (also checked at compile time)
    if (cfg.model.model == Model::dimer) {
        if (!std::isfinite(cfg.model.j1) || !std::isfinite(cfg.model.j2))
            throw config_error("couplings must be finite");
        if (cfg.model.j1 == 0.0 && cfg.model.j2 == 0.0)
            throw config_error("dimer model needs a nonzero j1 or j2");
    } else {
        if (!std::isfinite(cfg.model.j) || !std::isfinite(cfg.model.q))
            throw config_error("couplings must be finite");
        if (cfg.model.j == 0.0 && cfg.model.q == 0.0)
            throw config_error("model needs a nonzero j or q");
    }
}

} // namespace estower
