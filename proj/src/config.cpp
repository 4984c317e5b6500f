#include "sigms/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sigms {

void ExperimentConfig::validate() const {
    if (nx_fine < 2 || n_coarse < 2)
        throw ConfigError("config: nx_fine and n_coarse must be >= 2");
    if (nx_fine % n_coarse != 0)
        throw ConfigError("config: nx_fine must be divisible by n_coarse");
    if (kappa_ratio < 1.0) throw ConfigError("config: kappa_ratio must be >= 1");
    if (c <= 0.0) throw ConfigError("config: c must be positive");
    if (max_iter < 1) throw ConfigError("config: max_iter must be >= 1");
    if (oversample < 0) throw ConfigError("config: oversample must be >= 0");
    const int ratio = nx_fine / n_coarse;
    const int local_dim = (ratio + 1) * (ratio + 1);
    if (eigvecs < 1 || eigvecs + 1 > local_dim)
        throw ConfigError("config: eigvecs must satisfy 1 <= eigvecs <= local dim - 1");
    if (variants.empty()) throw ConfigError("config: at least one variant required");
    for (const auto& v : variants)
        if (v != "fine" && v != "cem" && v != "oracle")
            throw ConfigError("config: unknown variant '" + v + "'");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string unquote(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t end = 0;
        const int x = std::stoi(v, &end);
        if (end != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t end = 0;
        const double x = std::stod(v, &end);
        if (end != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

void apply_boundary_table(ExperimentConfig& cfg, const std::string& value) {
    std::string inner = trim(value);
    if (inner.size() < 2 || inner.front() != '{' || inner.back() != '}')
        throw ConfigError("config: boundary expects {bottom=.., top=.., left=.., right=..}");
    inner = inner.substr(1, inner.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: malformed boundary entry '" + item + "'");
        const std::string side = trim(item.substr(0, eq));
        const BoundaryLabel label = parse_boundary_label(unquote(item.substr(eq + 1)));
        if (side == "bottom")
            cfg.boundary.bottom = label;
        else if (side == "top")
            cfg.boundary.top = label;
        else if (side == "left")
            cfg.boundary.left = label;
        else if (side == "right")
            cfg.boundary.right = label;
        else
            throw ConfigError("config: unknown boundary side '" + side + "'");
    }
}

} // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& raw_key,
                        const std::string& raw_value) {
    // section prefixes are organizational; match on the bare key
    std::string key = raw_key;
    const std::size_t dot = key.rfind('.');
    if (dot != std::string::npos) key = key.substr(dot + 1);
    const std::string value = unquote(raw_value);

    if (key == "nx_fine")
        cfg.nx_fine = to_int(key, value);
    else if (key == "n_coarse")
        cfg.n_coarse = to_int(key, value);
    else if (key == "boundary")
        apply_boundary_table(cfg, raw_value);
    else if (key == "bottom")
        cfg.boundary.bottom = parse_boundary_label(value);
    else if (key == "top")
        cfg.boundary.top = parse_boundary_label(value);
    else if (key == "left")
        cfg.boundary.left = parse_boundary_label(value);
    else if (key == "right")
        cfg.boundary.right = parse_boundary_label(value);
    else if (key == "medium_style")
        cfg.medium_style = parse_medium_style(value);
    else if (key == "kappa_ratio")
        cfg.kappa_ratio = to_double(key, value);
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "medium_file")
        cfg.medium_file = value;
    else if (key == "source")
        cfg.source = value;
    else if (key == "neumann")
        cfg.neumann = value;
    else if (key == "c")
        cfg.c = to_double(key, value);
    else if (key == "max_iter")
        cfg.max_iter = to_int(key, value);
    else if (key == "solve_tol")
        cfg.solve_tol = to_double(key, value);
    else if (key == "oversample")
        cfg.oversample = to_int(key, value);
    else if (key == "eigvecs")
        cfg.eigvecs = to_int(key, value);
    else if (key == "weight_mode")
        cfg.weight_mode = parse_weight_mode(value);
    else if (key == "variants") {
        cfg.variants.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) cfg.variants.push_back(item);
        }
    } else if (key == "output_dir")
        cfg.output_dir = value;
    else if (key == "threads")
        cfg.threads = to_int(key, value);
    else
        throw ConfigError("config: unknown key '" + raw_key + "'");
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " +
                              std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        apply_config_entry(cfg, key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string describe(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "nx_fine = " << cfg.nx_fine << "\n";
    os << "n_coarse = " << cfg.n_coarse << "\n";
    os << "boundary = {bottom=\"" << to_string(cfg.boundary.bottom) << "\", top=\""
       << to_string(cfg.boundary.top) << "\", left=\"" << to_string(cfg.boundary.left)
       << "\", right=\"" << to_string(cfg.boundary.right) << "\"}\n";
    os << "medium_style = " << to_string(cfg.medium_style) << "\n";
    os << "kappa_ratio = " << cfg.kappa_ratio << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "medium_file = " << (cfg.medium_file.empty() ? "(generated)" : cfg.medium_file)
       << "\n";
    os << "source = " << cfg.source << "\n";
    os << "neumann = " << cfg.neumann << (cfg.neumann == "0" ? " (default)" : "") << "\n";
    os << "c = " << cfg.c << "\n";
    os << "max_iter = " << cfg.max_iter << "\n";
    os << "solve_tol = " << cfg.solve_tol << "\n";
    os << "oversample = " << cfg.oversample << "\n";
    os << "eigvecs = " << cfg.eigvecs << "\n";
    os << "weight_mode = " << to_string(cfg.weight_mode) << "\n";
    os << "variants = ";
    for (std::size_t i = 0; i < cfg.variants.size(); ++i)
        os << (i ? "," : "") << cfg.variants[i];
    os << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "threads = " << cfg.threads << "\n";
    return os.str();
}

} // namespace sigms
