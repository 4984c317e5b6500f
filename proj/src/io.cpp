#include "sigms/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace sigms {

namespace {

std::string format_h(double h) {
    char buf[40];
    if (h == std::floor(h)) {
        std::snprintf(buf, sizeof(buf), "%.1f", h);
    } else {
        std::snprintf(buf, sizeof(buf), "%.17g", h);
    }
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os.precision(17);
    return os;
}

} // namespace

void dump_field_raw(int nx, int ny, double h, const Vector& u, const std::string& path) {
    if (u.size() != static_cast<long>(nx + 1) * (ny + 1))
        throw ConfigError("dump_field: vector size does not match grid: " + path);
    auto os = open_out(path);
    os << nx << ' ' << ny << ' ' << format_h(h) << '\n';
    for (int iy = 0; iy <= ny; ++iy) {
        for (int ix = 0; ix <= nx; ++ix) {
            if (ix) os << ' ';
            os << u[iy * (nx + 1) + ix];
        }
        os << '\n';
    }
    if (!os) throw ConfigError("failed writing field file: " + path);
}

void dump_field(const GridHierarchy& g, const Vector& u, const std::string& path) {
    dump_field_raw(g.nx_fine, g.ny_fine, g.h, u, path);
}

LoadedField load_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open field file: " + path);
    LoadedField f;
    is >> f.nx >> f.ny >> f.h;
    if (!is || f.nx < 1 || f.ny < 1)
        throw ConfigError("malformed field file header: " + path);
    const int count = (f.nx + 1) * (f.ny + 1);
    f.values.resize(count);
    for (int i = 0; i < count; ++i)
        if (!(is >> f.values[i])) throw ConfigError("field file ended early: " + path);
    return f;
}

void dump_contact_trace(const GridHierarchy& g, const std::vector<int>& contact_nodes,
                        const Vector& values, const std::string& path) {
    auto os = open_out(path);
    for (std::size_t i = 0; i < contact_nodes.size(); ++i)
        os << g.node_x(contact_nodes[i]) << ' ' << values[static_cast<int>(i)] << '\n';
    if (!os) throw ConfigError("failed writing trace file: " + path);
}

void dump_set_trace(const GridHierarchy& g, const std::vector<int>& contact_nodes,
                    const std::vector<ContactState>& history, bool active_sets,
                    const std::string& path) {
    auto os = open_out(path);
    os << "k";
    for (int n : contact_nodes) os << ',' << g.node_x(n);
    os << '\n';
    for (const auto& state : history) {
        os << state.k;
        for (std::size_t i = 0; i < contact_nodes.size(); ++i) {
            const bool a = state.active[i] != 0;
            os << ',' << ((a == active_sets) ? 1 : 0);
        }
        os << '\n';
    }
    if (!os) throw ConfigError("failed writing set trace file: " + path);
}

} // namespace sigms
