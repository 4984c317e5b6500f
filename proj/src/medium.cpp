#include "sigms/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace sigms {

MediumStyle parse_medium_style(const std::string& s) {
    if (s == "A" || s == "a") return MediumStyle::A;
    if (s == "B" || s == "b") return MediumStyle::B;
    if (s == "random") return MediumStyle::Random;
    throw ConfigError("unknown medium style '" + s + "' (expected A, B or random)");
}

const char* to_string(MediumStyle s) {
    switch (s) {
        case MediumStyle::A: return "A";
        case MediumStyle::B: return "B";
        case MediumStyle::Random: return "random";
    }
    return "?";
}

namespace {

// Paint a rectangle of fine elements, clipped to the grid.
void paint(std::vector<std::uint8_t>& mask, const GridHierarchy& g, int ex0, int ey0,
           int w, int h) {
    ex0 = std::max(0, ex0);
    ey0 = std::max(0, ey0);
    const int ex1 = std::min(g.nx_fine, ex0 + w);
    const int ey1 = std::min(g.ny_fine, ey0 + h);
    for (int ey = ey0; ey < ey1; ++ey)
        for (int ex = ex0; ex < ex1; ++ex) mask[g.element_id(ex, ey)] = 1;
}

// Channel one coarse cell wide along a coarse row/column, spanning a random
// fraction of the domain. All draws happen unconditionally so the geometry
// depends only on (style, seed, grid).
void paint_channels(std::vector<std::uint8_t>& mask, const GridHierarchy& g,
                    std::mt19937_64& rng, int n_horizontal, int n_vertical) {
    const int C = g.n_coarse_per_axis;
    const int r = g.ratio;
    std::uniform_int_distribution<int> row(0, C - 1);
    std::uniform_real_distribution<double> frac(0.4, 0.9);
    std::uniform_real_distribution<double> start(0.0, 1.0);
    for (int k = 0; k < n_horizontal; ++k) {
        const int cy = row(rng);
        const double len = frac(rng);
        const double s = start(rng) * (1.0 - len);
        const int ex0 = static_cast<int>(std::floor(s * C)) * r;
        const int w = std::max(1, static_cast<int>(std::lround(len * C))) * r;
        paint(mask, g, ex0, cy * r, w, r);
    }
    for (int k = 0; k < n_vertical; ++k) {
        const int cx = row(rng);
        const double len = frac(rng);
        const double s = start(rng) * (1.0 - len);
        const int ey0 = static_cast<int>(std::floor(s * C)) * r;
        const int h = std::max(1, static_cast<int>(std::lround(len * C))) * r;
        paint(mask, g, cx * r, ey0, r, h);
    }
}

void paint_coarse_inclusions(std::vector<std::uint8_t>& mask, const GridHierarchy& g,
                             std::mt19937_64& rng, int count) {
    const int C = g.n_coarse_per_axis;
    const int r = g.ratio;
    std::uniform_int_distribution<int> pos(0, C - 1);
    std::uniform_int_distribution<int> extent(1, 2);
    for (int k = 0; k < count; ++k) {
        const int cx = pos(rng), cy = pos(rng);
        const int w = extent(rng), h = extent(rng);
        paint(mask, g, cx * r, cy * r, w * r, h * r);
    }
}

void paint_fine_inclusions(std::vector<std::uint8_t>& mask, const GridHierarchy& g,
                           std::mt19937_64& rng, int count) {
    const int r = g.ratio;
    std::uniform_int_distribution<int> posx(0, g.nx_fine - 1);
    std::uniform_int_distribution<int> posy(0, g.ny_fine - 1);
    std::uniform_int_distribution<int> extent(std::max(1, r / 2), 2 * r);
    for (int k = 0; k < count; ++k) {
        const int ex = posx(rng), ey = posy(rng);
        const int w = extent(rng), h = extent(rng);
        paint(mask, g, ex, ey, w, h);
    }
}

} // namespace

PermeabilityField generate_medium(const GridHierarchy& g, MediumStyle style,
                                  double kappa_R, std::uint64_t seed) {
    if (kappa_R < 1.0) {
        std::ostringstream os;
        os << "generate_medium: contrast ratio kappa_R must be >= 1, got " << kappa_R;
        throw ConfigError(os.str());
    }
    const int C = g.n_coarse_per_axis;
    std::vector<std::uint8_t> mask(g.num_fine_elements(), 0);
    std::mt19937_64 rng(seed);

    switch (style) {
        case MediumStyle::A:
            paint_channels(mask, g, rng, std::max(2, C / 3), std::max(1, C / 6));
            paint_coarse_inclusions(mask, g, rng, C);
            break;
        case MediumStyle::B:
            paint_channels(mask, g, rng, std::max(1, C / 8), 0);
            paint_fine_inclusions(mask, g, rng, 3 * C);
            break;
        case MediumStyle::Random: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (auto& m : mask) m = u(rng) < 0.25 ? 1 : 0;
            break;
        }
    }

    PermeabilityField f;
    f.kappa_m = 1.0;
    f.kappa_I = kappa_R;
    f.values.resize(g.num_fine_elements());
    for (int e = 0; e < g.num_fine_elements(); ++e)
        f.values[e] = mask[e] ? f.kappa_I : f.kappa_m;
    return f;
}

void save_medium(const PermeabilityField& field, const GridHierarchy& g,
                 const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open medium file for writing: " + path);
    os.precision(17);
    os << g.nx_fine << ' ' << g.ny_fine << '\n';
    for (int ey = 0; ey < g.ny_fine; ++ey) {
        for (int ex = 0; ex < g.nx_fine; ++ex) {
            if (ex) os << ' ';
            os << field.values[g.element_id(ex, ey)];
        }
        os << '\n';
    }
    if (!os) throw ConfigError("failed writing medium file: " + path);
}

PermeabilityField load_medium(const GridHierarchy& g, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open medium file: " + path);
    int nx = 0, ny = 0;
    is >> nx >> ny;
    if (!is || nx != g.nx_fine || ny != g.ny_fine) {
        std::ostringstream os;
        os << "medium file " << path << " has size " << nx << "x" << ny
           << ", expected " << g.nx_fine << "x" << g.ny_fine;
        throw ConfigError(os.str());
    }
    PermeabilityField f;
    f.values.resize(g.num_fine_elements());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        if (!(is >> f.values[e]))
            throw ConfigError("medium file " + path + " ended early");
        if (f.values[e] <= 0.0)
            throw ConfigError("medium file " + path + " contains a non-positive value");
        lo = std::min(lo, f.values[e]);
        hi = std::max(hi, f.values[e]);
    }
    f.kappa_m = lo;
    f.kappa_I = hi;
    return f;
}

WeightMode parse_weight_mode(const std::string& s) {
    if (s == "simplified") return WeightMode::Simplified;
    if (s == "lagrange-sum" || s == "lagrange_sum") return WeightMode::LagrangeSum;
    throw ConfigError("unknown weight mode '" + s + "' (expected simplified or lagrange-sum)");
}

const char* to_string(WeightMode m) {
    return m == WeightMode::Simplified ? "simplified" : "lagrange-sum";
}

WeightField compute_weight(const GridHierarchy& g, const PermeabilityField& kappa,
                           WeightMode mode) {
    WeightField w;
    w.mode = mode;
    w.values.resize(g.num_fine_elements());
    const double H = g.H;
    if (mode == WeightMode::Simplified) {
        const double factor = 24.0 / (H * H);
        for (int e = 0; e < g.num_fine_elements(); ++e)
            w.values[e] = factor * kappa.values[e];
        return w;
    }
    // Lagrange-sum: 3 sum_j kappa |grad eta_j|^2 at the fine element center,
    // with eta_j the bilinear bases of the owning coarse element. In local
    // coordinates (s, t) in [0,1]^2 of the coarse element:
    //   sum_j |grad eta_j|^2 = ((1-2s)^2 + (1-2t)^2 + 2) / H^2
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        const int ex = g.element_ex(e), ey = g.element_ey(e);
        const double cx = (ex % g.ratio + 0.5) / g.ratio;  // local coords of center
        const double cy = (ey % g.ratio + 0.5) / g.ratio;
        const double gx = 1.0 - 2.0 * cx;
        const double gy = 1.0 - 2.0 * cy;
        const double sum_grad2 = (gx * gx + gy * gy + 2.0) / (H * H);
        w.values[e] = 3.0 * kappa.values[e] * sum_grad2;
    }
    return w;
}

} // namespace sigms
