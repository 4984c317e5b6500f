#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "sigms/medium.hpp"

using namespace sigms;

TEST_CASE("contrast 1 collapses the phases") {
    const GridHierarchy g = build_hierarchy(8, 4);
    for (MediumStyle s : {MediumStyle::A, MediumStyle::B, MediumStyle::Random}) {
        const PermeabilityField f = generate_medium(g, s, 1.0, 42);
        for (double v : f.values) CHECK(v == 1.0);
    }
}

TEST_CASE("style A at paper scale is two-valued with the requested contrast") {
    const GridHierarchy g = build_hierarchy(400, 100);
    const PermeabilityField f = generate_medium(g, MediumStyle::A, 1e3, 7);
    double lo = 1e300, hi = 0;
    for (double v : f.values) {
        CHECK((v == 1.0 || v == 1e3));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo == 1.0);
    CHECK(hi == 1e3);
}

TEST_CASE("generation is deterministic in (style, seed, grid)") {
    const GridHierarchy g = build_hierarchy(8, 4);
    for (MediumStyle s : {MediumStyle::A, MediumStyle::B, MediumStyle::Random}) {
        const PermeabilityField a = generate_medium(g, s, 10.0, 7);
        const PermeabilityField b = generate_medium(g, s, 10.0, 7);
        CHECK(a.values == b.values);
        const PermeabilityField c = generate_medium(g, s, 10.0, 8);
        CHECK(a.values != c.values);
    }
}

TEST_CASE("contrast scaling leaves the geometry untouched") {
    const GridHierarchy g = build_hierarchy(16, 4);
    const PermeabilityField a = generate_medium(g, MediumStyle::A, 1e2, 3);
    const PermeabilityField b = generate_medium(g, MediumStyle::A, 1e3, 3);
    double amax = 0, bmax = 0;
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        CHECK((a.values[e] > 1.0) == (b.values[e] > 1.0));
        amax = std::max(amax, a.values[e]);
        bmax = std::max(bmax, b.values[e]);
    }
    CHECK(bmax / amax == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("generate_medium rejects contrast below 1") {
    const GridHierarchy g = build_hierarchy(8, 4);
    CHECK_THROWS_AS(generate_medium(g, MediumStyle::A, 0.5, 1), ConfigError);
}

TEST_CASE("simplified weight is 24 kappa / H^2") {
    const GridHierarchy g = build_hierarchy(4, 2);  // H = 1/2
    PermeabilityField f;
    f.values.assign(g.num_fine_elements(), 1.0);
    const WeightField w = compute_weight(g, f, WeightMode::Simplified);
    for (double v : w.values) CHECK(v == doctest::Approx(96.0).epsilon(1e-15));
}

namespace {

// Independent evaluation of 3 sum_j kappa |grad eta_j|^2 at a point of the
// coarse element [0,H]^2 by central finite differences of the four bilinear
// Lagrange bases (exact for polynomials of degree <= 2 in each variable).
double weight_oracle(double H, double x, double y) {
    auto eta = [H](int j, double s, double t) {
        const double a = s / H, b = t / H;
        switch (j) {
            case 0: return (1 - a) * (1 - b);
            case 1: return a * (1 - b);
            case 2: return a * b;
            default: return (1 - a) * b;
        }
    };
    const double d = 1e-5;
    double sum = 0;
    for (int j = 0; j < 4; ++j) {
        const double gx = (eta(j, x + d, y) - eta(j, x - d, y)) / (2 * d);
        const double gy = (eta(j, x, y + d) - eta(j, x, y - d)) / (2 * d);
        sum += gx * gx + gy * gy;
    }
    return 3.0 * sum;
}

} // namespace

TEST_CASE("lagrange-sum weight matches the finite-difference oracle") {
    // odd ratio puts one fine-element center exactly at the coarse center
    const GridHierarchy g = build_hierarchy(6, 2);  // H = 1/2, ratio 3
    PermeabilityField f;
    f.values.assign(g.num_fine_elements(), 1.0);
    const WeightField w = compute_weight(g, f, WeightMode::LagrangeSum);
    const double H = g.H;
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        const double cx = (g.element_ex(e) + 0.5) * g.h;
        const double cy = (g.element_ey(e) + 0.5) * g.h;
        const double lx = std::fmod(cx, H);
        const double ly = std::fmod(cy, H);
        CHECK(w.values[e] == doctest::Approx(weight_oracle(H, lx, ly)).epsilon(1e-8));
    }
    // at the coarse element center, sum_j |grad eta_j|^2 = 2 / H^2
    const int center = g.element_id(1, 1);  // local coords (1/2, 1/2)
    CHECK(w.values[center] == doctest::Approx(6.0 / (H * H)).epsilon(1e-12));
    CHECK(weight_oracle(H, 0.5 * H, 0.5 * H) == doctest::Approx(6.0 / (H * H)).epsilon(1e-8));
}

TEST_CASE("weight modes stay within a bounded ratio of each other") {
    const GridHierarchy g = build_hierarchy(12, 3);
    PermeabilityField f;
    f.values.assign(g.num_fine_elements(), 1.0);
    const WeightField ws = compute_weight(g, f, WeightMode::Simplified);
    const WeightField wl = compute_weight(g, f, WeightMode::LagrangeSum);
    for (int e = 0; e < g.num_fine_elements(); ++e) {
        CHECK(ws.values[e] > 0.0);
        CHECK(wl.values[e] > 0.0);
        const double ratio = ws.values[e] / wl.values[e];
        CHECK(ratio >= 1.0 / 16.0);
        CHECK(ratio <= 16.0);
    }
}

TEST_CASE("weight positivity on a random high-contrast medium") {
    const GridHierarchy g = build_hierarchy(16, 4);
    const PermeabilityField f = generate_medium(g, MediumStyle::Random, 1e4, 11);
    for (WeightMode m : {WeightMode::Simplified, WeightMode::LagrangeSum})
        for (double v : compute_weight(g, f, m).values) CHECK(v > 0.0);
}

TEST_CASE("medium file round trip") {
    const GridHierarchy g = build_hierarchy(8, 4);
    const PermeabilityField f = generate_medium(g, MediumStyle::B, 1e3, 5);
    const std::string path = (std::filesystem::temp_directory_path() / "sigms_medium_rt.txt").string();
    save_medium(f, g, path);
    const PermeabilityField f2 = load_medium(g, path);
    CHECK(f.values == f2.values);
    std::filesystem::remove(path);

    const GridHierarchy g2 = build_hierarchy(16, 4);
    save_medium(f, g, path);
    CHECK_THROWS_AS(load_medium(g2, path), ConfigError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_medium(g, path + ".missing"), ConfigError);
}
