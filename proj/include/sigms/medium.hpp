#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigms/grid.hpp"

namespace sigms {

enum class MediumStyle : std::uint8_t { A, B, Random };

MediumStyle parse_medium_style(const std::string& s);
const char* to_string(MediumStyle s);

/// Two-valued permeability field, piecewise constant per fine element.
/// Matrix phase kappa_m = 1, inclusion phase kappa_I = kappa_m * kappa_R.
struct PermeabilityField {
    std::vector<double> values;   // one per fine element, row-major
    double kappa_m = 1.0;
    double kappa_I = 1.0;

    double contrast() const { return kappa_I / kappa_m; }
    double operator()(int elem) const { return values[elem]; }
};

/// Procedurally generated channel/inclusion medium. Style A favors long
/// axis-aligned channels one coarse cell wide; style B favors scattered
/// rectangular inclusions; Random flips each fine cell independently.
/// Identical (grid, style, kappa_R, seed) inputs give identical fields.
PermeabilityField generate_medium(const GridHierarchy& g, MediumStyle style,
                                  double kappa_R, std::uint64_t seed);

/// Text format: line 1 "nx ny", then nx*ny values row-major.
void save_medium(const PermeabilityField& field, const GridHierarchy& g,
                 const std::string& path);
PermeabilityField load_medium(const GridHierarchy& g, const std::string& path);

enum class WeightMode : std::uint8_t { Simplified, LagrangeSum };

WeightMode parse_weight_mode(const std::string& s);
const char* to_string(WeightMode m);

/// Spectral weight kappa~ per fine element.
struct WeightField {
    std::vector<double> values;
    WeightMode mode = WeightMode::Simplified;

    double operator()(int elem) const { return values[elem]; }
};

/// Simplified mode: kappa~ = 24 kappa / H^2.
/// Lagrange-sum mode: kappa~ = 3 sum_j kappa |grad eta_j|^2 with the four
/// bilinear coarse Lagrange bases, evaluated at fine element centers.
WeightField compute_weight(const GridHierarchy& g, const PermeabilityField& kappa,
                           WeightMode mode);

} // namespace sigms
