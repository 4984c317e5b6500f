#pragma once

#include <string>
#include <vector>

#include "sigms/assembly.hpp"
#include "sigms/contactsolve.hpp"

namespace sigms {

/// Nodal field dump. Text format: line 1 "nx ny h", then (nx+1)*(ny+1)
/// nodal values in row-major order.
void dump_field_raw(int nx, int ny, double h, const Vector& u, const std::string& path);
void dump_field(const GridHierarchy& g, const Vector& u, const std::string& path);

struct LoadedField {
    int nx = 0, ny = 0;
    double h = 0.0;
    Vector values;
};
LoadedField load_field(const std::string& path);

/// Trace of a contact-boundary quantity: "x value" per line, nodes ordered
/// by x-coordinate.
void dump_contact_trace(const GridHierarchy& g, const std::vector<int>& contact_nodes,
                        const Vector& values, const std::string& path);

/// Per-iteration 0/1 membership of every contact node (header row carries
/// the node x-coordinates). One row per iterate in the history.
void dump_set_trace(const GridHierarchy& g, const std::vector<int>& contact_nodes,
                    const std::vector<ContactState>& history, bool active_sets,
                    const std::string& path);

} // namespace sigms
