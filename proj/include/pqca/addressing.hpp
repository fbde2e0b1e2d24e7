#pragma once

#include <cstdint>
#include <vector>

#include "pqca/tessellation.hpp"

namespace pqca {

// Edge coloring on the edges that lie on shortest paths from the origin
// (all edges for squares and trees, parent-child edges only for triangles).
struct AddressingScheme {
    int color_count = 0;               // l
    std::vector<int> edge_color;       // indexed by EdgeId, -1 = uncolored
    bool colored(EdgeId e) const { return edge_color[e] >= 0; }
};

struct NormTable {
    // norm[v] equals the generation of v; color_norm[v][k] counts color-k
    // edges on any shortest origin-to-v path.
    std::vector<int> norm;
    std::vector<std::vector<std::uint16_t>> color_norm;
};

struct SpiViolation {
    VertexId vertex = kNoVertex;
    std::vector<EdgeId> path_a;
    std::vector<EdgeId> path_b;
};

struct SpiReport {
    bool pass = false;
    std::vector<SpiViolation> violations;  // capped at 16
};

struct LocalViolation {
    std::string kind;  // "incident-colors" or "opposite-edges"
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
};

struct LocalReport {
    bool pass = false;
    std::vector<LocalViolation> violations;
};

AddressingScheme color_tree(const Tessellation& t);
AddressingScheme color_square(const Tessellation& t);
AddressingScheme color_triangle(const Tessellation& t);

// Distinct colors at every vertex; equal colors on opposite edges of every
// quadrilateral face (checked on the sibling-stripped faces for triangles).
LocalReport verify_local(const Tessellation& t, const AddressingScheme& s);

// Dynamic program over generations collecting, per vertex, every color
// distribution achievable by a shortest path. The independent oracle for the
// colorings above.
SpiReport verify_spi(const Tessellation& t, const AddressingScheme& s);

// Throws NotInvariant when two shortest paths to some vertex disagree.
NormTable compute_norms(const Tessellation& t, const AddressingScheme& s);

}  // namespace pqca
