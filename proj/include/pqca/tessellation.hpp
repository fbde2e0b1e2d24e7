#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pqca/errors.hpp"

namespace pqca {

// p == kInfiniteP selects the tree family {inf,q}.
inline constexpr int kInfiniteP = 0;

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

struct TessellationSpec {
    int p = 4;  // face degree, kInfiniteP for trees
    int q = 5;  // vertex degree
    int max_generation = 0;
    std::optional<std::int64_t> vertex_budget;

    bool infinite_p() const { return p == kInfiniteP; }
    bool hyperbolic() const;
    bool euclidean() const;
    bool spherical() const;
    // Throws SphericalUnsupported / std::invalid_argument on bad specs.
    void validate() const;
};

enum class EdgeKind : std::uint8_t { ParentChild, Sibling, Cousin };
enum class VertexKind : std::uint8_t { Origin, OneParent, TwoParent };
enum class Strength : std::uint8_t { NotApplicable, Strong, Weak };

const char* to_string(EdgeKind k);
const char* to_string(VertexKind k);
const char* to_string(Strength s);

struct Vertex {
    VertexId id = 0;
    int generation = 0;
    std::int32_t position = 0;  // index in the cyclic order of its generation
    std::vector<VertexId> parents;   // left-to-right, size <= 2
    std::vector<VertexId> children;  // leftmost..rightmost
    std::vector<VertexId> siblings;  // p == 3 only
    std::vector<VertexId> cousins;   // odd p >= 5 only, size <= 1
    bool interior = false;           // all q incident edges present
    VertexKind kind = VertexKind::Origin;
    Strength strength = Strength::NotApplicable;
};

struct Edge {
    EdgeId id = 0;
    VertexId a = 0;  // lower generation (or left endpoint for same-generation)
    VertexId b = 0;
    EdgeKind kind = EdgeKind::ParentChild;
};

struct VertexClass {
    VertexKind kind = VertexKind::Origin;
    bool has_cousin = false;
    Strength strength = Strength::NotApplicable;
};

struct Tessellation {
    TessellationSpec spec;
    VertexId origin = 0;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<VertexId>> generations;
    // Closed faces only, as vertex cycles (consecutive entries adjacent).
    std::vector<std::vector<VertexId>> faces;
    bool sibling_stripped = false;

    // Derived adjacency, filled by the builder.
    std::vector<std::vector<EdgeId>> incident;

    std::size_t vertex_count() const { return vertices.size(); }
    const Vertex& vertex(VertexId v) const;
    int degree(VertexId v) const { return static_cast<int>(incident[v].size()); }
    bool is_interior(VertexId v) const { return vertex(v).interior; }
    std::optional<EdgeId> edge_between(VertexId a, VertexId b) const;
    std::vector<VertexId> neighbors(VertexId v) const;
    // Expected degree of v when every incident edge is present.
    int full_degree(VertexId v) const;

    void rebuild_indices();  // incident lists + edge lookup
    std::optional<std::vector<EdgeId>> face_edges(std::size_t face_index) const;

  private:
    std::map<std::pair<VertexId, VertexId>, EdgeId> edge_lookup_;
};

struct AuditViolation {
    std::string rule;
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
    std::string message;
};

struct AuditReport {
    bool pass = false;
    std::vector<AuditViolation> violations;
    std::vector<std::int64_t> generation_sizes;
    std::map<std::string, std::int64_t> class_counts;
};

Tessellation build_tessellation(const TessellationSpec& spec);

VertexClass classify_vertex(const Tessellation& t, VertexId v);

// Weak/strong labels of the odd p >= 5 taxonomy, assigned generation by
// generation from the origin. Throws NotApplicable for other p.
void assign_strength(Tessellation& t);

AuditReport audit_tessellation(const Tessellation& t);

// Deletes all sibling edges of a p=3 tessellation and re-derives faces; the
// result has quadrilateral faces, origin degree q and interior degree q-2.
Tessellation strip_sibling_edges(const Tessellation& t);

std::string format_p(int p);  // "3", "4", ..., "inf"
int parse_p(const std::string& s);

}  // namespace pqca
