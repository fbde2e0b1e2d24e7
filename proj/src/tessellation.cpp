#include "pqca/tessellation.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace pqca {

namespace {

// Number of edges still needed to close the face straddling two cyclically
// consecutive frontier vertices, together with the already-built boundary of
// that face (left vertex .. right vertex through earlier generations).
struct Gap {
    int remaining = 0;
    std::vector<VertexId> path;
};

std::string describe(const TessellationSpec& s) {
    std::ostringstream os;
    os << "{" << format_p(s.p) << "," << s.q << "}";
    return os.str();
}

}  // namespace

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::ParentChild: return "parent-child";
        case EdgeKind::Sibling: return "sibling";
        case EdgeKind::Cousin: return "cousin";
    }
    return "?";
}

const char* to_string(VertexKind k) {
    switch (k) {
        case VertexKind::Origin: return "origin";
        case VertexKind::OneParent: return "one-parent";
        case VertexKind::TwoParent: return "two-parent";
    }
    return "?";
}

const char* to_string(Strength s) {
    switch (s) {
        case Strength::NotApplicable: return "n/a";
        case Strength::Strong: return "strong";
        case Strength::Weak: return "weak";
    }
    return "?";
}

std::string format_p(int p) {
    return p == kInfiniteP ? "inf" : std::to_string(p);
}

int parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "oo") return kInfiniteP;
    return std::stoi(s);
}

bool TessellationSpec::hyperbolic() const {
    if (infinite_p()) return q >= 3;
    return (p - 2) * (q - 2) > 4;
}

bool TessellationSpec::euclidean() const {
    if (infinite_p()) return q == 2;
    return (p - 2) * (q - 2) == 4;
}

bool TessellationSpec::spherical() const {
    if (infinite_p()) return false;
    return (p - 2) * (q - 2) < 4;
}

void TessellationSpec::validate() const {
    if (!infinite_p() && p < 3) throw std::invalid_argument("face degree must be >= 3 or infinite");
    if (q < 2) throw std::invalid_argument("vertex degree must be >= 2");
    if (max_generation < 0) throw std::invalid_argument("max_generation must be >= 0");
    if (vertex_budget && *vertex_budget < 1) throw std::invalid_argument("vertex_budget must be >= 1");
    if (q == 2) return;  // rings and paths are always allowed
    if (spherical()) {
        // The icosahedron patch {3,5} through generation 2 is kept available:
        // its first two generations follow the layered rules and provide the
        // vertex-plus-neighbors island instances.
        if (p == 3 && q == 5 && max_generation <= 2) return;
        throw SphericalUnsupported("spherical tessellation " + describe(*this) +
                                   " is not supported (1/p + 1/q > 1/2)");
    }
}

const Vertex& Tessellation::vertex(VertexId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= vertices.size())
        throw UnknownVertex("vertex " + std::to_string(v) + " does not exist");
    return vertices[v];
}

std::optional<EdgeId> Tessellation::edge_between(VertexId a, VertexId b) const {
    auto it = edge_lookup_.find({std::min(a, b), std::max(a, b)});
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
}

std::vector<VertexId> Tessellation::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    out.reserve(incident[v].size());
    for (EdgeId e : incident[v]) {
        const Edge& ed = edges[e];
        out.push_back(ed.a == v ? ed.b : ed.a);
    }
    return out;
}

int Tessellation::full_degree(VertexId v) const {
    if (!sibling_stripped) return spec.q;
    return v == origin ? spec.q : spec.q - 2;
}

void Tessellation::rebuild_indices() {
    incident.assign(vertices.size(), {});
    edge_lookup_.clear();
    for (const Edge& e : edges) {
        incident[e.a].push_back(e.id);
        incident[e.b].push_back(e.id);
        edge_lookup_[{std::min(e.a, e.b), std::max(e.a, e.b)}] = e.id;
    }
}

std::optional<std::vector<EdgeId>> Tessellation::face_edges(std::size_t face_index) const {
    const auto& cycle = faces[face_index];
    std::vector<EdgeId> out;
    out.reserve(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        auto e = edge_between(cycle[i], cycle[(i + 1) % cycle.size()]);
        if (!e) return std::nullopt;
        out.push_back(*e);
    }
    return out;
}

namespace {

VertexId new_vertex(Tessellation& t, int generation) {
    Vertex v;
    v.id = static_cast<VertexId>(t.vertices.size());
    v.generation = generation;
    t.vertices.push_back(std::move(v));
    return t.vertices.back().id;
}

void add_edge(Tessellation& t, VertexId a, VertexId b, EdgeKind kind) {
    Edge e;
    e.id = static_cast<EdgeId>(t.edges.size());
    e.a = a;
    e.b = b;
    e.kind = kind;
    t.edges.push_back(e);
}

void finalize(Tessellation& t) {
    t.rebuild_indices();
    for (Vertex& v : t.vertices) {
        switch (v.parents.size()) {
            case 0: v.kind = VertexKind::Origin; break;
            case 1: v.kind = VertexKind::OneParent; break;
            case 2: v.kind = VertexKind::TwoParent; break;
            default:
                throw SphericalUnsupported("vertex " + std::to_string(v.id) +
                                           " acquired more than two parents");
        }
        v.interior = static_cast<int>(t.incident[v.id].size()) == t.full_degree(v.id);
    }
}

// q == 2: a p-cycle (finite p) or a path through the origin (p infinite).
Tessellation build_degree_two(const TessellationSpec& spec) {
    Tessellation t;
    t.spec = spec;
    t.origin = new_vertex(t, 0);
    t.generations.push_back({t.origin});
    t.vertices[t.origin].position = 0;

    const bool cycle = !spec.infinite_p();
    const int half = cycle ? spec.p / 2 : spec.max_generation;
    const int depth = cycle ? std::min(spec.max_generation, half) : spec.max_generation;
    if (spec.vertex_budget && depth >= 1 && 3 > *spec.vertex_budget)
        throw BudgetExceeded("generation 1 alone exceeds the vertex budget");

    VertexId left = t.origin, right = t.origin;
    for (int g = 1; g <= depth; ++g) {
        if (spec.vertex_budget &&
            static_cast<std::int64_t>(t.vertices.size()) + 2 > *spec.vertex_budget)
            break;
        const bool closes_even = cycle && spec.p % 2 == 0 && g == half;
        if (closes_even) {
            VertexId apex = new_vertex(t, g);
            t.vertices[apex].position = 0;
            t.vertices[apex].parents = {left, right};
            t.vertices[left].children.push_back(apex);
            t.vertices[right].children.push_back(apex);
            add_edge(t, left, apex, EdgeKind::ParentChild);
            add_edge(t, right, apex, EdgeKind::ParentChild);
            t.generations.push_back({apex});
            break;
        }
        VertexId nl = new_vertex(t, g);
        VertexId nr = new_vertex(t, g);
        t.vertices[nl].position = 0;
        t.vertices[nr].position = 1;
        t.vertices[nl].parents = {left};
        t.vertices[nr].parents = {right};
        t.vertices[left].children.push_back(nl);
        t.vertices[right].children.push_back(nr);
        add_edge(t, left, nl, EdgeKind::ParentChild);
        add_edge(t, right, nr, EdgeKind::ParentChild);
        t.generations.push_back({nl, nr});
        left = nl;
        right = nr;
        if (cycle && spec.p % 2 == 1 && g == half) {
            EdgeKind kind = spec.p == 3 ? EdgeKind::Sibling : EdgeKind::Cousin;
            add_edge(t, nl, nr, kind);
            if (kind == EdgeKind::Sibling) {
                t.vertices[nl].siblings.push_back(nr);
                t.vertices[nr].siblings.push_back(nl);
            } else {
                t.vertices[nl].cousins.push_back(nr);
                t.vertices[nr].cousins.push_back(nl);
            }
            break;
        }
    }

    if (cycle && depth >= half) {
        // The ring closes; it bounds two faces of degree p.
        std::vector<VertexId> walk;
        walk.push_back(t.origin);
        for (int g = 1; g < static_cast<int>(t.generations.size()); ++g)
            walk.push_back(t.generations[g][0]);
        for (int g = static_cast<int>(t.generations.size()) - 1; g >= 1; --g)
            if (t.generations[g].size() == 2) walk.push_back(t.generations[g][1]);
        t.faces.push_back(walk);
        std::vector<VertexId> rev(walk.rbegin(), walk.rend());
        std::rotate(rev.begin(), rev.end() - 1, rev.end());  // keep origin first
        t.faces.push_back(rev);
    }

    finalize(t);
    return t;
}

}  // namespace

Tessellation build_tessellation(const TessellationSpec& spec) {
    spec.validate();
    if (spec.q == 2) return build_degree_two(spec);

    Tessellation t;
    t.spec = spec;
    t.origin = new_vertex(t, 0);
    t.vertices[t.origin].position = 0;
    t.generations.push_back({t.origin});
    if (spec.max_generation == 0) {
        finalize(t);
        return t;
    }

    const int p = spec.p;
    const int q = spec.q;
    const bool tree = spec.infinite_p();

    if (spec.vertex_budget && 1 + static_cast<std::int64_t>(q) > *spec.vertex_budget)
        throw BudgetExceeded("generation 1 alone exceeds the vertex budget");

    std::vector<VertexId> frontier;
    for (int i = 0; i < q; ++i) {
        VertexId c = new_vertex(t, 1);
        t.vertices[c].position = i;
        t.vertices[c].parents = {t.origin};
        t.vertices[t.origin].children.push_back(c);
        add_edge(t, t.origin, c, EdgeKind::ParentChild);
        frontier.push_back(c);
    }
    t.generations.push_back(frontier);

    std::vector<Gap> gaps;
    if (!tree) {
        gaps.reserve(q);
        for (int i = 0; i < q; ++i)
            gaps.push_back(Gap{p - 2, {frontier[i], t.origin, frontier[(i + 1) % q]}});
    }

    for (int g = 1;; ++g) {
        const int n = static_cast<int>(frontier.size());

        // Same-generation edges close every face that needs one more edge.
        if (!tree && p % 2 == 1) {
            for (int i = 0; i < n; ++i) {
                if (gaps[i].remaining != 1) continue;
                VertexId u = frontier[i];
                VertexId v = frontier[(i + 1) % n];
                EdgeKind kind = p == 3 ? EdgeKind::Sibling : EdgeKind::Cousin;
                add_edge(t, u, v, kind);
                if (kind == EdgeKind::Sibling) {
                    t.vertices[u].siblings.push_back(v);
                    t.vertices[v].siblings.push_back(u);
                } else {
                    t.vertices[u].cousins.push_back(v);
                    t.vertices[v].cousins.push_back(u);
                }
                t.faces.push_back(gaps[i].path);
                gaps[i].remaining = p - 1;
                gaps[i].path = {u, v};
            }
        }

        if (g == spec.max_generation) break;

        std::vector<int> slots(n);
        std::int64_t total_slots = 0;
        for (int i = 0; i < n; ++i) {
            const Vertex& v = t.vertices[frontier[i]];
            slots[i] = q - static_cast<int>(v.parents.size()) -
                       static_cast<int>(v.siblings.size()) -
                       static_cast<int>(v.cousins.size());
            total_slots += slots[i];
        }
        std::int64_t merges = 0;
        if (!tree)
            for (const Gap& gp : gaps) merges += gp.remaining == 2 ? 1 : 0;
        const std::int64_t new_vertices = total_slots - merges;
        if (new_vertices <= 0) break;  // the truncation closed up
        if (spec.vertex_budget &&
            static_cast<std::int64_t>(t.vertices.size()) + new_vertices > *spec.vertex_budget)
            break;  // budget binds before max_generation

        std::vector<VertexId> next;
        next.reserve(new_vertices);
        auto append = [&](VertexId c) {
            t.vertices[c].position = static_cast<std::int32_t>(next.size());
            next.push_back(c);
        };

        VertexId wrap_child = kNoVertex;
        VertexId prev_right_child = kNoVertex;
        for (int i = 0; i < n; ++i) {
            VertexId v = frontier[i];
            const bool left_merge = !tree && gaps[(i - 1 + n) % n].remaining == 2;
            const bool right_merge = !tree && gaps[i].remaining == 2;
            if (slots[i] < 1 || (slots[i] == 1 && left_merge && right_merge))
                throw SphericalUnsupported("truncation of " + describe(spec) +
                                           " closes onto itself at generation " +
                                           std::to_string(g + 1));
            for (int j = 0; j < slots[i]; ++j) {
                const bool leftmost = j == 0;
                const bool rightmost = j == slots[i] - 1;
                VertexId c;
                if (leftmost && left_merge) {
                    if (i == 0) {
                        c = new_vertex(t, g + 1);
                        append(c);
                        wrap_child = c;
                        t.vertices[c].parents = {v};  // left parent linked at wrap
                    } else {
                        c = prev_right_child;
                        t.vertices[c].parents.push_back(v);
                    }
                } else if (rightmost && right_merge && i == n - 1 && wrap_child != kNoVertex) {
                    c = wrap_child;
                    auto& par = t.vertices[c].parents;
                    par.insert(par.begin(), v);  // v is the left parent
                } else {
                    c = new_vertex(t, g + 1);
                    append(c);
                    t.vertices[c].parents = {v};
                }
                add_edge(t, v, c, EdgeKind::ParentChild);
                t.vertices[v].children.push_back(c);
                if (rightmost && right_merge && i < n - 1)
                    prev_right_child = c;
            }
        }

        if (!tree) {
            std::vector<Gap> next_gaps;
            next_gaps.reserve(next.size());
            for (int i = 0; i < n; ++i) {
                const auto& kids = t.vertices[frontier[i]].children;
                for (std::size_t j = 0; j + 1 < kids.size(); ++j)
                    next_gaps.push_back(Gap{p - 2, {kids[j], frontier[i], kids[j + 1]}});
                if (gaps[i].remaining == 2) {
                    std::vector<VertexId> face = gaps[i].path;
                    face.push_back(kids.back());
                    t.faces.push_back(std::move(face));
                } else {
                    Gap gp;
                    gp.remaining = gaps[i].remaining - 2;
                    gp.path.push_back(kids.back());
                    gp.path.insert(gp.path.end(), gaps[i].path.begin(), gaps[i].path.end());
                    gp.path.push_back(t.vertices[frontier[(i + 1) % n]].children.front());
                    next_gaps.push_back(std::move(gp));
                }
            }
            gaps = std::move(next_gaps);
        }

        t.generations.push_back(next);
        frontier = std::move(next);
    }

    finalize(t);
    return t;
}

VertexClass classify_vertex(const Tessellation& t, VertexId v) {
    const Vertex& vx = t.vertex(v);
    VertexClass c;
    c.kind = vx.kind;
    c.has_cousin = !vx.cousins.empty();
    c.strength = vx.strength;
    return c;
}

void assign_strength(Tessellation& t) {
    const int p = t.spec.p;
    if (t.spec.infinite_p() || p < 5 || p % 2 == 0)
        throw NotApplicable("weak/strong labels exist only for odd face degree >= 5");
    for (const auto& gen : t.generations) {
        for (VertexId id : gen) {
            Vertex& v = t.vertices[id];
            if (v.kind == VertexKind::Origin) {
                v.strength = Strength::Strong;
            } else if (v.kind == VertexKind::TwoParent) {
                v.strength = Strength::Weak;
            } else if (v.cousins.empty()) {
                v.strength = Strength::Strong;
            } else {
                Strength parent = t.vertices[v.parents.front()].strength;
                v.strength = parent == Strength::Weak ? Strength::Strong : Strength::Weak;
            }
        }
    }
}

namespace {

void violation(AuditReport& r, std::string rule, std::vector<VertexId> vs,
               std::vector<EdgeId> es, std::string msg) {
    r.violations.push_back({std::move(rule), std::move(vs), std::move(es), std::move(msg)});
}

}  // namespace

AuditReport audit_tessellation(const Tessellation& t) {
    AuditReport r;
    const auto& spec = t.spec;
    const int q = spec.q;
    const bool tree = spec.infinite_p();
    const int p = spec.p;

    for (const auto& gen : t.generations) r.generation_sizes.push_back(gen.size());
    for (const Vertex& v : t.vertices) {
        r.class_counts[to_string(v.kind)]++;
        if (!v.cousins.empty()) r.class_counts["cousin"]++;
        if (v.strength != Strength::NotApplicable)
            r.class_counts[to_string(v.strength)]++;
    }

    // Interior degree.
    for (const Vertex& v : t.vertices)
        if (v.interior && t.degree(v.id) != t.full_degree(v.id))
            violation(r, "interior-degree", {v.id}, {},
                      "interior vertex has degree " + std::to_string(t.degree(v.id)) +
                          ", expected " + std::to_string(t.full_degree(v.id)));
    // Boundary vertices must not exceed the full degree either.
    for (const Vertex& v : t.vertices)
        if (t.degree(v.id) > t.full_degree(v.id))
            violation(r, "interior-degree", {v.id}, {}, "vertex degree exceeds vertex degree bound");

    // Closed face degree (a stripped triangle tessellation has 4-faces).
    const int face_degree = t.sibling_stripped ? 4 : p;
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& cycle = t.faces[f];
        if (!tree && static_cast<int>(cycle.size()) != face_degree)
            violation(r, "face-degree", cycle, {},
                      "face has degree " + std::to_string(cycle.size()) + ", expected " +
                          std::to_string(face_degree));
        if (!t.face_edges(f))
            violation(r, "face-degree", cycle, {}, "face cycle contains a missing edge");
    }

    // Edge kinds vs generation structure.
    for (const Edge& e : t.edges) {
        const int ga = t.vertices[e.a].generation;
        const int gb = t.vertices[e.b].generation;
        switch (e.kind) {
            case EdgeKind::ParentChild:
                if (std::abs(ga - gb) != 1)
                    violation(r, "edge-generation", {e.a, e.b}, {e.id},
                              "parent-child edge does not join consecutive generations");
                break;
            case EdgeKind::Sibling: {
                if (ga != gb || p != 3)
                    violation(r, "edge-generation", {e.a, e.b}, {e.id},
                              "sibling edge outside the triangle family");
                const auto& pa = t.vertices[e.a].parents;
                const auto& pb = t.vertices[e.b].parents;
                bool common = false;
                for (VertexId x : pa)
                    common = common || std::find(pb.begin(), pb.end(), x) != pb.end();
                if (!common)
                    violation(r, "edge-generation", {e.a, e.b}, {e.id},
                              "sibling edge without a common parent");
                break;
            }
            case EdgeKind::Cousin:
                if (ga != gb || p < 5 || p % 2 == 0)
                    violation(r, "edge-generation", {e.a, e.b}, {e.id},
                              "cousin edge outside the odd-face family");
                break;
        }
    }

    // Children of cyclically ordered parents are cyclically ordered.
    for (std::size_t g = 2; g < t.generations.size(); ++g) {
        const auto& ring = t.generations[g];
        if (ring.size() < 2) continue;
        int descents = 0;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Vertex& a = t.vertices[ring[i]];
            const Vertex& b = t.vertices[ring[(i + 1) % ring.size()]];
            if (a.parents.empty() || b.parents.empty()) continue;
            auto pos = [&](const Vertex& v) { return t.vertices[v.parents.front()].position; };
            if (pos(b) < pos(a)) descents++;
        }
        if (descents > 1)
            violation(r, "parent-cyclic-order", {}, {},
                      "generation " + std::to_string(g) + " has " + std::to_string(descents) +
                          " cyclic order breaks");
    }

    // Spacing between consecutive two-parent vertices in a generation ring.
    int spacing = -1;
    if (!tree && p % 2 == 0 && p >= 4 && q >= 5) spacing = q - 4;
    if (!tree && p == 3 && q >= 7) spacing = q - 6;
    if (spacing >= 0) {
        for (std::size_t g = 1; g < t.generations.size(); ++g) {
            const auto& ring = t.generations[g];
            std::vector<int> two_parent_pos;
            for (std::size_t i = 0; i < ring.size(); ++i)
                if (t.vertices[ring[i]].kind == VertexKind::TwoParent)
                    two_parent_pos.push_back(static_cast<int>(i));
            if (two_parent_pos.size() < 2) continue;
            for (std::size_t i = 0; i < two_parent_pos.size(); ++i) {
                int here = two_parent_pos[i];
                int next = two_parent_pos[(i + 1) % two_parent_pos.size()];
                int between = (next - here - 1 + static_cast<int>(ring.size())) %
                              static_cast<int>(ring.size());
                if (between < spacing)
                    violation(r, "two-parent-spacing", {ring[here], ring[next]}, {},
                              "only " + std::to_string(between) +
                                  " one-parent vertices between consecutive two-parent "
                                  "vertices, expected >= " +
                                  std::to_string(spacing));
            }
        }
        // At least one parent of every two-parent vertex is one-parent.
        for (const Vertex& v : t.vertices) {
            if (v.kind != VertexKind::TwoParent) continue;
            bool ok = false;
            for (VertexId pid : v.parents)
                ok = ok || t.vertices[pid].kind == VertexKind::OneParent;
            if (!ok)
                violation(r, "two-parent-spacing", {v.id}, {},
                          "two-parent vertex with no one-parent parent");
        }
    }

    const bool pentagon_or_higher = !tree && p >= 5 && q >= 5;
    if (pentagon_or_higher) {
        // Parent+cousin incidences are capped at two; interior vertices keep
        // at least three children.
        for (const Vertex& v : t.vertices) {
            if (v.parents.size() + v.cousins.size() > 2)
                violation(r, "parent-cousin-cap", {v.id}, {},
                          "more than two parents/cousins");
            if (v.interior && v.kind != VertexKind::Origin &&
                static_cast<int>(v.children.size()) < 3)
                violation(r, "min-children", {v.id}, {},
                          "interior vertex with fewer than three children");
        }
        // A one-parent vertex has at most one two-parent child.
        for (const Vertex& v : t.vertices) {
            if (v.kind != VertexKind::OneParent) continue;
            int tp = 0;
            for (VertexId c : v.children)
                tp += t.vertices[c].kind == VertexKind::TwoParent ? 1 : 0;
            if (tp > 1)
                violation(r, "two-parent-child-cap", {v.id}, {},
                          std::to_string(tp) + " two-parent children");
        }
        // Both parents of a two-parent vertex are non-cousin one-parent.
        for (const Vertex& v : t.vertices) {
            if (v.kind != VertexKind::TwoParent) continue;
            for (VertexId pid : v.parents) {
                const Vertex& pv = t.vertices[pid];
                if (pv.kind != VertexKind::OneParent || !pv.cousins.empty())
                    violation(r, "two-parent-parents", {v.id, pid}, {},
                              "parent of a two-parent vertex is not a non-cousin "
                              "one-parent vertex");
            }
        }
        // Of two cousins, at least one has a non-cousin one-parent parent.
        for (const Edge& e : t.edges) {
            if (e.kind != EdgeKind::Cousin) continue;
            auto good_parent = [&](VertexId id) {
                for (VertexId pid : t.vertices[id].parents) {
                    const Vertex& pv = t.vertices[pid];
                    if (pv.kind == VertexKind::OneParent && pv.cousins.empty()) return true;
                }
                return false;
            };
            if (!good_parent(e.a) && !good_parent(e.b))
                violation(r, "cousin-pair-parent", {e.a, e.b}, {e.id},
                          "neither cousin has a non-cousin one-parent parent");
        }
    }

    r.pass = r.violations.empty();
    return r;
}

Tessellation strip_sibling_edges(const Tessellation& t) {
    if (t.spec.p != 3 || t.sibling_stripped)
        throw NotApplicable("only the triangle family has sibling edges to remove");

    Tessellation s;
    s.spec = t.spec;
    s.origin = t.origin;
    s.vertices = t.vertices;
    s.generations = t.generations;
    s.sibling_stripped = true;
    for (Vertex& v : s.vertices) v.siblings.clear();

    std::map<EdgeId, EdgeId> remap;
    for (const Edge& e : t.edges) {
        if (e.kind == EdgeKind::Sibling) continue;
        Edge copy = e;
        copy.id = static_cast<EdgeId>(s.edges.size());
        remap[e.id] = copy.id;
        s.edges.push_back(copy);
    }

    // Each deleted sibling edge {u,v} merges the two triangles it bounded into
    // one quadrilateral (common parent, u, common child, v).
    for (const Edge& e : t.edges) {
        if (e.kind != EdgeKind::Sibling) continue;
        const Vertex& u = t.vertices[e.a];
        const Vertex& v = t.vertices[e.b];
        VertexId parent = kNoVertex, child = kNoVertex;
        for (VertexId x : u.parents)
            if (std::find(v.parents.begin(), v.parents.end(), x) != v.parents.end()) parent = x;
        for (VertexId x : u.children)
            if (std::find(v.children.begin(), v.children.end(), x) != v.children.end()) child = x;
        if (parent == kNoVertex || child == kNoVertex) continue;  // quad incomplete
        s.faces.push_back({parent, e.a, child, e.b});
    }

    s.rebuild_indices();
    for (Vertex& v : s.vertices)
        v.interior = static_cast<int>(s.incident[v.id].size()) == s.full_degree(v.id);
    return s;
}

}  // namespace pqca
