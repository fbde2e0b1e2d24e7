#include "pqca/addressing.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <string>

namespace pqca {

namespace {

EdgeId edge_of(const Tessellation& t, VertexId a, VertexId b) {
    auto e = t.edge_between(a, b);
    if (!e) throw UnknownVertex("missing edge between " + std::to_string(a) + " and " +
                                std::to_string(b));
    return *e;
}

}  // namespace

AddressingScheme color_tree(const Tessellation& t) {
    if (!t.spec.infinite_p() || t.spec.q < 3)
        throw WrongFamily("tree coloring applies to {inf,q} with q >= 3");
    const int q = t.spec.q;
    AddressingScheme s;
    s.color_count = q;
    s.edge_color.assign(t.edges.size(), -1);

    const auto& kids = t.vertices[t.origin].children;
    for (std::size_t i = 0; i < kids.size(); ++i)
        s.edge_color[edge_of(t, t.origin, kids[i])] = static_cast<int>(i);

    for (std::size_t g = 1; g < t.generations.size(); ++g) {
        for (VertexId id : t.generations[g]) {
            const Vertex& v = t.vertices[id];
            if (v.children.empty()) continue;
            int parent_color = s.edge_color[edge_of(t, v.parents.front(), id)];
            for (std::size_t j = 0; j < v.children.size(); ++j)
                s.edge_color[edge_of(t, id, v.children[j])] =
                    static_cast<int>((parent_color + 1 + j) % q);
        }
    }
    return s;
}

AddressingScheme color_square(const Tessellation& t) {
    if (t.spec.p != 4 || t.spec.q < 5)
        throw WrongFamily("square coloring applies to {4,q} with q >= 5");
    const int q = t.spec.q;
    AddressingScheme s;
    s.color_count = q;
    s.edge_color.assign(t.edges.size(), -1);

    // One full turn of colors around the origin; later generations continue
    // the rotation, alternating direction with the parity of the generation.
    const auto& kids = t.vertices[t.origin].children;
    for (std::size_t i = 0; i < kids.size(); ++i)
        s.edge_color[edge_of(t, t.origin, kids[i])] =
            static_cast<int>((q - i) % q);

    for (std::size_t g = 1; g + 1 < t.generations.size(); ++g) {
        const bool clockwise = g % 2 == 1;
        for (VertexId id : t.generations[g]) {
            const Vertex& v = t.vertices[id];
            if (v.children.empty()) continue;
            VertexId first_parent =
                clockwise ? v.parents.front() : v.parents.back();
            int c0 = s.edge_color[edge_of(t, first_parent, id)];
            if (v.parents.size() == 2) {
                VertexId second = clockwise ? v.parents.back() : v.parents.front();
                int c1 = s.edge_color[edge_of(t, second, id)];
                if ((c1 + 1) % q != c0)
                    throw NotInvariant("parent colors are not rotation-consecutive at vertex " +
                                       std::to_string(id));
            }
            std::vector<VertexId> order = v.children;
            if (!clockwise) std::reverse(order.begin(), order.end());
            for (std::size_t j = 0; j < order.size(); ++j)
                s.edge_color[edge_of(t, id, order[j])] =
                    static_cast<int>((c0 + 1 + j) % q);
        }
    }
    return s;
}

namespace {

// Spoke-and-sector bookkeeping shared by the quadrilateral tessellation and
// the sibling-stripped triangle tessellation. Each generation ring splits
// into `sectors` rotation-equivalent blocks; `anchor[g]` is the ring index of
// the block that ends at the spoke-0 ray, and `on_spoke[g]` records whether
// that index lies on the ray itself or just left of where the ray crosses
// between two vertices.
struct SpokeFrame {
    int sectors = 0;
    std::vector<int> anchor;
    std::vector<char> on_spoke;
    std::vector<int> block;
    std::vector<int> ring;

    int sector_of(const Tessellation& t, VertexId v) const {
        const Vertex& vx = t.vertices[v];
        int g = vx.generation;
        int r = (anchor[g] - vx.position % ring[g] + ring[g]) % ring[g];
        return r / block[g];
    }
    int offset_of(const Tessellation& t, VertexId v) const {
        const Vertex& vx = t.vertices[v];
        int g = vx.generation;
        int r = (anchor[g] - vx.position % ring[g] + ring[g]) % ring[g];
        return r % block[g];
    }
    bool vertex_on_spoke(const Tessellation& t, VertexId v) const {
        const Vertex& vx = t.vertices[v];
        if (vx.generation == 0) return true;
        return offset_of(t, v) == 0 && on_spoke[vx.generation];
    }
    // Sector containing the parent-child edge (u,v). Edges never cross a
    // spoke; boundary edges hang on the side away from the spoke vertex.
    int edge_sector(const Tessellation& t, VertexId u, VertexId v) const {
        if (u == t.origin) return sector_of(t, v);
        int su = sector_of(t, u);
        int sv = sector_of(t, v);
        if (su == sv) return su;
        if (vertex_on_spoke(t, u)) return sv;
        if (vertex_on_spoke(t, v)) return su;
        throw NotInvariant("edge between interior sectors " + std::to_string(su) + " and " +
                           std::to_string(sv));
    }
};

SpokeFrame make_spoke_frame(const Tessellation& t, int sectors) {
    SpokeFrame f;
    f.sectors = sectors;
    const int depth = static_cast<int>(t.generations.size()) - 1;
    f.anchor.assign(depth + 1, 0);
    f.on_spoke.assign(depth + 1, false);
    f.block.assign(depth + 1, 1);
    f.ring.assign(depth + 1, 1);
    for (int g = 1; g <= depth; ++g) {
        f.ring[g] = static_cast<int>(t.generations[g].size());
        if (f.ring[g] % sectors != 0)
            throw NotInvariant("generation " + std::to_string(g) +
                               " does not split into equal sectors");
        f.block[g] = f.ring[g] / sectors;
    }
    if (depth < 1) return f;

    VertexId cur = t.generations[1][0];
    f.anchor[1] = 0;
    f.on_spoke[1] = true;
    int g = 1;
    while (g < depth) {
        const auto& kids = t.vertices[cur].children;
        const int m = static_cast<int>(kids.size());
        if (m == 0) break;
        if (m % 2 == 1) {
            cur = kids[m / 2];
            ++g;
            f.anchor[g] = t.vertices[cur].position;
            f.on_spoke[g] = true;
        } else {
            // The ray crosses between the two middle children and continues
            // through their shared child two generations down.
            VertexId left = kids[m / 2 - 1];
            f.anchor[g + 1] = t.vertices[left].position;
            f.on_spoke[g + 1] = false;
            if (g + 2 > depth) break;
            const auto& lk = t.vertices[left].children;
            if (lk.empty()) break;
            cur = lk.back();
            g += 2;
            f.anchor[g] = t.vertices[cur].position;
            f.on_spoke[g] = true;
        }
    }
    return f;
}

}  // namespace

AddressingScheme color_triangle(const Tessellation& t) {
    if (t.spec.p != 3 || t.spec.q < 7 || t.sibling_stripped)
        throw WrongFamily("triangle coloring applies to {3,q} with q >= 7");
    const int q = t.spec.q;
    const int q4 = q - 2;

    TessellationSpec quad_spec;
    quad_spec.p = 4;
    quad_spec.q = q4;
    quad_spec.max_generation = t.spec.max_generation;
    Tessellation t4 = build_tessellation(quad_spec);
    AddressingScheme s4 = color_square(t4);

    SpokeFrame f3 = make_spoke_frame(t, q);
    SpokeFrame f4 = make_spoke_frame(t4, q4);

    AddressingScheme s;
    s.color_count = q;
    s.edge_color.assign(t.edges.size(), -1);

    for (const Edge& e : t.edges) {
        if (e.kind != EdgeKind::ParentChild) continue;
        VertexId u = e.a;  // parent
        VertexId v = e.b;
        const Vertex& child = t.vertices[v];
        int sector = f3.edge_sector(t, u, v);

        // Counterpart edge inside the quadrilateral tessellation, located via
        // the child vertex's sector-0 representative and the same parent slot.
        int g = child.generation;
        int offs = f3.offset_of(t, v);
        int pos4 = (f4.anchor[g] - offs + f4.ring[g]) % f4.ring[g];
        VertexId v4 = t4.generations[g][pos4];
        const Vertex& child4 = t4.vertices[v4];
        if (child4.parents.size() != child.parents.size())
            throw NotInvariant("sector structures disagree at vertex " + std::to_string(v));
        std::size_t slot = 0;
        while (slot < child.parents.size() && child.parents[slot] != u) ++slot;
        VertexId u4 = child4.parents[slot];

        int c4 = s4.edge_color[edge_of(t4, u4, v4)];
        int sector4 = f4.edge_sector(t4, u4, v4);
        // The counterpart must sit in sector 0 or just across its spoke.
        int expect = (f3.sector_of(t, v) + (sector4 == 0 ? 0 : q - 1)) % q;
        if (sector4 != 0 && sector4 != q4 - 1)
            throw NotInvariant("counterpart edge fell outside sector 0");
        if (expect != sector)
            throw NotInvariant("sector bookkeeping mismatch on edge " + std::to_string(e.id));
        int base = (c4 - sector4 + q4) % q4;
        s.edge_color[e.id] = (base + sector) % q;
    }
    return s;
}

namespace {

void check_quad(const Tessellation& t, const AddressingScheme& s, LocalReport& r,
                const std::array<VertexId, 4>& cycle) {
    std::array<EdgeId, 4> es;
    for (int i = 0; i < 4; ++i) {
        auto e = t.edge_between(cycle[i], cycle[(i + 1) % 4]);
        if (!e) return;
        es[i] = *e;
    }
    for (EdgeId e : es)
        if (!s.colored(e)) return;
    if (s.edge_color[es[0]] != s.edge_color[es[2]] || s.edge_color[es[1]] != s.edge_color[es[3]])
        r.violations.push_back(
            {"opposite-edges",
             {cycle[0], cycle[1], cycle[2], cycle[3]},
             {es[0], es[1], es[2], es[3]}});
}

}  // namespace

LocalReport verify_local(const Tessellation& t, const AddressingScheme& s) {
    LocalReport r;
    for (const Vertex& v : t.vertices) {
        std::vector<int> seen;
        for (EdgeId e : t.incident[v.id]) {
            if (!s.colored(e)) continue;
            if (std::find(seen.begin(), seen.end(), s.edge_color[e]) != seen.end()) {
                r.violations.push_back({"incident-colors", {v.id}, {e}});
                break;
            }
            seen.push_back(s.edge_color[e]);
        }
    }

    if (t.spec.p == 4 || t.sibling_stripped) {
        for (const auto& cycle : t.faces)
            if (cycle.size() == 4)
                check_quad(t, s, r, {cycle[0], cycle[1], cycle[2], cycle[3]});
    } else if (t.spec.p == 3) {
        // Quadrilateral faces of the sibling-stripped tessellation, formed by
        // each sibling edge's common parent and common child.
        for (const Edge& e : t.edges) {
            if (e.kind != EdgeKind::Sibling) continue;
            const Vertex& u = t.vertices[e.a];
            const Vertex& v = t.vertices[e.b];
            VertexId parent = kNoVertex, child = kNoVertex;
            for (VertexId x : u.parents)
                if (std::find(v.parents.begin(), v.parents.end(), x) != v.parents.end())
                    parent = x;
            for (VertexId x : u.children)
                if (std::find(v.children.begin(), v.children.end(), x) != v.children.end())
                    child = x;
            if (parent == kNoVertex || child == kNoVertex) continue;
            check_quad(t, s, r, {parent, e.a, child, e.b});
        }
    }
    r.pass = r.violations.empty();
    return r;
}

namespace {

using Dist = std::vector<std::uint16_t>;

struct SpiState {
    // Per vertex: every achievable shortest-path color distribution, with one
    // witness predecessor per distribution for path reconstruction.
    std::vector<std::map<Dist, std::pair<VertexId, Dist>>> reach;
};

std::vector<EdgeId> reconstruct(const Tessellation& t, const AddressingScheme& s,
                                const SpiState& st, VertexId v, const Dist& d) {
    std::vector<EdgeId> path;
    VertexId cur = v;
    Dist dist = d;
    while (cur != t.origin) {
        const auto& entry = st.reach[cur].at(dist);
        path.push_back(edge_of(t, entry.first, cur));
        dist = entry.second;
        cur = entry.first;
    }
    std::reverse(path.begin(), path.end());
    (void)s;
    return path;
}

SpiState run_spi(const Tessellation& t, const AddressingScheme& s) {
    SpiState st;
    st.reach.resize(t.vertices.size());
    st.reach[t.origin][Dist(s.color_count, 0)] = {kNoVertex, {}};
    for (std::size_t g = 1; g < t.generations.size(); ++g) {
        for (VertexId id : t.generations[g]) {
            const Vertex& v = t.vertices[id];
            for (VertexId u : v.parents) {
                EdgeId e = edge_of(t, u, id);
                if (!s.colored(e))
                    throw NotInvariant("shortest-path edge " + std::to_string(e) +
                                       " is uncolored");
                int c = s.edge_color[e];
                for (const auto& [du, _] : st.reach[u]) {
                    Dist d = du;
                    d[c]++;
                    st.reach[id].emplace(std::move(d), std::make_pair(u, du));
                }
            }
        }
    }
    return st;
}

}  // namespace

SpiReport verify_spi(const Tessellation& t, const AddressingScheme& s) {
    SpiReport r;
    SpiState st = run_spi(t, s);
    for (const auto& gen : t.generations) {
        for (VertexId id : gen) {
            if (st.reach[id].size() <= 1) continue;
            if (r.violations.size() < 16) {
                auto it = st.reach[id].begin();
                const Dist& d1 = it->first;
                const Dist& d2 = std::next(it)->first;
                r.violations.push_back({id, reconstruct(t, s, st, id, d1),
                                        reconstruct(t, s, st, id, d2)});
            }
        }
    }
    r.pass = r.violations.empty();
    return r;
}

NormTable compute_norms(const Tessellation& t, const AddressingScheme& s) {
    SpiState st = run_spi(t, s);
    NormTable n;
    n.norm.resize(t.vertices.size());
    n.color_norm.resize(t.vertices.size());
    for (const Vertex& v : t.vertices) {
        if (st.reach[v.id].size() != 1)
            throw NotInvariant("two shortest paths to vertex " + std::to_string(v.id) +
                               " have different color distributions");
        n.norm[v.id] = v.generation;
        n.color_norm[v.id] = st.reach[v.id].begin()->first;
    }
    return n;
}

}  // namespace pqca
