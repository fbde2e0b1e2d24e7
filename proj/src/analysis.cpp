#include "pqca/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace pqca {

const char* to_string(Tolerance t) {
    switch (t) {
        case Tolerance::None: return "None";
        case Tolerance::TransientOnly: return "TransientOnly";
        case Tolerance::Combined: return "Combined";
    }
    return "?";
}

Tolerance classify(int p, int q) {
    if ((p != kInfiniteP && p < 3) || q < 2)
        throw DomainError("classify needs p >= 3 (or infinite) and q >= 2");
    const bool finite = p != kInfiniteP;
    if (q == 2) return Tolerance::None;
    if (finite && q <= 4) return Tolerance::None;
    if (p == 3 && q <= 6) return Tolerance::None;
    const bool combined = (finite && p >= 5 && q >= 5) || (p == 4 && q >= 7) ||
                          (p == 3 && q >= 9) || (!finite && q >= 5);
    return combined ? Tolerance::Combined : Tolerance::TransientOnly;
}

// ---------------------------------------------------------------------------
// Islands.

IslandCertificate verify_island(const AutomatonSpec& spec, const std::vector<VertexId>& cells) {
    IslandCertificate cert;
    cert.cells = cells;
    std::sort(cert.cells.begin(), cert.cells.end());
    cert.valid = !cells.empty();
    for (VertexId v : cert.cells) {
        int in_island = 0;
        for (VertexId g : spec.guardians[v])
            in_island += std::binary_search(cert.cells.begin(), cert.cells.end(), g) ? 1 : 0;
        cert.support.push_back(in_island);
        cert.thresholds.push_back(spec.threshold[v]);
        if (spec.boundary[v] || in_island < spec.threshold[v]) cert.valid = false;
    }
    return cert;
}

IslandCertificate make_island(const AutomatonSpec& spec) {
    const Tessellation& t = *spec.tess;
    const int p = t.spec.p;
    const int q = t.spec.q;
    std::vector<VertexId> cells;

    if (q == 2) {
        if (!t.vertices[t.origin].interior)
            throw InsufficientMargin("need at least one built generation");
        for (VertexId n : t.neighbors(t.origin)) {
            if (t.vertices[n].interior) {
                cells = {t.origin, n};
                break;
            }
        }
        if (cells.empty()) throw InsufficientMargin("no interior neighbor of the origin");
    } else if (p != kInfiniteP && q >= 3 && q <= 4) {
        for (const auto& cycle : t.faces) {
            bool ok = true;
            for (VertexId v : cycle) ok = ok && t.vertices[v].interior;
            if (ok) {
                cells = cycle;
                break;
            }
        }
        if (cells.empty()) throw InsufficientMargin("no closed face with interior vertices");
    } else if (p == 3 && q >= 5 && q <= 6) {
        cells = t.neighbors(t.origin);
        cells.push_back(t.origin);
        for (VertexId v : cells)
            if (!t.vertices[v].interior)
                throw InsufficientMargin("origin neighborhood is not interior");
    } else {
        throw NotApplicable("{" + format_p(p) + "," + std::to_string(q) +
                            "} has no self-sustaining island construction");
    }
    return verify_island(spec, cells);
}

bool island_persists(const AutomatonSpec& spec, const std::vector<VertexId>& cells, int T) {
    return run_deterministic(spec, cells, T, /*clamp_others=*/true).always_in_error(cells);
}

// ---------------------------------------------------------------------------
// Opposite-edge sets and bridges.

namespace {

// face index list per edge id (closed faces only)
std::vector<std::vector<int>> edge_face_index(const Tessellation& t) {
    std::vector<std::vector<int>> by_edge(t.edges.size());
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        auto es = t.face_edges(f);
        if (!es) continue;
        for (EdgeId e : *es) by_edge[e].push_back(static_cast<int>(f));
    }
    return by_edge;
}

EdgeId opposite_in_quad(const Tessellation& t, int face, EdgeId e) {
    auto es = *t.face_edges(face);  // 4 edges in cycle order
    for (int i = 0; i < 4; ++i)
        if (es[i] == e) return es[(i + 2) % 4];
    throw Error("edge not on face");
}

}  // namespace

OppositeEdgeSet opposite_edge_set(const Tessellation& t, EdgeId e) {
    if (t.spec.p != 4 && !t.sibling_stripped)
        throw FaceDegreeNot4("opposite-edge sets need quadrilateral faces");
    for (const auto& cycle : t.faces)
        if (cycle.size() != 4) throw FaceDegreeNot4("found a non-quadrilateral face");

    auto by_edge = edge_face_index(t);
    OppositeEdgeSet out;
    std::set<EdgeId> seen{e};
    std::deque<EdgeId> queue{e};
    while (!queue.empty()) {
        EdgeId cur = queue.front();
        queue.pop_front();
        out.edges.push_back(cur);
        if (by_edge[cur].size() < 2) out.exits_truncation = true;
        for (int f : by_edge[cur]) {
            EdgeId opp = opposite_in_quad(t, f, cur);
            if (seen.insert(opp).second) queue.push_back(opp);
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

BridgeCertificate verify_bridge(const AutomatonSpec& spec, const std::vector<VertexId>& bridge,
                                const std::vector<VertexId>& piers) {
    BridgeCertificate cert;
    cert.bridge = bridge;
    cert.piers = piers;
    std::sort(cert.bridge.begin(), cert.bridge.end());
    std::sort(cert.piers.begin(), cert.piers.end());
    cert.valid = !bridge.empty();
    auto in_union = [&](VertexId v) {
        return std::binary_search(cert.bridge.begin(), cert.bridge.end(), v) ||
               std::binary_search(cert.piers.begin(), cert.piers.end(), v);
    };
    for (VertexId v : cert.bridge) {
        int support = 0;
        for (VertexId g : spec.guardians[v]) support += in_union(g) ? 1 : 0;
        cert.support.push_back(support);
        cert.thresholds.push_back(spec.threshold[v]);
        if (spec.boundary[v] || support < spec.threshold[v]) cert.valid = false;
    }
    return cert;
}

namespace {

// Chain of opposite edges e_{-m} .. e_n seeded at an origin-incident edge of a
// quadrilateral-faced tessellation; index 0 is the seed.
std::vector<std::vector<VertexId>> opposite_edge_chain(const Tessellation& t, int m, int n) {
    auto by_edge = edge_face_index(t);
    EdgeId seed = *t.edge_between(t.origin, t.vertices[t.origin].children.front());
    if (by_edge[seed].size() < 2)
        throw InsufficientMargin("seed edge is not interior to the truncation");

    auto walk = [&](int start_face, int steps) {
        std::vector<EdgeId> chain;
        EdgeId cur = seed;
        int face = start_face;
        for (int i = 0; i < steps; ++i) {
            EdgeId next = opposite_in_quad(t, face, cur);
            chain.push_back(next);
            int prev_face = face;
            face = -1;
            for (int f : by_edge[next])
                if (f != prev_face) face = f;
            if (face < 0 && i + 1 < steps)
                throw InsufficientMargin("opposite-edge chain exits the truncation");
            cur = next;
        }
        return chain;
    };

    std::vector<EdgeId> right = walk(by_edge[seed][0], n);
    std::vector<EdgeId> left = walk(by_edge[seed][1], m);

    std::vector<std::vector<VertexId>> indexed(m + n + 1);
    auto ends = [&](EdgeId e) {
        return std::vector<VertexId>{t.edges[e].a, t.edges[e].b};
    };
    indexed[m] = ends(seed);
    for (int i = 0; i < n; ++i) indexed[m + 1 + i] = ends(right[i]);
    for (int i = 0; i < m; ++i) indexed[m - 1 - i] = ends(left[i]);
    return indexed;  // indexed[k] holds the vertex pair of e_{k-m}
}

}  // namespace

BridgeCertificate make_bridge(const AutomatonSpec& spec, int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("bridge spans need m, n >= 1");
    const Tessellation& t = *spec.tess;
    const int p = t.spec.p;
    const int q = t.spec.q;

    std::vector<VertexId> bridge, piers;
    if (p == kInfiniteP && (q == 3 || q == 4)) {
        // A two-way path through the origin along two distinct branches.
        auto descend = [&](bool first, int depth) {
            std::vector<VertexId> path;
            VertexId cur = t.origin;
            for (int i = 0; i < depth; ++i) {
                const auto& kids = t.vertices[cur].children;
                if (kids.empty()) throw InsufficientMargin("path exits the truncation");
                cur = first ? kids.front() : kids.back();
                path.push_back(cur);
            }
            return path;
        };
        auto right = descend(true, n);
        auto left = descend(false, m);
        bridge.push_back(t.origin);
        bridge.insert(bridge.end(), right.begin(), right.end() - 1);
        bridge.insert(bridge.end(), left.begin(), left.end() - 1);
        piers = {right.back(), left.back()};
    } else if (p == 4 && (q == 5 || q == 6)) {
        auto chain = opposite_edge_chain(t, m, n);
        for (int k = 1; k + 1 < static_cast<int>(chain.size()); ++k)
            bridge.insert(bridge.end(), chain[k].begin(), chain[k].end());
        piers.insert(piers.end(), chain.front().begin(), chain.front().end());
        piers.insert(piers.end(), chain.back().begin(), chain.back().end());
    } else if (p == 3 && (q == 7 || q == 8)) {
        Tessellation stripped = strip_sibling_edges(t);
        auto chain = opposite_edge_chain(stripped, m, n);
        for (int k = 1; k + 1 < static_cast<int>(chain.size()); ++k)
            bridge.insert(bridge.end(), chain[k].begin(), chain[k].end());
        piers.insert(piers.end(), chain.front().begin(), chain.front().end());
        piers.insert(piers.end(), chain.back().begin(), chain.back().end());
    } else {
        throw NotApplicable("{" + format_p(p) + "," + std::to_string(q) +
                            "} has no pier-supported bridge construction");
    }

    std::sort(bridge.begin(), bridge.end());
    bridge.erase(std::unique(bridge.begin(), bridge.end()), bridge.end());
    std::sort(piers.begin(), piers.end());
    piers.erase(std::unique(piers.begin(), piers.end()), piers.end());
    return verify_bridge(spec, bridge, piers);
}

bool bridge_persists(const AutomatonSpec& spec, const std::vector<VertexId>& bridge,
                     const std::vector<VertexId>& piers, int T) {
    return run_deterministic(spec, bridge, T, /*clamp_others=*/true, piers)
        .always_in_error(bridge);
}

// ---------------------------------------------------------------------------
// Potentials.

double ToomPotential::component(int k, VertexId a, long long t) const {
    const int l = color_count;
    if (k < l) return -double(l + 1) * norms.color_norm[a][k] - double(t);
    return double(l + 1) * norms.norm[a] + double(l) * t;
}

ToomPotential build_potential(const Tessellation& t, const AddressingScheme& s, int kappa) {
    if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
    ToomPotential pot;
    pot.color_count = s.color_count;
    pot.kappa = kappa;
    pot.bound = kappa >= 2 ? kappa * (s.color_count + 2) : s.color_count + 2;
    pot.norms = compute_norms(t, s);
    return pot;
}

namespace {

std::vector<VertexId> ball(const Tessellation& t, VertexId v, int radius) {
    std::vector<int> dist(t.vertex_count(), -1);
    std::deque<VertexId> queue{v};
    dist[v] = 0;
    std::vector<VertexId> out;
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        out.push_back(cur);
        if (dist[cur] == radius) continue;
        for (VertexId w : t.neighbors(cur))
            if (dist[w] < 0) {
                dist[w] = dist[cur] + 1;
                queue.push_back(w);
            }
    }
    return out;
}

std::vector<VertexId> lex_least_subset(std::vector<VertexId> pool, int k) {
    std::sort(pool.begin(), pool.end());
    pool.resize(k);
    return pool;
}

}  // namespace

ToomReport verify_toom(const AutomatonSpec& spec, const ToomPotential& pot) {
    if (spec.rule != WeakeningRule::None)
        throw NotApplicable("potential conditions are checked on the unweakened automaton");
    const Tessellation& t = *spec.tess;
    const int l = pot.color_count;
    const int kappa = pot.kappa;
    const int M = pot.bound;
    const auto& norm = pot.norms.norm;
    const auto& cnorm = pot.norms.color_norm;

    ToomReport rep;
    rep.kappa = kappa;
    rep.bound = M;

    // Region: distance >= kappa from the truncation boundary.
    std::vector<char> in_region(t.vertex_count(), 0);
    for (const Vertex& v : t.vertices) {
        if (!v.interior) continue;
        bool ok = true;
        if (kappa >= 2)
            for (VertexId g : spec.guardians[v.id]) ok = ok && t.vertices[g].interior;
        in_region[v.id] = ok ? 1 : 0;
    }

    auto add_witness = [&](std::string cond, VertexId v, int color,
                           std::vector<VertexId> cells) {
        if (rep.witnesses.size() < 16)
            rep.witnesses.push_back({std::move(cond), v, color, std::move(cells)});
    };

    for (const Vertex& vx : t.vertices) {
        if (!in_region[vx.id]) continue;
        const VertexId a = vx.id;
        rep.checked_vertices++;

        // Condition: every component changes by at most M along dependence
        // arcs (time cancels, so the check is time-free).
        for (VertexId b : ball(t, a, kappa)) {
            rep.checked_arcs++;
            for (int k = 0; k < l; ++k) {
                double d = -double(l + 1) * (double(cnorm[b][k]) - double(cnorm[a][k])) + 1.0;
                if (std::abs(d) > M) add_witness("bound", a, k, {b});
            }
            double d = double(l + 1) * (norm[b] - norm[a]) - double(l);
            if (std::abs(d) > M) add_witness("bound", a, -1, {b});
        }

        // Condition: the components sum to zero (the norm identity).
        long long sum = 0;
        for (int k = 0; k < l; ++k) sum += cnorm[a][k];
        if (sum != norm[a]) add_witness("zero-sum", a, -1, {});

        // Condition: every error set reaches strictly outward, and for every
        // color reaches a cell no deeper in that color.
        const int thr_a = spec.reduced_threshold[a];
        if (kappa == 1) {
            std::vector<VertexId> bad;
            for (VertexId g : spec.guardians[a])
                if (norm[g] <= norm[a]) bad.push_back(g);
            if (static_cast<int>(bad.size()) >= thr_a)
                add_witness("outward", a, -1, lex_least_subset(bad, thr_a));
            for (int k = 0; k < l; ++k) {
                std::vector<VertexId> badk;
                for (VertexId g : spec.guardians[a])
                    if (cnorm[g][k] > cnorm[a][k]) badk.push_back(g);
                if (static_cast<int>(badk.size()) >= thr_a)
                    add_witness("color", a, k, lex_least_subset(badk, thr_a));
            }
        } else if (kappa == 2) {
            // A composed set is a union of one minimal set per member of a
            // minimal set for a; a property fails exactly when some minimal
            // set T consists of cells c that each own a fully-bad minimal set.
            auto bad_tier = [&](auto&& is_bad) {
                std::vector<VertexId> bad_cells;
                for (VertexId c : spec.guardians[a]) {
                    int bad = 0;
                    for (VertexId g : spec.guardians[c]) bad += is_bad(g) ? 1 : 0;
                    if (bad >= spec.reduced_threshold[c]) bad_cells.push_back(c);
                }
                return bad_cells;
            };
            auto bad1 = bad_tier([&](VertexId g) { return norm[g] <= norm[a]; });
            if (static_cast<int>(bad1.size()) >= thr_a)
                add_witness("outward", a, -1, lex_least_subset(bad1, thr_a));
            for (int k = 0; k < l; ++k) {
                auto badk = bad_tier([&](VertexId g) { return cnorm[g][k] > cnorm[a][k]; });
                if (static_cast<int>(badk.size()) >= thr_a)
                    add_witness("color", a, k, lex_least_subset(badk, thr_a));
            }
        } else {
            throw NotApplicable("speed-up checks support kappa in {1,2}");
        }
    }

    rep.pass = rep.witnesses.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Flow assignments.

namespace {

enum class FlowFamily { Tree, EvenFace, Triangle, OddFace };

FlowFamily family_of(int p) {
    if (p == kInfiniteP) return FlowFamily::Tree;
    if (p == 3) return FlowFamily::Triangle;
    if (p % 2 == 0) return FlowFamily::EvenFace;
    return FlowFamily::OddFace;
}

bool is_sibling(const Tessellation& t, VertexId a, VertexId b) {
    const auto& s = t.vertices[a].siblings;
    return std::find(s.begin(), s.end(), b) != s.end();
}

bool is_cousin(const Tessellation& t, VertexId a, VertexId b) {
    const auto& s = t.vertices[a].cousins;
    return std::find(s.begin(), s.end(), b) != s.end();
}

Strength cousin_strength(const Tessellation& t, VertexId v) {
    const auto& c = t.vertices[v].cousins;
    return c.empty() ? Strength::NotApplicable : t.vertices[c.front()].strength;
}

}  // namespace

std::string flow_class_of(const Tessellation& t, const FlowAssignment& flow, VertexId v) {
    const Vertex& vx = t.vertex(v);
    if (vx.kind == VertexKind::Origin) return "origin";
    switch (family_of(flow.p)) {
        case FlowFamily::Tree:
            return "cell";
        case FlowFamily::EvenFace:
        case FlowFamily::Triangle:
            return vx.kind == VertexKind::TwoParent ? "two-parent" : "one-parent";
        case FlowFamily::OddFace: {
            if (vx.kind == VertexKind::TwoParent) return "two-parent";
            if (vx.cousins.empty()) return "non-cousin-one-parent";
            if (vx.strength == Strength::Strong) return "strong-cousin";
            return cousin_strength(t, v) == Strength::Strong ? "weak-cousin-strong-cousin"
                                                             : "weak-cousin-weak-cousin";
        }
    }
    return "?";
}

int FlowAssignment::arc_value(const Tessellation& t, VertexId from, VertexId to) const {
    switch (family_of(p)) {
        case FlowFamily::Tree:
            return 1;
        case FlowFamily::EvenFace:
            return (t.vertices[from].kind == VertexKind::OneParent &&
                    t.vertices[to].kind == VertexKind::TwoParent)
                       ? 1
                       : 3;
        case FlowFamily::Triangle:
            return is_sibling(t, from, to) ? 2 : 3;
        case FlowFamily::OddFace: {
            if (is_cousin(t, from, to)) return 2;
            const Vertex& target = t.vertices[to];
            if (target.kind == VertexKind::TwoParent) return 4;
            if (target.strength == Strength::Weak && !target.cousins.empty())
                return cousin_strength(t, to) == Strength::Strong ? 6 : 8;
            return 9;
        }
    }
    return 0;
}

FlowAssignment make_flow(int p, int q) {
    FlowAssignment f;
    f.p = p;
    f.q = q;
    f.rule = weakening_rule(p, q);  // throws OutsidePositiveRegion

    const bool self = q % 2 == 0;
    const int threshold = ((self ? q + 1 : q) + 1) / 2;
    auto rho = [&](int ignored) { return threshold - ignored - (self ? 1 : 0); };

    // min_out sums the rho smallest admissible arc values: `capped` lists the
    // small values with their structural multiplicity caps, `fill` is the
    // smallest value available without limit.
    auto bound = [&](std::string cls, int reduced,
                     std::vector<std::pair<int, int>> capped, int fill, int max_in) {
        FlowClassBound b;
        b.cls = std::move(cls);
        b.reduced_threshold = reduced;
        int need = reduced;
        for (auto [val, cap] : capped) {
            int take = std::min(cap, need);
            b.min_out += take * val;
            need -= take;
        }
        b.min_out += need * fill;
        b.max_in = max_in;
        f.bounds.push_back(b);
    };

    switch (family_of(p)) {
        case FlowFamily::Tree:
            bound("cell", rho(1), {}, 1, 1);
            f.s = 1;
            break;
        case FlowFamily::EvenFace: {
            // A one-parent vertex feeds at most two (p=4) or one (p>=6)
            // two-parent children along the cheap arcs.
            const int special_cap = p == 4 ? 2 : 1;
            bound("one-parent", rho(1), {{1, special_cap}}, 3, 3);
            bound("two-parent", rho(2), {}, 3, p == 4 ? 4 : 2);
            f.s = p == 4 ? 6 : 3;
            break;
        }
        case FlowFamily::Triangle:
            bound("one-parent", rho(3), {}, 3, 5);
            bound("two-parent", rho(2), {{2, 2}}, 3, 6);
            f.s = 6;
            break;
        case FlowFamily::OddFace:
            bound("non-cousin-one-parent", rho(1), {{4, 1}}, 6, 9);
            bound("two-parent", rho(2), {}, 9, 8);
            bound("strong-cousin", rho(1), {{2, 1}}, 8, 9);
            bound("weak-cousin-strong-cousin", rho(2), {}, 9, 8);
            bound("weak-cousin-weak-cousin", rho(2), {}, 9, 8);
            f.s = 9;
            break;
    }

    f.r = f.bounds.front().net();
    for (const auto& b : f.bounds) f.r = std::min(f.r, b.net());
    if (f.r < 1) throw Error("flow assignment leaves a class without funds");
    f.money_ratio = 1.0 + double(f.s) / f.r;
    return f;
}

FlowReport verify_flows(const AutomatonSpec& spec, const FlowAssignment& flow) {
    const Tessellation& t = *spec.tess;
    if (spec.rule != flow.rule)
        throw NotApplicable("flow assignment was built for a different weakening");
    if (t.spec.p != flow.p || t.spec.q != flow.q)
        throw NotApplicable("flow assignment was built for a different tessellation");

    FlowReport rep;
    std::map<std::string, FlowClassBound> observed;

    for (const Vertex& vx : t.vertices) {
        if (!vx.interior) continue;
        const VertexId v = vx.id;
        rep.checked_vertices++;
        const std::string cls = flow_class_of(t, flow, v);

        std::vector<int> out_values;
        {
            auto [it, end] = spec.votes(v);
            for (; it != end; ++it) out_values.push_back(flow.arc_value(t, v, *it));
        }
        std::sort(out_values.begin(), out_values.end());
        const int reduced = spec.reduced_threshold[v];
        int min_out = 0;
        if (static_cast<int>(out_values.size()) < reduced) {
            rep.violations.push_back({v, cls, 0, 0, "fewer voting guardians than the threshold"});
            continue;
        }
        for (int i = 0; i < reduced; ++i) min_out += out_values[i];

        int max_in = 0;
        for (VertexId d : spec.guardians[v]) {
            if (d == v) continue;
            auto [it, end] = spec.votes(d);
            if (std::find(it, end, v) != end) max_in += flow.arc_value(t, d, v);
        }

        if (cls != "origin") {
            auto [mapit, inserted] = observed.try_emplace(cls);
            FlowClassBound& o = mapit->second;
            if (inserted) {
                o.cls = cls;
                o.reduced_threshold = reduced;
                o.min_out = min_out;
                o.max_in = max_in;
            } else {
                o.reduced_threshold = std::min(o.reduced_threshold, reduced);
                o.min_out = std::min(o.min_out, min_out);
                o.max_in = std::max(o.max_in, max_in);
            }
        }

        if (min_out - max_in < flow.r)
            rep.violations.push_back({v, cls, min_out, max_in,
                                      "worst-case net below the funds bound"});
        if (max_in > flow.s)
            rep.violations.push_back({v, cls, min_out, max_in,
                                      "in-flow exceeds the terminal bound"});
    }

    for (auto& [cls, b] : observed) rep.observed.push_back(b);
    rep.pass = rep.violations.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Explanation graphs.

ExplanationGraph extract_explanation_graph(const AutomatonSpec& spec, const Trajectory& traj,
                                           VertexId cell, int time) {
    if (traj.policy != BoundaryPolicy::FrozenZero)
        throw NotApplicable("explanation extraction needs a frozen-boundary trajectory");
    if (time < 0 || time >= static_cast<int>(traj.states.size()))
        throw RootNotInError("time outside the recorded trajectory");
    if (!traj.states[time][cell]) throw RootNotInError("root cell is not in error");

    ExplanationGraph g;
    g.root = {cell, time};
    std::deque<SpaceTimeNode> queue{g.root};
    std::unordered_map<VertexId, int> latest;

    while (!queue.empty()) {
        SpaceTimeNode node = queue.front();
        queue.pop_front();
        auto it = latest.find(node.cell);
        if (it != latest.end() && it->second >= node.time) continue;
        latest[node.cell] = node.time;

        if (traj.trace.at_fault(node.cell, node.time)) {
            g.terminals.push_back(node);
            continue;
        }
        if (node.time == 0 || spec.boundary[node.cell])
            throw Error("error without a fault explanation in the trajectory");

        g.nonterminals.push_back(node);
        const int prev = node.time - 1;
        std::vector<VertexId> pool;
        {
            auto [vit, vend] = spec.votes(node.cell);
            for (; vit != vend; ++vit)
                if (traj.states[prev][*vit]) pool.push_back(*vit);
        }
        const int reduced = spec.reduced_threshold[node.cell];
        if (static_cast<int>(pool.size()) < reduced)
            throw Error("recorded state does not justify the error");
        // Lexicographically least qualifying minimal error set.
        for (int i = 0; i < reduced; ++i) {
            SpaceTimeNode target{pool[i], prev};
            g.arcs.push_back({node, target});
            queue.push_back(target);
        }
    }

    for (const auto& n : g.terminals) g.terminal_cells.push_back(n.cell);
    for (const auto& n : g.nonterminals) g.nonterminal_cells.push_back(n.cell);
    std::set<std::pair<VertexId, VertexId>> edges;
    for (const auto& [a, b] : g.arcs)
        if (latest[a.cell] == a.time && latest[b.cell] == b.time)
            edges.insert({a.cell, b.cell});
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

ExplanationCheck validate_explanation(const AutomatonSpec& spec, const Trajectory& traj,
                                      const ExplanationGraph& g) {
    ExplanationCheck c;
    std::map<VertexId, int> times;
    std::map<std::pair<VertexId, int>, int> out_degree, in_degree;
    auto note = [&](const SpaceTimeNode& n) {
        auto [it, ok] = times.try_emplace(n.cell, n.time);
        if (!ok && it->second != n.time)
            c.problems.push_back("cell " + std::to_string(n.cell) + " appears at two times");
    };
    for (const auto& n : g.terminals) note(n);
    for (const auto& n : g.nonterminals) note(n);
    for (const auto& [a, b] : g.arcs) {
        out_degree[{a.cell, a.time}]++;
        in_degree[{b.cell, b.time}]++;
        if (b.time != a.time - 1) c.problems.push_back("arc does not step back one time unit");
    }
    for (const auto& n : g.terminals) {
        if (out_degree.count({n.cell, n.time}))
            c.problems.push_back("terminal with outgoing arcs");
        if (!traj.trace.at_fault(n.cell, n.time))
            c.problems.push_back("terminal without a recorded fault");
    }
    for (const auto& n : g.nonterminals) {
        if (traj.trace.at_fault(n.cell, n.time))
            c.problems.push_back("non-terminal at a recorded fault");
        if (out_degree[{n.cell, n.time}] < spec.reduced_threshold[n.cell])
            c.problems.push_back("non-terminal out-degree below the reduced threshold");
        if (!traj.states[n.time][n.cell]) c.problems.push_back("non-terminal not in error");
    }
    for (const auto& n : g.terminals)
        if (!traj.states[n.time][n.cell]) c.problems.push_back("terminal not in error");
    // Single source: only the root lacks incoming arcs.
    for (const auto& [key, _] : out_degree) {
        if (key.first == g.root.cell && key.second == g.root.time) continue;
        if (!in_degree.count(key)) c.problems.push_back("non-root node without incoming arcs");
    }
    c.ok = c.problems.empty();
    return c;
}

double log_explanation_count_bound(int q, long long n) {
    if (q < 2 || n < 1) throw DomainError("count bound needs q >= 2, n >= 1");
    const double K = 2.0 * q * n;
    // ln sum_{k=1..K} q^k = (K+1) ln q - ln(q-1) + ln(1 - q^{-K})
    return (K + 1) * std::log(q) - std::log(double(q - 1)) +
           std::log1p(-std::exp(-K * std::log(q)));
}

double log_explanation_count_closed_form(int q, long long n) {
    if (q < 2 || n < 1) throw DomainError("count bound needs q >= 2, n >= 1");
    return (2.0 * q * n + 1.0) * std::log(q);
}

double error_bound(int q, double M, double eps) {
    if (q < 2 || M <= 0) throw DomainError("error bound needs q >= 2 and M > 0");
    if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("eps must lie in [0,1]");
    if (eps == 0.0) return 0.0;
    const double log_mass = 2.0 * q * M * std::log(double(q));
    const double t = log_mass + std::log(eps);  // ln(q^{2qM} eps)
    if (t >= 0.0) throw DomainError("geometric series diverges: q^{2qM} eps >= 1");
    const double log_num = log_mass + std::log(double(q)) + std::log(eps);
    const double log_den = std::log1p(-std::exp(t));
    const double lb = log_num - log_den;
    return lb >= 0.0 ? 1.0 : std::exp(lb);
}

}  // namespace pqca
