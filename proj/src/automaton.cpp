#include "pqca/automaton.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace pqca {

const char* to_string(WeakeningRule r) {
    switch (r) {
        case WeakeningRule::None: return "none";
        case WeakeningRule::IgnoreParents: return "ignore-parents";
        case WeakeningRule::IgnoreParentsSiblings: return "ignore-parents-siblings";
        case WeakeningRule::IgnoreParentsWeakCousin: return "ignore-parents-weak-cousin";
    }
    return "?";
}

WeakeningRule weakening_rule(int p, int q) {
    if (p == kInfiniteP && q >= 5) return WeakeningRule::IgnoreParents;
    if (p != kInfiniteP && p >= 5 && q >= 5)
        return p % 2 == 0 ? WeakeningRule::IgnoreParents : WeakeningRule::IgnoreParentsWeakCousin;
    if (p == 4 && q >= 7) return WeakeningRule::IgnoreParents;
    if (p == 3 && q >= 9) return WeakeningRule::IgnoreParentsSiblings;
    throw OutsidePositiveRegion("{" + format_p(p) + "," + std::to_string(q) +
                                "} has no combined-fault weakening");
}

AutomatonSpec build_automaton(std::shared_ptr<const Tessellation> t, WeakeningRule rule,
                              int kappa) {
    if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
    const Tessellation& tess = *t;
    if (tess.sibling_stripped)
        throw WeakeningNotApplicable("automata run on the full tessellation");
    const int q = tess.spec.q;
    const int p = tess.spec.p;

    if (rule != WeakeningRule::None) {
        WeakeningRule expected;
        try {
            expected = weakening_rule(p, q);
        } catch (const OutsidePositiveRegion& e) {
            throw WeakeningNotApplicable(e.what());
        }
        if (rule != expected)
            throw WeakeningNotApplicable("rule " + std::string(to_string(rule)) +
                                         " does not apply to {" + format_p(p) + "," +
                                         std::to_string(q) + "}");
    }

    AutomatonSpec spec;
    spec.tess = t;
    spec.self_vote = q % 2 == 0;
    spec.rule = rule;
    spec.kappa = kappa;

    const std::size_t n = tess.vertex_count();
    spec.guardians.resize(n);
    spec.ignored.resize(n);
    spec.threshold.resize(n);
    spec.reduced_threshold.resize(n);
    spec.boundary.resize(n);

    const int full_guardians = spec.self_vote ? q + 1 : q;
    const int full_threshold = (full_guardians + 1) / 2;  // r+1 with 2r+1 guardians

    for (const Vertex& v : tess.vertices) {
        auto& g = spec.guardians[v.id];
        g = tess.neighbors(v.id);
        if (spec.self_vote) g.push_back(v.id);
        std::sort(g.begin(), g.end());
        spec.boundary[v.id] = !v.interior;
        spec.threshold[v.id] = full_threshold;

        auto& ig = spec.ignored[v.id];
        switch (rule) {
            case WeakeningRule::None:
                break;
            case WeakeningRule::IgnoreParents:
                ig = v.parents;
                break;
            case WeakeningRule::IgnoreParentsSiblings:
                ig = v.parents;
                if (v.kind == VertexKind::OneParent)
                    ig.insert(ig.end(), v.siblings.begin(), v.siblings.end());
                break;
            case WeakeningRule::IgnoreParentsWeakCousin:
                if (v.strength == Strength::NotApplicable && v.id != tess.origin)
                    throw WeakeningNotApplicable(
                        "weak-cousin rule needs strength labels (assign_strength)");
                ig = v.parents;
                if (v.strength == Strength::Weak && !v.cousins.empty() &&
                    v.kind == VertexKind::OneParent)
                    ig.insert(ig.end(), v.cousins.begin(), v.cousins.end());
                break;
        }
        if (rule != WeakeningRule::None && spec.self_vote) ig.push_back(v.id);
        std::sort(ig.begin(), ig.end());
        spec.reduced_threshold[v.id] = full_threshold - static_cast<int>(ig.size());
        if (v.interior && spec.reduced_threshold[v.id] < 1)
            throw WeakeningNotApplicable("reduced threshold below 1 at vertex " +
                                         std::to_string(v.id));
    }

    spec.vote_begin.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<VertexId> votes;
        std::set_difference(spec.guardians[i].begin(), spec.guardians[i].end(),
                            spec.ignored[i].begin(), spec.ignored[i].end(),
                            std::back_inserter(votes));
        spec.vote_begin[i + 1] = spec.vote_begin[i] + static_cast<std::int32_t>(votes.size());
        spec.vote_flat.insert(spec.vote_flat.end(), votes.begin(), votes.end());
    }
    return spec;
}

State step(const AutomatonSpec& spec, const State& s, const Mask& fault_mask,
           BoundaryRule boundary) {
    const std::size_t n = spec.cells();
    if (s.size() != n || fault_mask.size() != n)
        throw ShapeMismatch("state/mask size does not match the automaton");
    State out(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (spec.boundary[v] && boundary == BoundaryRule::PinZero) {
            out[v] = 0;
            continue;
        }
        if (fault_mask[v]) {
            out[v] = 1;
            continue;
        }
        int sum = 0;
        auto [it, end] = spec.votes(static_cast<VertexId>(v));
        for (; it != end; ++it) sum += s[*it];
        out[v] = sum >= spec.reduced_threshold[v] ? 1 : 0;
    }
    return out;
}

State speed_up_step(const AutomatonSpec& spec, const State& s,
                    const std::vector<Mask>& fault_masks, BoundaryRule boundary) {
    if (static_cast<int>(fault_masks.size()) != spec.kappa)
        throw ShapeMismatch("expected one fault mask per substep");
    State cur = s;
    for (const Mask& m : fault_masks) cur = step(spec, cur, m, boundary);
    return cur;
}

namespace {

bool for_each_combination(const std::vector<VertexId>& pool, int k,
                          const std::function<bool(const std::vector<VertexId>&)>& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n || k < 0) return true;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<VertexId> pick(k);
    while (true) {
        for (int i = 0; i < k; ++i) pick[i] = pool[idx[i]];
        if (!fn(pick)) return false;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return true;
        idx[i]++;
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<VertexId> voting_pool(const AutomatonSpec& spec, VertexId a) {
    auto [it, end] = spec.votes(a);
    return {it, end};
}

}  // namespace

bool for_each_minimal_error_set(const AutomatonSpec& spec, VertexId a,
                                const std::function<bool(const std::vector<VertexId>&)>& fn) {
    if (spec.boundary[a]) throw BoundaryVertex("minimal error sets need an interior cell");
    return for_each_combination(voting_pool(spec, a), spec.reduced_threshold[a], fn);
}

std::vector<ErrorSet> minimal_error_sets(const AutomatonSpec& spec, VertexId a) {
    std::vector<ErrorSet> out;
    for_each_minimal_error_set(spec, a, [&](const std::vector<VertexId>& s) {
        out.push_back({a, s});
        return true;
    });
    return out;
}

unsigned long long minimal_error_set_count(const AutomatonSpec& spec, VertexId a) {
    if (spec.boundary[a]) throw BoundaryVertex("minimal error sets need an interior cell");
    return binomial(static_cast<int>(voting_pool(spec, a).size()), spec.reduced_threshold[a]);
}

bool for_each_composed_error_set(const AutomatonSpec& spec, VertexId a,
                                 const std::function<bool(const std::vector<VertexId>&)>& fn) {
    if (spec.boundary[a]) throw BoundaryVertex("composed error sets need an interior cell");
    for (VertexId g : spec.guardians[a])
        if (spec.boundary[g])
            throw BoundaryVertex("composed error sets need distance >= 2 from the boundary");

    bool complete = true;
    for_each_minimal_error_set(spec, a, [&](const std::vector<VertexId>& t_set) {
        // One minimal set per member of t_set; walk the cross product.
        std::vector<std::vector<ErrorSet>> choices;
        choices.reserve(t_set.size());
        for (VertexId c : t_set) choices.push_back(minimal_error_sets(spec, c));
        std::vector<std::size_t> pick(t_set.size(), 0);
        while (true) {
            std::vector<VertexId> u;
            for (std::size_t i = 0; i < pick.size(); ++i) {
                const auto& cells = choices[i][pick[i]].cells;
                u.insert(u.end(), cells.begin(), cells.end());
            }
            std::sort(u.begin(), u.end());
            u.erase(std::unique(u.begin(), u.end()), u.end());
            if (!fn(u)) {
                complete = false;
                return false;
            }
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
            if (i == pick.size()) return true;
        }
    });
    return complete;
}

unsigned long long composed_error_set_count(const AutomatonSpec& spec, VertexId a) {
    if (spec.boundary[a]) throw BoundaryVertex("composed error sets need an interior cell");
    unsigned long long total = 0;
    for_each_minimal_error_set(spec, a, [&](const std::vector<VertexId>& t_set) {
        unsigned long long prod = 1;
        for (VertexId c : t_set) prod *= minimal_error_set_count(spec, c);
        total += prod;
        return true;
    });
    return total;
}

}  // namespace pqca
