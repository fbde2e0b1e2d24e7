#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pqca/tessellation.hpp"

namespace pqca {

// Which guardians each cell treats as permanently in error. Chosen per
// tessellation family; every rule also drops the self-vote when q is even.
enum class WeakeningRule : std::uint8_t {
    None,
    IgnoreParents,            // trees, squares, even faces
    IgnoreParentsSiblings,    // triangles: one-parent cells also drop siblings
    IgnoreParentsWeakCousin,  // odd faces >= 5: weak cousin cells drop their cousin
};

const char* to_string(WeakeningRule r);

// Rule used by the combined-fault argument for (p,q); throws
// OutsidePositiveRegion when no such argument applies.
WeakeningRule weakening_rule(int p, int q);

using State = std::vector<std::uint8_t>;
using Mask = std::vector<std::uint8_t>;

enum class BoundaryRule : std::uint8_t {
    PinZero,  // truncation boundary held in the healthy state
    Evolve,   // boundary cells vote over their present guardians
};

struct AutomatonSpec {
    std::shared_ptr<const Tessellation> tess;
    bool self_vote = false;
    WeakeningRule rule = WeakeningRule::None;
    int kappa = 1;

    std::vector<std::vector<VertexId>> guardians;  // sorted, includes self when q even
    std::vector<std::vector<VertexId>> ignored;    // subset of guardians
    std::vector<int> threshold;                    // r+1 with 2r+1 guardians when interior
    std::vector<int> reduced_threshold;
    std::vector<char> boundary;                    // incomplete guardian set

    // Voting guardians (guardians minus ignored), flattened.
    std::vector<std::int32_t> vote_begin;
    std::vector<VertexId> vote_flat;

    std::size_t cells() const { return guardians.size(); }
    std::pair<const VertexId*, const VertexId*> votes(VertexId v) const {
        return {vote_flat.data() + vote_begin[v], vote_flat.data() + vote_begin[v + 1]};
    }
};

// `kappa` >= 2 selects the sped-up automaton for step bookkeeping; the
// weakening requires strength labels (assign_strength) for the weak-cousin
// rule. Throws WeakeningNotApplicable when the rule does not fit (p,q).
AutomatonSpec build_automaton(std::shared_ptr<const Tessellation> t,
                              WeakeningRule rule = WeakeningRule::None, int kappa = 1);

// One synchronous update. Faulted cells are driven to 1 (the greedy adversary
// while the automaton remembers 0); weakened cells substitute 1 for every
// ignored guardian, which is what the reduced threshold encodes.
State step(const AutomatonSpec& spec, const State& s, const Mask& fault_mask,
           BoundaryRule boundary = BoundaryRule::PinZero);

// kappa applications of step with one fault mask per substep.
State speed_up_step(const AutomatonSpec& spec, const State& s,
                    const std::vector<Mask>& fault_masks,
                    BoundaryRule boundary = BoundaryRule::PinZero);

struct ErrorSet {
    VertexId target = kNoVertex;
    std::vector<VertexId> cells;
};

// All voting-guardian subsets of size reduced_threshold(a), in lexicographic
// order of cell ids. Callback returns false to stop early; the function
// reports whether enumeration ran to completion.
bool for_each_minimal_error_set(const AutomatonSpec& spec, VertexId a,
                                const std::function<bool(const std::vector<VertexId>&)>& fn);
std::vector<ErrorSet> minimal_error_sets(const AutomatonSpec& spec, VertexId a);
unsigned long long minimal_error_set_count(const AutomatonSpec& spec, VertexId a);

// kappa = 2 composed sets: unions over one minimal set T for a and one
// minimal set per member of T. Requires every guardian of a to be interior.
bool for_each_composed_error_set(const AutomatonSpec& spec, VertexId a,
                                 const std::function<bool(const std::vector<VertexId>&)>& fn);
unsigned long long composed_error_set_count(const AutomatonSpec& spec, VertexId a);

}  // namespace pqca
