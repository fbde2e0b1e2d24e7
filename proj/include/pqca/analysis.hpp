#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pqca/addressing.hpp"
#include "pqca/automaton.hpp"
#include "pqca/simulate.hpp"
#include "pqca/tessellation.hpp"

namespace pqca {

enum class Tolerance : std::uint8_t { None, TransientOnly, Combined };
const char* to_string(Tolerance t);

// Fault-tolerance class of the majority-vote automaton on {p,q}.
Tolerance classify(int p, int q);

// ---------------------------------------------------------------------------
// Self-sustaining islands.

struct IslandCertificate {
    std::vector<VertexId> cells;
    // Per cell: in-island guardian count and the threshold it must reach.
    std::vector<int> support;
    std::vector<int> thresholds;
    bool valid = false;
};

IslandCertificate verify_island(const AutomatonSpec& spec, const std::vector<VertexId>& cells);
IslandCertificate make_island(const AutomatonSpec& spec);
bool island_persists(const AutomatonSpec& spec, const std::vector<VertexId>& cells, int T);

// ---------------------------------------------------------------------------
// Opposite-edge sets and pier-supported bridges.

struct OppositeEdgeSet {
    std::vector<EdgeId> edges;
    bool exits_truncation = false;
};

// Closure of {e} under taking the opposite edge across each incident closed
// face; every face must be a quadrilateral (p=4 or sibling-stripped).
OppositeEdgeSet opposite_edge_set(const Tessellation& t, EdgeId e);

struct BridgeCertificate {
    std::vector<VertexId> bridge;  // I
    std::vector<VertexId> piers;   // J
    std::vector<int> support;      // per bridge cell: guardians in I∪J
    std::vector<int> thresholds;
    bool valid = false;
};

BridgeCertificate verify_bridge(const AutomatonSpec& spec, const std::vector<VertexId>& bridge,
                                const std::vector<VertexId>& piers);
BridgeCertificate make_bridge(const AutomatonSpec& spec, int m, int n);
bool bridge_persists(const AutomatonSpec& spec, const std::vector<VertexId>& bridge,
                     const std::vector<VertexId>& piers, int T);

// ---------------------------------------------------------------------------
// Potential functions for the transient-fault sufficient condition.

// n = l+1 space-time components built from a shortest-path-invariant scheme:
// component k (0-based, k < l) maps (a,t) to -(l+1)*norm_k(a) - t and the last
// component maps (a,t) to (l+1)*norm(a) + l*t; they sum to zero everywhere.
struct ToomPotential {
    int color_count = 0;  // l
    int kappa = 1;
    int bound = 0;  // M: l+2 for kappa=1, kappa*(l+2) otherwise
    NormTable norms;

    double component(int k, VertexId a, long long t) const;
};

ToomPotential build_potential(const Tessellation& t, const AddressingScheme& s, int kappa = 1);

struct ToomWitness {
    std::string condition;  // "bound", "zero-sum", "outward", "color"
    VertexId vertex = kNoVertex;
    int color = -1;
    std::vector<VertexId> error_set;  // an all-bad minimal/composed choice
};

struct ToomReport {
    bool pass = false;
    int kappa = 1;
    int bound = 0;
    std::int64_t checked_vertices = 0;
    std::int64_t checked_arcs = 0;
    std::vector<ToomWitness> witnesses;
};

// Checks the three sufficient conditions over every vertex at distance >=
// kappa from the truncation boundary, against all minimal (kappa=1) or
// composed (kappa=2) error sets of the unweakened automaton.
ToomReport verify_toom(const AutomatonSpec& spec, const ToomPotential& pot);

// ---------------------------------------------------------------------------
// Balance-of-payments certificates for combined faults.

struct FlowClassBound {
    std::string cls;
    int reduced_threshold = 0;
    int min_out = 0;
    int max_in = 0;
    int net() const { return min_out - max_in; }
};

struct FlowAssignment {
    int p = 0;
    int q = 0;
    WeakeningRule rule = WeakeningRule::None;
    int r = 0;  // lower bound on every non-terminal's initial money
    int s = 0;  // upper bound on every terminal's final money
    double money_ratio = 0;  // M = 1 + s/r

    std::vector<FlowClassBound> bounds;

    // Dollars moved along an explanation-graph arc from `from` to its voting
    // guardian `to`.
    int arc_value(const Tessellation& t, VertexId from, VertexId to) const;
};

FlowAssignment make_flow(int p, int q);

struct FlowViolation {
    VertexId vertex = kNoVertex;
    std::string cls;
    int min_out = 0;
    int max_in = 0;
    std::string message;
};

struct FlowReport {
    bool pass = false;
    std::vector<FlowViolation> violations;
    std::vector<FlowClassBound> observed;  // worst cases seen per class
    std::int64_t checked_vertices = 0;
};

// Verifies, for every interior vertex, that the worst admissible in/out flow
// configuration leaves at least r dollars (and at most s on terminals).
FlowReport verify_flows(const AutomatonSpec& weakened, const FlowAssignment& flow);

std::string flow_class_of(const Tessellation& t, const FlowAssignment& flow, VertexId v);

// ---------------------------------------------------------------------------
// Explanation graphs.

struct SpaceTimeNode {
    VertexId cell = kNoVertex;
    int time = 0;
    friend bool operator==(const SpaceTimeNode&, const SpaceTimeNode&) = default;
};

struct ExplanationGraph {
    SpaceTimeNode root;
    std::vector<SpaceTimeNode> terminals;     // X*
    std::vector<SpaceTimeNode> nonterminals;  // Y*
    std::vector<std::pair<SpaceTimeNode, SpaceTimeNode>> arcs;  // Z*

    // Time-projected graph (X u Y, Z).
    std::vector<VertexId> terminal_cells;
    std::vector<VertexId> nonterminal_cells;
    std::vector<std::pair<VertexId, VertexId>> edges;

    std::size_t vertex_total() const { return terminal_cells.size() + nonterminal_cells.size(); }
};

// Breadth-first certificate for an error observed in a recorded trajectory of
// a weakened automaton under FrozenZero boundaries. Error-set choices take
// the lexicographically least qualifying minimal set.
ExplanationGraph extract_explanation_graph(const AutomatonSpec& spec, const Trajectory& traj,
                                           VertexId cell, int time);

struct ExplanationCheck {
    bool ok = false;
    std::vector<std::string> problems;
};

ExplanationCheck validate_explanation(const AutomatonSpec& spec, const Trajectory& traj,
                                      const ExplanationGraph& g);

// ln of the number bound on explanation graphs with n vertices: sum over
// depth-first traversal sequences, at most q^(2qn+1).
double log_explanation_count_bound(int q, long long n);
double log_explanation_count_closed_form(int q, long long n);

// Closed-form tail bound q^(2qM+1) * eps / (1 - q^(2qM) * eps), evaluated in
// log space; returns 1 when the bound exceeds 1, throws DomainError when the
// denominator is not positive.
double error_bound(int q, double M, double eps);

}  // namespace pqca
