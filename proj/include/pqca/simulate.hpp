#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pqca/automaton.hpp"
#include "pqca/faults.hpp"

namespace pqca {

// FrozenZero pins the truncation boundary to the healthy state for all time
// (optimistic). AdversarialBoundary starts the boundary generation in error
// and lets it evolve voting over present guardians (pessimistic: the worst
// initial condition the unbuilt region can hand the truncation).
enum class BoundaryPolicy : std::uint8_t { FrozenZero, AdversarialBoundary };

const char* to_string(BoundaryPolicy p);

struct TrialResult {
    std::vector<std::uint8_t> origin_error;  // indices 0..T
    std::vector<double> interior_density;    // empty unless requested
    std::uint64_t seed = 0;
    FaultConfig config;
};

TrialResult run_trial(const AutomatonSpec& spec, const FaultConfig& cfg, int T,
                      BoundaryPolicy policy, bool record_density = false);

struct CurvePoint {
    int t = 0;
    double rate = 0, lo = 0, hi = 0;  // origin error rate with 95% Wilson CI
};

struct Curve {
    std::vector<CurvePoint> points;
    std::uint64_t master_seed = 0;
    int trials = 0;
};

// Trials run concurrently; the aggregate is independent of the worker count.
Curve monte_carlo(const AutomatonSpec& spec, const FaultConfig& cfg, int T, int trials,
                  BoundaryPolicy policy, int workers = 0);

void write_csv(const Curve& curve, std::ostream& os);

struct DeterministicRun {
    std::vector<std::vector<VertexId>> error_sets;  // indices 0..T

    bool always_in_error(const std::vector<VertexId>& cells) const;
};

// Zero-fault evolution from an initial error set. With clamp_others, every
// cell outside initial/permanent_ones is forced healthy each step (the worst
// case for persistence); permanent_ones stay in error for all time.
DeterministicRun run_deterministic(const AutomatonSpec& spec,
                                   const std::vector<VertexId>& initial, int T,
                                   bool clamp_others = true,
                                   const std::vector<VertexId>& permanent_ones = {});

// Full state recording for certificate extraction.
struct Trajectory {
    std::vector<State> states;  // indices 0..T
    FaultTrace trace;
    BoundaryPolicy policy = BoundaryPolicy::FrozenZero;
};

Trajectory record_trajectory(const AutomatonSpec& spec, const FaultConfig& cfg, int T,
                             BoundaryPolicy policy);

}  // namespace pqca
