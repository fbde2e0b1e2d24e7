#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pqca/automaton.hpp"
#include "pqca/tessellation.hpp"

namespace pqca {

struct FaultConfig {
    double alpha = 0.0;  // transient fault probability per cell per step
    double beta = 0.0;   // manufacturing fault probability per cell
    std::uint64_t seed = 0;

    bool combined() const { return beta > 0.0; }
    void validate() const;
};

// Probability that a cell is adversary-controlled at a given step:
// alpha + beta - alpha*beta.
double epsilon(const FaultConfig& cfg);

// Reproducible fault stream: every indicator is a pure function of
// (seed, cell, t), so traces can be replayed and sampled concurrently.
class FaultTrace {
  public:
    FaultTrace(const FaultConfig& cfg, std::int32_t cells);

    bool permanent(VertexId c) const { return permanent_[c] != 0; }
    bool transient(VertexId c, int t) const;
    bool at_fault(VertexId c, int t) const { return permanent(c) || transient(c, t); }
    void fill_mask(int t, Mask& out) const;
    std::int32_t cells() const { return cells_; }
    const FaultConfig& config() const { return cfg_; }

  private:
    FaultConfig cfg_;
    std::int32_t cells_ = 0;
    std::vector<std::uint8_t> permanent_;
};

// Fault-rate bookkeeping between an automaton and its kappa-fold speed-up:
// a common Bernoulli(xi) source per dependence arc yields rate eta = xi^lambda
// in the original and zeta = 1 - (1-xi)^(kappa*lambda) in the sped-up one,
// where lambda is the uniform degree of the kappa-step dependence graph.
std::pair<double, double> rate_translation(double xi, int kappa, std::int64_t lambda);
double rate_translation_inverse(double zeta, int kappa, std::int64_t lambda);

// Number of vertices reachable from v by a dependence path of length <= kappa.
std::int64_t dependence_ball_size(const Tessellation& t, VertexId v, int kappa);

// The common ball size over every vertex at distance >= kappa from the
// boundary; nullopt if the truncation has no such vertex or sizes disagree.
std::optional<std::int64_t> uniform_dependence_degree(const Tessellation& t, int kappa);

}  // namespace pqca
