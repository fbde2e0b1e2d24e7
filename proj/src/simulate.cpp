#include "pqca/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "pqca/rng.hpp"

namespace pqca {

namespace {

constexpr std::uint64_t kTrialStream = 0x747269616cULL;

BoundaryRule boundary_rule(BoundaryPolicy p) {
    return p == BoundaryPolicy::FrozenZero ? BoundaryRule::PinZero : BoundaryRule::Evolve;
}

State initial_state(const AutomatonSpec& spec, const FaultTrace& trace, BoundaryPolicy policy) {
    const std::size_t n = spec.cells();
    State s(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        if (trace.at_fault(static_cast<VertexId>(c), 0)) s[c] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        if (!spec.boundary[c]) continue;
        s[c] = policy == BoundaryPolicy::AdversarialBoundary ? 1 : 0;
    }
    return s;
}

void require_margin(const AutomatonSpec& spec) {
    if (spec.boundary[spec.tess->origin])
        throw InsufficientMargin("origin statistics need at least one built generation");
}

}  // namespace

const char* to_string(BoundaryPolicy p) {
    return p == BoundaryPolicy::FrozenZero ? "frozen-zero" : "adversarial";
}

TrialResult run_trial(const AutomatonSpec& spec, const FaultConfig& cfg, int T,
                      BoundaryPolicy policy, bool record_density) {
    cfg.validate();
    require_margin(spec);
    if (T < 0) throw std::invalid_argument("T must be >= 0");

    FaultTrace trace(cfg, static_cast<std::int32_t>(spec.cells()));
    TrialResult r;
    r.seed = cfg.seed;
    r.config = cfg;
    r.origin_error.reserve(T + 1);
    if (record_density) r.interior_density.reserve(T + 1);

    std::int64_t interior_count = 0;
    for (std::size_t c = 0; c < spec.cells(); ++c)
        interior_count += spec.boundary[c] ? 0 : 1;

    State s = initial_state(spec, trace, policy);
    Mask mask;
    for (int t = 0;; ++t) {
        r.origin_error.push_back(s[spec.tess->origin]);
        if (record_density) {
            std::int64_t errs = 0;
            for (std::size_t c = 0; c < spec.cells(); ++c)
                errs += (!spec.boundary[c] && s[c]) ? 1 : 0;
            r.interior_density.push_back(interior_count ? double(errs) / interior_count : 0.0);
        }
        if (t == T) break;
        trace.fill_mask(t + 1, mask);
        s = step(spec, s, mask, boundary_rule(policy));
    }
    return r;
}

namespace {

CurvePoint wilson(int t, std::int64_t hits, int n) {
    constexpr double z = 1.959963984540054;  // 95%
    CurvePoint p;
    p.t = t;
    if (n == 0) return p;
    double phat = double(hits) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    p.rate = phat;
    p.lo = std::max(0.0, center - half);
    p.hi = std::min(1.0, center + half);
    return p;
}

}  // namespace

Curve monte_carlo(const AutomatonSpec& spec, const FaultConfig& cfg, int T, int trials,
                  BoundaryPolicy policy, int workers) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, trials));

    std::vector<std::vector<std::uint8_t>> per_trial(trials);
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= trials) return;
            FaultConfig c = cfg;
            c.seed = mix(cfg.seed, kTrialStream, static_cast<std::uint64_t>(i));
            per_trial[i] = run_trial(spec, c, T, policy).origin_error;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    Curve curve;
    curve.master_seed = cfg.seed;
    curve.trials = trials;
    curve.points.reserve(T + 1);
    for (int t = 0; t <= T; ++t) {
        std::int64_t hits = 0;
        for (const auto& tr : per_trial) hits += tr[t];
        curve.points.push_back(wilson(t, hits, trials));
    }
    return curve;
}

void write_csv(const Curve& curve, std::ostream& os) {
    os << "t,error_rate,ci_low,ci_high\n";
    char buf[128];
    for (const CurvePoint& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g\n", p.t, p.rate, p.lo, p.hi);
        os << buf;
    }
}

bool DeterministicRun::always_in_error(const std::vector<VertexId>& cells) const {
    for (const auto& snapshot : error_sets)
        for (VertexId c : cells)
            if (!std::binary_search(snapshot.begin(), snapshot.end(), c)) return false;
    return true;
}

DeterministicRun run_deterministic(const AutomatonSpec& spec,
                                   const std::vector<VertexId>& initial, int T,
                                   bool clamp_others,
                                   const std::vector<VertexId>& permanent_ones) {
    for (VertexId c : initial)
        if (spec.boundary[c])
            throw InsufficientMargin("initial error set must be interior to the truncation");

    const std::size_t n = spec.cells();
    std::vector<std::uint8_t> allowed(n, clamp_others ? 0 : 1);
    for (VertexId c : initial) allowed[c] = 1;
    for (VertexId c : permanent_ones) allowed[c] = 1;

    Mask mask(n, 0);
    for (VertexId c : permanent_ones) mask[c] = 1;

    State s(n, 0);
    for (VertexId c : initial) s[c] = 1;
    for (VertexId c : permanent_ones) s[c] = 1;

    DeterministicRun run;
    run.error_sets.reserve(T + 1);
    for (int t = 0;; ++t) {
        std::vector<VertexId> errs;
        for (std::size_t c = 0; c < n; ++c)
            if (s[c]) errs.push_back(static_cast<VertexId>(c));
        run.error_sets.push_back(std::move(errs));
        if (t == T) break;
        s = step(spec, s, mask, BoundaryRule::PinZero);
        for (std::size_t c = 0; c < n; ++c)
            if (!allowed[c]) s[c] = 0;
    }
    return run;
}

Trajectory record_trajectory(const AutomatonSpec& spec, const FaultConfig& cfg, int T,
                             BoundaryPolicy policy) {
    cfg.validate();
    require_margin(spec);
    Trajectory traj{{}, FaultTrace(cfg, static_cast<std::int32_t>(spec.cells())), policy};
    traj.states.reserve(T + 1);
    State s = initial_state(spec, traj.trace, policy);
    Mask mask;
    for (int t = 0;; ++t) {
        traj.states.push_back(s);
        if (t == T) break;
        traj.trace.fill_mask(t + 1, mask);
        s = step(spec, s, mask, boundary_rule(policy));
    }
    return traj;
}

}  // namespace pqca
