// Pilot runs for calibrating the simulation-contrast thresholds.
#include <cstdio>
#include <memory>

#include "pqca/simulate.hpp"

using namespace pqca;

static std::shared_ptr<Tessellation> build(int p, int q, int g, bool strengths = false) {
    TessellationSpec spec;
    spec.p = p;
    spec.q = q;
    spec.max_generation = g;
    auto t = std::make_shared<Tessellation>(build_tessellation(spec));
    if (strengths) assign_strength(*t);
    return t;
}

int main(int argc, char** argv) {
    int trials = argc > 1 ? std::atoi(argv[1]) : 60;
    int T = argc > 2 ? std::atoi(argv[2]) : 200;

    struct Run {
        const char* name;
        int p, q, g;
        double alpha, beta;
        BoundaryPolicy policy;
    };
    Run runs[] = {
        {"{5,5} a=b=0.002 adv", 5, 5, 8, 0.002, 0.002, BoundaryPolicy::AdversarialBoundary},
        {"{4,4} a=0.05 adv", 4, 4, 8, 0.05, 0.0, BoundaryPolicy::AdversarialBoundary},
        {"{4,5} a=0.002 b=0.05 adv", 4, 5, 8, 0.002, 0.05, BoundaryPolicy::AdversarialBoundary},
        {"{5,5} a=b=0.002 frz", 5, 5, 8, 0.002, 0.002, BoundaryPolicy::FrozenZero},
        {"{4,4} a=0.05 frz", 4, 4, 8, 0.05, 0.0, BoundaryPolicy::FrozenZero},
        {"{4,5} a=0.002 b=0.05 frz", 4, 5, 8, 0.002, 0.05, BoundaryPolicy::FrozenZero},
    };
    for (const Run& r : runs) {
        auto spec = build_automaton(build(r.p, r.q, r.g));
        FaultConfig cfg{r.alpha, r.beta, 20250811};
        auto curve = monte_carlo(spec, cfg, T, trials, r.policy, 2);
        std::printf("%-28s cells=%6zu  t=%3d rate=%.4f  t=%3d rate=%.4f  t=%3d rate=%.4f\n",
                    r.name, spec.cells(), T / 4, curve.points[T / 4].rate, T / 2,
                    curve.points[T / 2].rate, T, curve.points[T].rate);
        std::fflush(stdout);
    }
    return 0;
}
