#include "pqca/faults.hpp"

#include <cmath>
#include <deque>

#include "pqca/rng.hpp"

namespace pqca {

namespace {
constexpr std::uint64_t kPermanentStream = 0x7065726dULL;
constexpr std::uint64_t kTransientStream = 0x7472616eULL;
}  // namespace

void FaultConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta <= 1.0))
        throw DomainError("fault probabilities must lie in [0,1)");
}

double epsilon(const FaultConfig& cfg) {
    return cfg.alpha + cfg.beta - cfg.alpha * cfg.beta;
}

FaultTrace::FaultTrace(const FaultConfig& cfg, std::int32_t cells) : cfg_(cfg), cells_(cells) {
    permanent_.resize(cells);
    for (std::int32_t c = 0; c < cells; ++c)
        permanent_[c] = bernoulli(mix(cfg.seed, kPermanentStream, c), cfg.beta) ? 1 : 0;
}

bool FaultTrace::transient(VertexId c, int t) const {
    if (cfg_.alpha <= 0.0) return false;
    return bernoulli(mix(cfg_.seed, kTransientStream, c, static_cast<std::uint64_t>(t)),
                     cfg_.alpha);
}

void FaultTrace::fill_mask(int t, Mask& out) const {
    out.resize(cells_);
    for (std::int32_t c = 0; c < cells_; ++c)
        out[c] = (permanent_[c] || transient(c, t)) ? 1 : 0;
}

std::pair<double, double> rate_translation(double xi, int kappa, std::int64_t lambda) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("xi must lie in [0,1]");
    if (kappa < 2) throw DomainError("speed-up factor must be >= 2");
    if (lambda < 1) throw DomainError("lambda must be >= 1");
    double eta = std::pow(xi, static_cast<double>(lambda));
    double zeta = 1.0 - std::pow(1.0 - xi, static_cast<double>(kappa) * lambda);
    return {eta, zeta};
}

double rate_translation_inverse(double zeta, int kappa, std::int64_t lambda) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) throw DomainError("zeta must lie in [0,1]");
    if (kappa < 2) throw DomainError("speed-up factor must be >= 2");
    if (lambda < 1) throw DomainError("lambda must be >= 1");
    double xi = 1.0 - std::pow(1.0 - zeta, 1.0 / (static_cast<double>(kappa) * lambda));
    return std::pow(xi, static_cast<double>(lambda));
}

std::int64_t dependence_ball_size(const Tessellation& t, VertexId v, int kappa) {
    std::vector<int> dist(t.vertex_count(), -1);
    std::deque<VertexId> queue{v};
    dist[v] = 0;
    std::int64_t count = 0;
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        ++count;
        if (dist[cur] == kappa) continue;
        for (VertexId w : t.neighbors(cur)) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[cur] + 1;
            queue.push_back(w);
        }
    }
    return count;
}

std::optional<std::int64_t> uniform_dependence_degree(const Tessellation& t, int kappa) {
    // Interior-with-margin: every vertex within distance kappa must itself be
    // interior, otherwise the ball is clipped by the truncation.
    std::optional<std::int64_t> common;
    for (const Vertex& v : t.vertices) {
        if (!v.interior) continue;
        bool margin = true;
        std::vector<int> dist(t.vertex_count(), -1);
        std::deque<VertexId> queue{v.id};
        dist[v.id] = 0;
        std::int64_t count = 0;
        while (!queue.empty()) {
            VertexId cur = queue.front();
            queue.pop_front();
            ++count;
            if (!t.vertices[cur].interior && dist[cur] < kappa) margin = false;
            if (dist[cur] == kappa) continue;
            for (VertexId w : t.neighbors(cur)) {
                if (dist[w] >= 0) continue;
                dist[w] = dist[cur] + 1;
                queue.push_back(w);
            }
        }
        if (!margin) continue;
        if (!common) {
            common = count;
        } else if (*common != count) {
            return std::nullopt;
        }
    }
    return common;
}

}  // namespace pqca
