#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "gsprune/errors.hpp"
#include "gsprune/primitive_graph.hpp"
#include "gsprune/spectral_filter.hpp"
#include "gsprune/splat_model.hpp"

namespace gsprune {

struct PruneConfig {
    double keep_ratio = 0.10;  // fraction of primitives to keep
    double gamma = 0.5;        // share of the kept budget taken from the top responses
    // 0 = unlimited; otherwise the kept count is clamped to this
    std::uint64_t primitive_cap = 0;
    // continuous mode: prune at every step where step % interval == 0
    int interval = 1;
    std::size_t max_steps = static_cast<std::size_t>(-1);
    GraphBuildConfig graph;
};

struct PruneTimings {
    double graph_ms = 0.0;
    double filter_ms = 0.0;
    double select_ms = 0.0;
    double compact_ms = 0.0;
};

struct PruneReport {
    std::string mode = "single";
    double keep_ratio = 0.0;
    double gamma = 0.0;
    double tau = 0.0;    // effective value of the last graph built
    double sigma = 0.0;  // likewise
    std::uint64_t before_count = 0;
    std::uint64_t after_count = 0;
    std::uint64_t peak_count = 0;
    std::vector<std::uint64_t> per_step_counts;  // initial count, then one entry per step
    std::uint64_t bytes_before = 0;
    std::uint64_t bytes_after = 0;
    PruneTimings timings;
};

struct PruneResult {
    GaussianField field;
    BandSelection selection;  // indices into the pre-prune field
    PruneReport report;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct SpectralPassResult {
    BandSelection selection;
    double tau = 0.0;
    double sigma = 0.0;
};

// One graph -> response -> selection pass over `field`, keeping `target`
// primitives.
inline SpectralPassResult spectral_pass(const GaussianField& field, std::size_t target,
                                        const PruneConfig& cfg, PruneTimings& timings) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const PrimitiveGraph graph = build_graph(field, cfg.graph);
    timings.graph_ms += ms_since(t0);

    t0 = clock::now();
    const Eigen::VectorXd response = response_magnitudes(graph, centers_signal(field),
                                                         FilterKind::high_pass,
                                                         cfg.graph.threads);
    timings.filter_ms += ms_since(t0);

    t0 = clock::now();
    SpectralPassResult out;
    out.selection = band_limited_select_count(response, target, cfg.gamma);
    out.tau = graph.tau;
    out.sigma = graph.sigma;
    timings.select_ms += ms_since(t0);
    return out;
}

inline std::size_t prune_target(std::size_t count, double keep_ratio, std::uint64_t cap) {
    std::size_t m = round_count(keep_ratio * static_cast<double>(count));
    if (cap > 0) m = std::min<std::size_t>(m, static_cast<std::size_t>(cap));
    return m;
}

} // namespace detail

// One-shot prune: keep round(keep_ratio * n) primitives chosen by the
// band-limited selection over the high-pass response of the centers.
inline PruneResult prune_once(const GaussianField& field, const PruneConfig& cfg) {
    PruneResult res;
    res.report.mode = "single";
    res.report.keep_ratio = cfg.keep_ratio;
    res.report.gamma = cfg.gamma;
    res.report.before_count = field.size();
    res.report.peak_count = field.size();
    res.report.bytes_before = payload_bytes(field);
    res.report.per_step_counts.push_back(field.size());

    if (!(cfg.keep_ratio >= 0.0) || cfg.keep_ratio > 1.0)
        throw config_error("keep ratio must lie in [0, 1]");
    const std::size_t target =
        detail::prune_target(field.size(), cfg.keep_ratio, cfg.primitive_cap);
    if (target == 0)
        throw config_error("selection is empty: keeping " + std::to_string(cfg.keep_ratio) +
                           " of " + std::to_string(field.size()) + " primitives rounds to zero");

    auto pass = detail::spectral_pass(field, target, cfg, res.report.timings);
    res.selection = std::move(pass.selection);
    res.report.tau = pass.tau;
    res.report.sigma = pass.sigma;

    const auto t0 = std::chrono::steady_clock::now();
    res.field = compact(field, res.selection.kept);
    res.report.timings.compact_ms += detail::ms_since(t0);

    res.report.after_count = res.field.size();
    res.report.bytes_after = payload_bytes(res.field);
    res.report.per_step_counts.push_back(res.field.size());
    return res;
}

// Continuous prune over a sequence of snapshots that share primitive
// identity: index i refers to the same primitive in every snapshot it
// exists in, and snapshots may only grow (new primitives append).  The
// surviving-index set persists across steps; at step t (1-based) the field
// is snapshot[t-1] restricted to the survivors, pruned when
// t % interval == 0.
inline PruneResult prune_schedule(const std::vector<GaussianField>& snapshots,
                                  const PruneConfig& cfg) {
    if (snapshots.empty()) throw config_error("continuous prune needs at least one snapshot");
    if (cfg.interval < 1) throw config_error("interval must be at least 1");
    if (!(cfg.keep_ratio >= 0.0) || cfg.keep_ratio > 1.0)
        throw config_error("keep ratio must lie in [0, 1]");

    PruneResult res;
    res.report.mode = "continuous";
    res.report.keep_ratio = cfg.keep_ratio;
    res.report.gamma = cfg.gamma;
    res.report.before_count = snapshots.front().size();
    res.report.bytes_before = payload_bytes(snapshots.front());

    std::vector<std::uint32_t> alive(snapshots.front().size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<std::uint32_t>(i);
    res.report.per_step_counts.push_back(alive.size());
    res.report.peak_count = alive.size();

    const std::size_t steps = std::min(snapshots.size(), cfg.max_steps);
    std::size_t prev_size = snapshots.front().size();
    std::size_t last_step = 0;
    for (std::size_t t = 1; t <= steps; ++t) {
        const GaussianField& snap = snapshots[t - 1];
        if (snap.empty()) throw config_error("snapshot " + std::to_string(t) + " is empty");
        if (snap.size() < prev_size)
            throw config_error("snapshot " + std::to_string(t) +
                               " shrank; snapshots must share primitive identity");
        for (std::size_t i = prev_size; i < snap.size(); ++i)
            alive.push_back(static_cast<std::uint32_t>(i));
        prev_size = snap.size();
        res.report.peak_count = std::max<std::uint64_t>(res.report.peak_count, alive.size());

        if (t % static_cast<std::size_t>(cfg.interval) == 0) {
            const auto tc = std::chrono::steady_clock::now();
            const GaussianField current = compact(snap, alive);
            res.report.timings.compact_ms += detail::ms_since(tc);
            const std::size_t target =
                detail::prune_target(current.size(), cfg.keep_ratio, cfg.primitive_cap);
            if (target == 0)
                throw config_error("selection is empty at step " + std::to_string(t));
            auto pass = detail::spectral_pass(current, target, cfg, res.report.timings);
            res.report.tau = pass.tau;
            res.report.sigma = pass.sigma;
            std::vector<std::uint32_t> next;
            next.reserve(pass.selection.kept.size());
            for (std::uint32_t local : pass.selection.kept) next.push_back(alive[local]);
            alive = std::move(next);
            res.selection = std::move(pass.selection);  // selection of the last prune, local indices
        }
        res.report.per_step_counts.push_back(alive.size());
        last_step = t;
    }

    const auto t0 = std::chrono::steady_clock::now();
    res.field = compact(snapshots[last_step == 0 ? 0 : last_step - 1], alive);
    res.report.timings.compact_ms += detail::ms_since(t0);
    res.report.after_count = res.field.size();
    res.report.bytes_after = payload_bytes(res.field);
    return res;
}

} // namespace gsprune
