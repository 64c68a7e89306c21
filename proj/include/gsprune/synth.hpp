#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "gsprune/errors.hpp"
#include "gsprune/random.hpp"
#include "gsprune/sh.hpp"
#include "gsprune/splat_model.hpp"

namespace gsprune {

// Two-population test scene: a smooth color-graded plane of loosely spaced
// splats (low detail) and a tightly wound spherical filament of alternating
// saturated colors (high detail).  The filament spacing is a fraction of the
// plane spacing, so the minimum nearest-neighbor distance always comes from
// the filament; plane indices come first, filament indices follow.
struct SynthConfig {
    std::size_t plane_count = 900;
    std::size_t cluster_count = 100;
    double plane_extent = 4.0;  // half side length, plane spans [-e, e]^2
    double plane_z = 0.0;
    // z jitter as a fraction of the spacing.  Large enough that neighborhood
    // irregularity, not distance from the origin, dominates the plane's
    // response spread — the smooth band then samples the plane uniformly —
    // yet small against the neighborhood radius, so degrees stay stable.
    double plane_jitter = 2.0;
    // High above the plane: the filament's response scales with its distance
    // from the origin, which lifts all of it clear of the plane's own
    // response range; the lateral offset keeps it from hovering over the
    // plane's center in a straight-down view.
    Eigen::Vector3d cluster_center{1.5, 0.0, 14.0};
    double cluster_radius = 1.0;
    double cluster_spacing_ratio = 0.8;  // filament spacing / plane spacing
    std::uint64_t seed = 1;
};

namespace detail {

inline float dc_coeff(double color) {
    return static_cast<float>((color - 0.5) / kSH_C0);
}

} // namespace detail

inline GaussianField synth_field(const SynthConfig& cfg) {
    if (cfg.plane_count + cfg.cluster_count == 0)
        throw config_error("synthetic scene needs at least one primitive");
    if (!(cfg.plane_extent > 0.0) || !(cfg.cluster_radius > 0.0) ||
        !(cfg.cluster_spacing_ratio > 0.0))
        throw config_error("synthetic scene dimensions must be positive");

    GaussianField field;
    field.primitives.reserve(cfg.plane_count + cfg.cluster_count);

    const std::size_t grid =
        cfg.plane_count > 1
            ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.plane_count))))
            : 1;
    const double spacing =
        grid > 1 ? 2.0 * cfg.plane_extent / static_cast<double>(grid - 1) : 2.0 * cfg.plane_extent;

    // Splats overlap generously so a thinned plane still closes up.
    // Wide overlap: the plane still closes into a solid surface when only a
    // few percent of its splats survive pruning, then degrades sharply below
    // that — quality hinges on coverage, not on any individual splat.
    const float plane_log_xy = static_cast<float>(std::log(4.5 * spacing));
    const float plane_log_z = static_cast<float>(std::log(0.1 * spacing));
    const float plane_opacity = logit(0.99f);
    for (std::size_t i = 0; i < cfg.plane_count; ++i) {
        GaussianPrimitive p;
        const double x = -cfg.plane_extent + static_cast<double>(i % grid) * spacing;
        const double y = -cfg.plane_extent + static_cast<double>(i / grid) * spacing;
        const double z = cfg.plane_z + cfg.plane_jitter * spacing * hash_symmetric(cfg.seed, i);
        p.center = Eigen::Vector3f(static_cast<float>(x), static_cast<float>(y),
                                   static_cast<float>(z));
        p.log_scale = {plane_log_xy, plane_log_xy, plane_log_z};
        p.opacity_logit = plane_opacity;
        const double half_pi_over_e = 1.5707963267948966 / cfg.plane_extent;
        p.sh[0] = detail::dc_coeff(0.5 + 0.30 * std::sin(half_pi_over_e * x));
        p.sh[16] = detail::dc_coeff(0.5 + 0.30 * std::sin(half_pi_over_e * y));
        p.sh[32] = detail::dc_coeff(0.45 + 0.20 * std::cos(0.5 * half_pi_over_e * (x + y)));
        field.primitives.push_back(p);
    }

    // Constant-chord spiral over the sphere: theta sweeps between the polar
    // caps (skipped to keep the local circle radius healthy) while phi
    // advances just enough to keep consecutive points `step` apart.
    const double step = cfg.cluster_spacing_ratio * spacing;
    constexpr double kPi = 3.141592653589793;
    constexpr double kThetaMargin = 0.35;
    const double dtheta = cfg.cluster_count > 0
                              ? (kPi - 2.0 * kThetaMargin) / static_cast<double>(cfg.cluster_count)
                              : 0.0;
    // Short tails: each pixel of the filament is dominated by the nearest
    // few splats, so removing a contiguous stretch only changes that stretch.
    const float cluster_log = static_cast<float>(std::log(1.2 * step));
    const float cluster_opacity = logit(0.98f);
    static const double palette[6][3] = {{1.0, 0.15, 0.1}, {0.1, 1.0, 0.15}, {0.15, 0.2, 1.0},
                                         {1.0, 1.0, 0.1},  {1.0, 0.1, 1.0},  {0.1, 1.0, 1.0}};
    double phi = 0.0;
    for (std::size_t k = 0; k < cfg.cluster_count; ++k) {
        GaussianPrimitive p;
        const double theta = kThetaMargin + dtheta * (static_cast<double>(k) + 0.5);
        const double sin_t = std::sin(theta);
        const Eigen::Vector3d pos =
            cfg.cluster_center + cfg.cluster_radius * Eigen::Vector3d(sin_t * std::cos(phi),
                                                                      sin_t * std::sin(phi),
                                                                      std::cos(theta));
        const double arc_t = cfg.cluster_radius * dtheta;
        const double chord_phi_sq = step * step - arc_t * arc_t;
        const double dphi = std::sqrt(std::max(chord_phi_sq, 0.04 * step * step)) /
                            (cfg.cluster_radius * std::max(sin_t, 0.2));
        phi += dphi;
        p.center = pos.cast<float>();
        p.log_scale = {cluster_log, cluster_log, cluster_log};
        p.opacity_logit = cluster_opacity;
        // Blocks of one color per arc, so subsampling the filament keeps the
        // local color instead of scrambling a per-point cycle.
        const double* col = palette[(k * 6) / cfg.cluster_count];
        p.sh[0] = detail::dc_coeff(col[0]);
        p.sh[16] = detail::dc_coeff(col[1]);
        p.sh[32] = detail::dc_coeff(col[2]);
        field.primitives.push_back(p);
    }
    return field;
}

} // namespace gsprune
