#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gsprune/camera.hpp"
#include "gsprune/errors.hpp"
#include "gsprune/parallel.hpp"
#include "gsprune/sh.hpp"
#include "gsprune/splat_model.hpp"

namespace gsprune {

struct RenderConfig {
    double near_plane = 0.01;
    double cov_floor = 0.3;  // px^2 added to the projected covariance diagonal
    double beta_max = 0.99;
    double min_contribution = 1.0 / 255.0;
    double min_transmittance = 1e-4;  // stop compositing a pixel below this
    double sigma_cutoff = 3.0;        // fragment extent, in projected std-devs
    Eigen::Vector3f background = Eigen::Vector3f::Zero();
    int threads = 0;
};

struct RenderStats {
    std::uint64_t culled = 0;      // behind the near plane
    std::uint64_t degenerate = 0;  // projected covariance not invertible
    std::uint64_t offscreen = 0;   // extent misses the viewport entirely
    std::uint64_t fragments = 0;   // splats that reached compositing
};

// Float RGB image (row-major, interleaved) plus per-pixel alpha.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<float> rgb;    // 3 * width * height
    std::vector<float> alpha;  // width * height

    ImageBuffer() = default;
    ImageBuffer(int w, int h)
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0.0f),
          alpha(static_cast<std::size_t>(w) * h, 0.0f) {}

    float* pixel(int x, int y) { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const float* pixel(int x, int y) const {
        return &rgb[(static_cast<std::size_t>(y) * width + x) * 3];
    }
};

struct ProjectedPoint {
    Eigen::Vector2d pixel;
    double depth = 0.0;
};

// Perspective projection of a world point; empty when it lies on or behind
// the near plane.
inline std::optional<ProjectedPoint> project_center(const Eigen::Vector3d& p_world,
                                                    const CameraModel& cam,
                                                    double near_plane = 0.01) {
    const Eigen::Vector3d p = cam.rotation * p_world + cam.translation;
    if (!(p.z() > near_plane)) return std::nullopt;
    ProjectedPoint out;
    out.pixel = {cam.fx * p.x() / p.z() + cam.cx, cam.fy * p.y() / p.z() + cam.cy};
    out.depth = p.z();
    return out;
}

// Jacobian of the pixel coordinates with respect to the camera-space point.
inline Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraModel& cam,
                                                       const Eigen::Vector3d& p_cam) {
    const double z = p_cam.z();
    Eigen::Matrix<double, 2, 3> j;
    j << cam.fx / z, 0.0, -cam.fx * p_cam.x() / (z * z),
         0.0, cam.fy / z, -cam.fy * p_cam.y() / (z * z);
    return j;
}

// First-order projection of a world covariance to pixel space, with a
// variance floor added on the diagonal to keep tiny splats integrable.
inline Eigen::Matrix2d project_covariance(const Eigen::Matrix3d& cov_world,
                                          const Eigen::Vector3d& p_cam, const CameraModel& cam,
                                          double floor = 0.3) {
    const Eigen::Matrix<double, 2, 3> jw = projection_jacobian(cam, p_cam) * cam.rotation;
    Eigen::Matrix2d c = jw * cov_world * jw.transpose();
    c = 0.5 * (c + c.transpose());
    c(0, 0) += floor;
    c(1, 1) += floor;
    return c;
}

namespace detail {

struct SplatFragment {
    double px = 0.0, py = 0.0;                    // projected center, pixel units
    double inv00 = 0.0, inv01 = 0.0, inv11 = 0.0; // inverse projected covariance
    double depth = 0.0;
    float r = 0.0f, g = 0.0f, b = 0.0f;
    double alpha = 0.0;
    int x0 = 0, x1 = 0, y0 = 0, y1 = 0;  // inclusive pixel bounds
    std::uint32_t index = 0;             // original primitive index
    bool valid = false;
};

} // namespace detail

struct RenderResult {
    ImageBuffer image;
    RenderStats stats;
};

// CPU splat rasterizer.  Fragments are depth-sorted globally (ties broken by
// primitive index) and composited front to back per pixel with sample points
// at pixel centers (ix + 0.5, iy + 0.5), so the output is reproducible for
// any thread count and any input permutation with distinct depths.
inline RenderResult render(const GaussianField& field, const CameraModel& cam,
                           const RenderConfig& cfg = {}) {
    validate_camera(cam);
    RenderResult res;
    res.image = ImageBuffer(cam.width, cam.height);

    const std::size_t n = field.size();
    std::vector<detail::SplatFragment> frags(n);
    std::vector<std::uint8_t> culled(n, 0), degenerate(n, 0), offscreen(n, 0);
    const Eigen::Vector3d cam_pos = cam.position();
    const int sh_degree = std::clamp(field.sh_degree, 0, 3);

    parallel_for(0, n, cfg.threads, [&](std::size_t i) {
        const GaussianPrimitive& prim = field.primitives[i];
        const Eigen::Vector3d center = prim.center.cast<double>();
        const auto proj = project_center(center, cam, cfg.near_plane);
        if (!proj) {
            culled[i] = 1;
            return;
        }
        const Eigen::Vector3d p_cam = cam.rotation * center + cam.translation;
        const Eigen::Matrix2d cov2 =
            project_covariance(covariance_of(prim), p_cam, cam, cfg.cov_floor);
        const double det = cov2(0, 0) * cov2(1, 1) - cov2(0, 1) * cov2(0, 1);
        if (!(det > 1e-12)) {
            degenerate[i] = 1;
            return;
        }
        detail::SplatFragment f;
        f.px = proj->pixel.x();
        f.py = proj->pixel.y();
        f.inv00 = cov2(1, 1) / det;
        f.inv01 = -cov2(0, 1) / det;
        f.inv11 = cov2(0, 0) / det;
        f.depth = proj->depth;
        const double rx = cfg.sigma_cutoff * std::sqrt(cov2(0, 0));
        const double ry = cfg.sigma_cutoff * std::sqrt(cov2(1, 1));
        f.x0 = std::max(0, static_cast<int>(std::floor(f.px - rx)));
        f.x1 = std::min(cam.width - 1, static_cast<int>(std::ceil(f.px + rx)));
        f.y0 = std::max(0, static_cast<int>(std::floor(f.py - ry)));
        f.y1 = std::min(cam.height - 1, static_cast<int>(std::ceil(f.py + ry)));
        if (f.x0 > f.x1 || f.y0 > f.y1) {
            offscreen[i] = 1;
            return;
        }
        const Eigen::Vector3f dir = (prim.center.cast<double>() - cam_pos).cast<float>().normalized();
        const Eigen::Vector3f color = evaluate_sh(prim.sh, dir, sh_degree);
        f.r = color.x();
        f.g = color.y();
        f.b = color.z();
        f.alpha = prim.opacity();
        f.index = static_cast<std::uint32_t>(i);
        f.valid = true;
        frags[i] = f;
    });

    std::vector<std::uint32_t> live;
    live.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.stats.culled += culled[i];
        res.stats.degenerate += degenerate[i];
        res.stats.offscreen += offscreen[i];
        if (frags[i].valid) live.push_back(static_cast<std::uint32_t>(i));
    }
    res.stats.fragments = live.size();
    std::sort(live.begin(), live.end(), [&](std::uint32_t a, std::uint32_t b) {
        return frags[a].depth != frags[b].depth ? frags[a].depth < frags[b].depth
                                                : frags[a].index < frags[b].index;
    });

    // Row buckets preserve the global depth order.
    std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(cam.height));
    for (std::uint32_t fi : live) {
        const auto& f = frags[fi];
        for (int y = f.y0; y <= f.y1; ++y) rows[static_cast<std::size_t>(y)].push_back(fi);
    }

    parallel_for(0, static_cast<std::size_t>(cam.height), cfg.threads, [&](std::size_t y) {
        const auto& row = rows[y];
        const double sy = static_cast<double>(y) + 0.5;
        for (int x = 0; x < cam.width; ++x) {
            const double sx = static_cast<double>(x) + 0.5;
            double t = 1.0;
            double r = 0.0, g = 0.0, b = 0.0, a = 0.0;
            for (std::uint32_t fi : row) {
                const auto& f = frags[fi];
                if (x < f.x0 || x > f.x1) continue;
                const double dx = sx - f.px;
                const double dy = sy - f.py;
                const double q = f.inv00 * dx * dx + 2.0 * f.inv01 * dx * dy + f.inv11 * dy * dy;
                double beta = f.alpha * std::exp(-0.5 * q);
                if (beta > cfg.beta_max) beta = cfg.beta_max;
                if (beta < cfg.min_contribution) continue;
                r += t * beta * f.r;
                g += t * beta * f.g;
                b += t * beta * f.b;
                a += t * beta;
                t *= 1.0 - beta;
                if (t < cfg.min_transmittance) break;
            }
            r += t * cfg.background.x();
            g += t * cfg.background.y();
            b += t * cfg.background.z();
            float* px = res.image.pixel(x, static_cast<int>(y));
            px[0] = static_cast<float>(std::clamp(r, 0.0, 1.0));
            px[1] = static_cast<float>(std::clamp(g, 0.0, 1.0));
            px[2] = static_cast<float>(std::clamp(b, 0.0, 1.0));
            res.image.alpha[y * static_cast<std::size_t>(cam.width) + static_cast<std::size_t>(x)] =
                static_cast<float>(std::clamp(a, 0.0, 1.0));
        }
    });
    return res;
}

} // namespace gsprune
