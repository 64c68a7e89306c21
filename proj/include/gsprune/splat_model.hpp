#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gsprune/errors.hpp"

namespace gsprune {

inline float sigmoid(float x) {
    return 1.0f / (1.0f + std::exp(-x));
}

inline float logit(float p) {
    return std::log(p / (1.0f - p));
}

// Number of spherical-harmonics coefficients per color channel (degree 3).
inline constexpr int kShCoeffsPerChannel = 16;
inline constexpr int kShCoeffCount = 3 * kShCoeffsPerChannel;

// One anisotropic Gaussian primitive.  Geometry parameters are stored in
// their unconstrained form (log-scales, opacity logit) exactly as they
// appear on disk; derived quantities are computed on demand.
struct GaussianPrimitive {
    Eigen::Vector3f center = Eigen::Vector3f::Zero();
    Eigen::Vector3f normal = Eigen::Vector3f::Zero();   // carried through I/O, unused
    Eigen::Vector4f rotation{1.0f, 0.0f, 0.0f, 0.0f};   // unit quaternion (w, x, y, z)
    Eigen::Vector3f log_scale = Eigen::Vector3f::Zero();
    float opacity_logit = 0.0f;
    // Per-channel SH coefficients, [channel * 16 + band index]; index 0 is DC.
    std::array<float, kShCoeffCount> sh = {};

    float opacity() const { return sigmoid(opacity_logit); }

    Eigen::Vector3f scale() const {
        return log_scale.array().exp().matrix();
    }

    Eigen::Quaterniond quaternion() const {
        return Eigen::Quaterniond(rotation[0], rotation[1], rotation[2], rotation[3]);
    }
};

struct GaussianField {
    std::vector<GaussianPrimitive> primitives;
    int sh_degree = 3;

    std::size_t size() const { return primitives.size(); }
    bool empty() const { return primitives.empty(); }
};

// Serialized payload per primitive: 62 float32 fields (position, normal,
// 48 SH coefficients, opacity, 3 log-scales, 4 quaternion components).
inline constexpr std::size_t kFloatsPerPrimitive = 62;
inline constexpr std::size_t kBytesPerPrimitive = kFloatsPerPrimitive * sizeof(float);

inline std::uint64_t payload_bytes(const GaussianField& field) {
    return static_cast<std::uint64_t>(field.size()) * kBytesPerPrimitive;
}

// World-space covariance R * diag(s)^2 * R^T of one primitive.
// Symmetrized explicitly so the result is exactly symmetric.
inline Eigen::Matrix3d covariance_of(const GaussianPrimitive& p) {
    const Eigen::Matrix3d r = p.quaternion().normalized().toRotationMatrix();
    const Eigen::Vector3d s = p.scale().cast<double>();
    const Eigen::Matrix3d m = r * s.array().square().matrix().asDiagonal() * r.transpose();
    return 0.5 * (m + m.transpose());
}

// New field containing exactly the primitives at `keep` (ascending order
// required), preserving their relative order.
inline GaussianField compact(const GaussianField& field, const std::vector<std::uint32_t>& keep) {
    GaussianField out;
    out.sh_degree = field.sh_degree;
    out.primitives.reserve(keep.size());
    std::uint32_t prev = 0;
    bool first = true;
    for (std::uint32_t idx : keep) {
        if (idx >= field.size())
            throw config_error("selection index " + std::to_string(idx) +
                               " out of range for field of size " + std::to_string(field.size()));
        if (!first && idx <= prev)
            throw config_error("selection indices must be strictly ascending");
        out.primitives.push_back(field.primitives[idx]);
        prev = idx;
        first = false;
    }
    return out;
}

// Primitive centers as an n x 3 double matrix, the default graph signal.
inline Eigen::MatrixXd centers_signal(const GaussianField& field) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(field.size()), 3);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        x.row(i) = field.primitives[static_cast<std::size_t>(i)].center.cast<double>().transpose();
    return x;
}

} // namespace gsprune
