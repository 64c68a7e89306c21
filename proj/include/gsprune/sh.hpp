#pragma once

#include <algorithm>
#include <array>

#include <Eigen/Core>

namespace gsprune {

// Real spherical-harmonics basis constants in the ordering and sign
// convention used by splat training pipelines (band l, then m from -l to l).
inline constexpr float kSH_C0 = 0.28209479177387814f;
inline constexpr float kSH_C1 = 0.4886025119029199f;
inline constexpr float kSH_C2[5] = {1.0925484305920792f, -1.0925484305920792f,
                                    0.31539156525252005f, -1.0925484305920792f,
                                    0.5462742152960396f};
inline constexpr float kSH_C3[7] = {-0.5900435899266435f, 2.890611442640554f,
                                    -0.4570457994644658f, 0.3731763325901154f,
                                    -0.4570457994644658f, 1.445305721320277f,
                                    -0.5900435899266435f};

// Evaluates one color channel from its 16 SH coefficients along unit view
// direction `d`, up to `degree` (0..3).  The DC-centered result gets +0.5
// and is clamped to [0, 1].
inline float evaluate_sh_channel(const float* sh, const Eigen::Vector3f& d, int degree) {
    float c = kSH_C0 * sh[0];
    if (degree >= 1) {
        const float x = d.x(), y = d.y(), z = d.z();
        c += -kSH_C1 * y * sh[1] + kSH_C1 * z * sh[2] - kSH_C1 * x * sh[3];
        if (degree >= 2) {
            const float xx = x * x, yy = y * y, zz = z * z;
            const float xy = x * y, yz = y * z, xz = x * z;
            c += kSH_C2[0] * xy * sh[4] + kSH_C2[1] * yz * sh[5] +
                 kSH_C2[2] * (2.0f * zz - xx - yy) * sh[6] + kSH_C2[3] * xz * sh[7] +
                 kSH_C2[4] * (xx - yy) * sh[8];
            if (degree >= 3) {
                c += kSH_C3[0] * y * (3.0f * xx - yy) * sh[9] + kSH_C3[1] * xy * z * sh[10] +
                     kSH_C3[2] * y * (4.0f * zz - xx - yy) * sh[11] +
                     kSH_C3[3] * z * (2.0f * zz - 3.0f * xx - 3.0f * yy) * sh[12] +
                     kSH_C3[4] * x * (4.0f * zz - xx - yy) * sh[13] +
                     kSH_C3[5] * z * (xx - yy) * sh[14] +
                     kSH_C3[6] * x * (xx - 3.0f * yy) * sh[15];
            }
        }
    }
    return std::clamp(c + 0.5f, 0.0f, 1.0f);
}

// RGB color of a primitive's 48 coefficients (16 per channel, channel-major).
inline Eigen::Vector3f evaluate_sh(const std::array<float, 48>& sh, const Eigen::Vector3f& dir,
                                   int degree) {
    return {evaluate_sh_channel(sh.data(), dir, degree),
            evaluate_sh_channel(sh.data() + 16, dir, degree),
            evaluate_sh_channel(sh.data() + 32, dir, degree)};
}

} // namespace gsprune
