#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gsprune/errors.hpp"
#include "gsprune/rasterizer.hpp"

namespace gsprune {

struct PsnrResult {
    double mse = 0.0;
    bool infinite = false;  // identical images
    double db = 0.0;        // valid when !infinite
};

// Peak signal-to-noise ratio over all pixels and channels, peak value 1.0.
inline PsnrResult psnr(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width != b.width || a.height != b.height)
        throw config_error("image size mismatch: " + std::to_string(a.width) + "x" +
                           std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                           std::to_string(b.height));
    if (a.rgb.empty()) throw config_error("cannot compare empty images");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = static_cast<double>(a.rgb[i]) - static_cast<double>(b.rgb[i]);
        sum += d * d;
    }
    PsnrResult r;
    r.mse = sum / static_cast<double>(a.rgb.size());
    if (r.mse == 0.0) {
        r.infinite = true;
    } else {
        r.db = -10.0 * std::log10(r.mse);
    }
    return r;
}

namespace detail {

// 11-tap Gaussian window, sigma 1.5, normalized to sum 1.
inline const std::array<double, 11>& ssim_window() {
    static const std::array<double, 11> w = [] {
        std::array<double, 11> k{};
        double sum = 0.0;
        for (int i = 0; i < 11; ++i) {
            const double d = i - 5;
            k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
            sum += k[static_cast<std::size_t>(i)];
        }
        for (auto& v : k) v /= sum;
        return k;
    }();
    return w;
}

// Separable valid-mode filtering with the SSIM window: output is
// (w-10) x (h-10).
inline std::vector<double> ssim_filter(const std::vector<double>& img, int w, int h) {
    const auto& k = ssim_window();
    const int vw = w - 10;
    const int vh = h - 10;
    std::vector<double> horiz(static_cast<std::size_t>(vw) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < vw; ++x) {
            double s = 0.0;
            for (int t = 0; t < 11; ++t) s += k[static_cast<std::size_t>(t)] * img[static_cast<std::size_t>(y) * w + x + t];
            horiz[static_cast<std::size_t>(y) * vw + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(vw) * vh);
    for (int y = 0; y < vh; ++y)
        for (int x = 0; x < vw; ++x) {
            double s = 0.0;
            for (int t = 0; t < 11; ++t) s += k[static_cast<std::size_t>(t)] * horiz[static_cast<std::size_t>(y + t) * vw + x];
            out[static_cast<std::size_t>(y) * vw + x] = s;
        }
    return out;
}

inline double ssim_channel(const std::vector<double>& x, const std::vector<double>& y, int w,
                           int h) {
    constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
    constexpr double kC2 = 0.03 * 0.03;  // (K2 * L)^2
    const std::size_t n = x.size();
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mu_x = ssim_filter(x, w, h);
    const auto mu_y = ssim_filter(y, w, h);
    const auto m_xx = ssim_filter(xx, w, h);
    const auto m_yy = ssim_filter(yy, w, h);
    const auto m_xy = ssim_filter(xy, w, h);
    double total = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
        const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
        const double cov = m_xy[i] - mu_x[i] * mu_y[i];
        const double num = (2.0 * mu_x[i] * mu_y[i] + kC1) * (2.0 * cov + kC2);
        const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + kC1) * (var_x + var_y + kC2);
        total += num / den;
    }
    return total / static_cast<double>(mu_x.size());
}

} // namespace detail

// Single-scale structural similarity with an 11x11 Gaussian window
// (sigma 1.5), K1 = 0.01, K2 = 0.03, dynamic range 1.  Windows are valid
// only (no padding); per-channel scores are averaged.
inline double ssim(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width != b.width || a.height != b.height)
        throw config_error("image size mismatch: " + std::to_string(a.width) + "x" +
                           std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                           std::to_string(b.height));
    if (a.width < 11 || a.height < 11)
        throw config_error("images must be at least 11x11 for windowed similarity");
    const std::size_t npx = static_cast<std::size_t>(a.width) * a.height;
    double total = 0.0;
    std::vector<double> ca(npx), cb(npx);
    for (int ch = 0; ch < 3; ++ch) {
        for (std::size_t i = 0; i < npx; ++i) {
            ca[i] = a.rgb[i * 3 + static_cast<std::size_t>(ch)];
            cb[i] = b.rgb[i * 3 + static_cast<std::size_t>(ch)];
        }
        total += detail::ssim_channel(ca, cb, a.width, a.height);
    }
    return total / 3.0;
}

} // namespace gsprune
