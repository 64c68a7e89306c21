#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsprune/errors.hpp"
#include "gsprune/primitive_graph.hpp"

namespace gsprune {

enum class FilterKind { high_pass, low_pass };

inline const char* filter_kind_name(FilterKind k) {
    return k == FilterKind::high_pass ? "high_pass" : "low_pass";
}

// Detail-extracting filter (I - A) x with A = W / ||W||.  Large outputs mark
// signal that differs from its neighborhood average.
inline Eigen::MatrixXd high_pass(const PrimitiveGraph& g, const Eigen::MatrixXd& x,
                                 int threads = 0) {
    return x - normalized_shift_apply(g, x, threads);
}

// Smoothing filter (I + A) x; the complement of the high-pass on the same
// shift, so high_pass(x) + low_pass(x) == 2 x.
inline Eigen::MatrixXd low_pass(const PrimitiveGraph& g, const Eigen::MatrixXd& x,
                                int threads = 0) {
    return x + normalized_shift_apply(g, x, threads);
}

// Per-node response magnitude: squared Euclidean norm of the filtered
// signal's row.
inline Eigen::VectorXd response_magnitudes(const PrimitiveGraph& g, const Eigen::MatrixXd& x,
                                           FilterKind kind, int threads = 0) {
    const Eigen::MatrixXd f =
        kind == FilterKind::high_pass ? high_pass(g, x, threads) : low_pass(g, x, threads);
    return f.rowwise().squaredNorm();
}

// round-half-up at .5, used for every fractional count in the pipeline
inline std::size_t round_count(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

struct BandSelection {
    std::vector<std::uint32_t> kept;       // ascending
    std::vector<std::uint32_t> high_band;  // ascending, subset of kept
    std::vector<std::uint32_t> low_band;   // ascending, kept \ high_band
};

// Keeps exactly `m` nodes: the top round(gamma * m) by response descending,
// then the smallest responses among the rest to fill m.  Ties are broken
// toward the lower index in both passes.
inline BandSelection band_limited_select_count(const Eigen::VectorXd& response, std::size_t m,
                                               double gamma) {
    if (!(gamma >= 0.0) || gamma > 1.0) throw config_error("gamma must lie in [0, 1]");
    const std::size_t n = static_cast<std::size_t>(response.size());
    if (m == 0) throw config_error("selection is empty: target count is zero");
    if (m > n)
        throw config_error("selection target " + std::to_string(m) + " exceeds node count " +
                           std::to_string(n));
    const std::size_t h = std::min(round_count(gamma * static_cast<double>(m)), m);

    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ra = response[a], rb = response[b];
        return ra != rb ? ra > rb : a < b;
    });

    BandSelection sel;
    sel.high_band.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(h));
    std::vector<std::uint32_t> rest(idx.begin() + static_cast<std::ptrdiff_t>(h), idx.end());
    std::sort(rest.begin(), rest.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ra = response[a], rb = response[b];
        return ra != rb ? ra < rb : a < b;
    });
    sel.low_band.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(m - h));

    std::sort(sel.high_band.begin(), sel.high_band.end());
    std::sort(sel.low_band.begin(), sel.low_band.end());
    sel.kept.resize(m);
    std::merge(sel.high_band.begin(), sel.high_band.end(), sel.low_band.begin(),
               sel.low_band.end(), sel.kept.begin());
    return sel;
}

// Ratio form: keeps m = round(keep_ratio * n) nodes.
inline BandSelection band_limited_select(const Eigen::VectorXd& response, double keep_ratio,
                                         double gamma) {
    if (!(keep_ratio >= 0.0) || keep_ratio > 1.0)
        throw config_error("keep ratio must lie in [0, 1]");
    const std::size_t n = static_cast<std::size_t>(response.size());
    const std::size_t m = round_count(keep_ratio * static_cast<double>(n));
    if (m == 0)
        throw config_error("selection is empty: keep ratio " + std::to_string(keep_ratio) +
                           " of " + std::to_string(n) + " nodes rounds to zero");
    return band_limited_select_count(response, m, gamma);
}

// --- response dump: flat little-endian float32 values, one per node ---

inline void save_response_dump(const Eigen::VectorXd& response, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    for (Eigen::Index i = 0; i < response.size(); ++i) {
        const float v = static_cast<float>(response[i]);
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
    if (!out) throw io_error("failed writing '" + path + "'");
}

inline std::vector<float> load_response_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    const std::streamoff bytes = in.tellg();
    if (bytes % 4 != 0) throw format_error("'" + path + "': size is not a multiple of 4");
    in.seekg(0);
    std::vector<float> v(static_cast<std::size_t>(bytes / 4));
    in.read(reinterpret_cast<char*>(v.data()), bytes);
    if (!in) throw io_error("'" + path + "': short read");
    return v;
}

struct ResponseSummary {
    std::uint64_t n = 0;
    double min = 0.0, max = 0.0, mean = 0.0;
};

inline ResponseSummary summarize_response(const Eigen::VectorXd& response) {
    ResponseSummary s;
    s.n = static_cast<std::uint64_t>(response.size());
    if (s.n == 0) return s;
    s.min = response.minCoeff();
    s.max = response.maxCoeff();
    s.mean = response.mean();
    return s;
}

// --- selection dump: little-endian u32 kept indices, ascending ---

inline void save_selection_dump(const std::vector<std::uint32_t>& kept, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(kept.data()),
              static_cast<std::streamsize>(kept.size() * 4));
    if (!out) throw io_error("failed writing '" + path + "'");
}

inline std::vector<std::uint32_t> load_selection_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    const std::streamoff bytes = in.tellg();
    if (bytes % 4 != 0) throw format_error("'" + path + "': size is not a multiple of 4");
    in.seekg(0);
    std::vector<std::uint32_t> v(static_cast<std::size_t>(bytes / 4));
    in.read(reinterpret_cast<char*>(v.data()), bytes);
    if (!in) throw io_error("'" + path + "': short read");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1])
            throw format_error("'" + path + "': indices not strictly ascending at " +
                               std::to_string(i));
    return v;
}

} // namespace gsprune
