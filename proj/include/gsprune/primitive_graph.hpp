#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gsprune/errors.hpp"
#include "gsprune/parallel.hpp"
#include "gsprune/random.hpp"
#include "gsprune/splat_model.hpp"

namespace gsprune {

using PointMatrix = Eigen::Matrix<float, Eigen::Dynamic, 3, Eigen::RowMajor>;

struct GraphEdge {
    std::uint32_t i = 0;  // i < j always
    std::uint32_t j = 0;
    float w = 0.0f;
};

struct GraphBuildConfig {
    // Neighborhood radius; <= 0 selects 10x the minimum nearest-neighbor
    // distance (falling back to the smallest positive one when duplicate
    // points make the minimum zero).
    double tau = 0.0;
    // Gaussian kernel width; <= 0 selects the standard deviation of the
    // edge distances (their mean when the variance vanishes).
    double sigma = 0.0;
    // When set, tau bounds the squared distance instead of the distance.
    bool squared_threshold = false;
    std::uint64_t max_edges = 200'000'000ULL;
    int threads = 0;
    int power_max_iters = 200;
    double power_tol = 1e-6;
};

// Sparse symmetric affinity graph over primitive centers.  Each undirected
// edge is stored once with i < j, sorted by (i, j); `adj` is a derived
// both-direction traversal index whose per-row entry order is fixed by the
// sorted edge list, so operations built on it do not depend on the thread
// count.
struct PrimitiveGraph {
    struct AdjEntry {
        std::uint32_t nbr = 0;
        float w = 0.0f;
    };

    std::uint64_t n = 0;
    std::vector<GraphEdge> edges;
    std::vector<double> degree;
    std::vector<std::uint64_t> adj_offsets;  // n + 1
    std::vector<AdjEntry> adj;               // 2 * edges.size()
    double tau = 0.0;
    double sigma = 0.0;
    double spectral_norm = 0.0;  // largest |eigenvalue| of W; 0 iff no edges
};

namespace detail {

inline double square(double x) { return x * x; }

// Uniform grid over the bounding box.  Cells are addressed by a packed
// 21-bit-per-axis key; the cell edge is never smaller than needed to keep
// coordinates in range (a larger cell only widens candidate sets).
class UniformGrid {
public:
    struct Cell {
        std::uint64_t key;
        std::uint32_t begin;
        std::uint32_t end;  // range in order()
    };

    UniformGrid(const PointMatrix& pts, double cell_size) : pts_(pts) {
        const std::size_t n = static_cast<std::size_t>(pts.rows());
        lo_ = {0.0, 0.0, 0.0};
        std::array<double, 3> hi = {0.0, 0.0, 0.0};
        if (n > 0) {
            for (int a = 0; a < 3; ++a) {
                lo_[a] = pts.col(a).minCoeff();
                hi[a] = pts.col(a).maxCoeff();
            }
        }
        double max_extent = 0.0;
        for (int a = 0; a < 3; ++a) max_extent = std::max(max_extent, hi[a] - lo_[a]);
        constexpr double kMaxCells = double(1u << 21) - 2.0;
        cell_ = std::max(cell_size, max_extent / kMaxCells);
        if (!(cell_ > 0.0)) cell_ = 1.0;
        for (int a = 0; a < 3; ++a)
            span_[a] = static_cast<std::int64_t>(std::floor((hi[a] - lo_[a]) / cell_));

        std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
        for (std::size_t i = 0; i < n; ++i)
            keyed[i] = {key_of(cell_coord(pts.row(static_cast<Eigen::Index>(i)))),
                        static_cast<std::uint32_t>(i)};
        std::sort(keyed.begin(), keyed.end());
        order_.resize(n);
        for (std::size_t i = 0; i < n; ++i) order_[i] = keyed[i].second;
        for (std::size_t i = 0; i < n;) {
            std::size_t e = i;
            while (e < n && keyed[e].first == keyed[i].first) ++e;
            cell_lookup_.emplace(keyed[i].first, cells_.size());
            cells_.push_back({keyed[i].first, static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(e)});
            i = e;
        }
    }

    std::array<std::int64_t, 3> cell_coord(const Eigen::RowVector3f& p) const {
        std::array<std::int64_t, 3> c{};
        for (int a = 0; a < 3; ++a) {
            const double rel = (static_cast<double>(p[a]) - lo_[a]) / cell_;
            c[a] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(rel)), 0,
                                            (std::int64_t(1) << 21) - 1);
        }
        return c;
    }

    static std::uint64_t key_of(const std::array<std::int64_t, 3>& c) {
        return (static_cast<std::uint64_t>(c[2]) << 42) |
               (static_cast<std::uint64_t>(c[1]) << 21) | static_cast<std::uint64_t>(c[0]);
    }

    static std::array<std::int64_t, 3> coord_of(std::uint64_t key) {
        constexpr std::uint64_t mask = (1u << 21) - 1;
        return {static_cast<std::int64_t>(key & mask),
                static_cast<std::int64_t>((key >> 21) & mask),
                static_cast<std::int64_t>((key >> 42) & mask)};
    }

    const Cell* find(const std::array<std::int64_t, 3>& c) const {
        for (int a = 0; a < 3; ++a)
            if (c[a] < 0 || c[a] > span_[a]) return nullptr;
        const auto it = cell_lookup_.find(key_of(c));
        return it == cell_lookup_.end() ? nullptr : &cells_[it->second];
    }

    // True when every occupied cell lies strictly inside Chebyshev radius r
    // of c0, i.e. shells >= r contain no points at all.
    bool shell_exhausted(const std::array<std::int64_t, 3>& c0, std::int64_t r) const {
        for (int a = 0; a < 3; ++a)
            if (!(c0[a] < r && span_[a] - c0[a] < r)) return false;
        return true;
    }

    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<std::uint32_t>& order() const { return order_; }
    double cell_size() const { return cell_; }

    double sq_dist(std::uint32_t a, std::uint32_t b) const {
        double s = 0.0;
        for (int ax = 0; ax < 3; ++ax) {
            const double d = static_cast<double>(pts_(a, ax)) - static_cast<double>(pts_(b, ax));
            s += d * d;
        }
        return s;
    }

    const PointMatrix& points() const { return pts_; }

private:
    const PointMatrix& pts_;
    std::array<double, 3> lo_;
    std::array<std::int64_t, 3> span_ = {0, 0, 0};  // max occupied cell coord per axis
    double cell_ = 1.0;
    std::vector<std::uint32_t> order_;
    std::vector<Cell> cells_;
    std::unordered_map<std::uint64_t, std::size_t> cell_lookup_;
};

// Exact nearest-neighbor squared distance for one point via expanding shell
// search: once the best candidate beats the closest possible distance of the
// next shell, no farther shell can win.
inline double nn_sq_dist(const UniformGrid& grid, std::uint32_t self, bool exclude_zero) {
    const auto c0 = grid.cell_coord(grid.points().row(self));
    const double cell = grid.cell_size();
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t r = 0;; ++r) {
        if (r > 0 && best <= square(double(r - 1) * cell)) break;
        if (r > 0 && grid.shell_exhausted(c0, r)) break;
        for (std::int64_t dz = -r; dz <= r; ++dz)
            for (std::int64_t dy = -r; dy <= r; ++dy)
                for (std::int64_t dx = -r; dx <= r; ++dx) {
                    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) continue;
                    const auto* cellp = grid.find({c0[0] + dx, c0[1] + dy, c0[2] + dz});
                    if (!cellp) continue;
                    for (std::uint32_t k = cellp->begin; k < cellp->end; ++k) {
                        const std::uint32_t other = grid.order()[k];
                        if (other == self) continue;
                        const double d2 = grid.sq_dist(self, other);
                        if (exclude_zero && d2 == 0.0) continue;
                        best = std::min(best, d2);
                    }
                }
    }
    return best;
}

struct EdgeStats {
    double mean = 0.0;
    double stddev = 0.0;
};

// Mean / standard deviation of the values currently held in the edge `w`
// slots.  Accumulated over fixed chunks so the result does not depend on the
// thread count.
inline EdgeStats edge_distance_stats(const std::vector<GraphEdge>& edges, int threads) {
    const std::size_t m = edges.size();
    constexpr std::size_t kChunks = 256;
    std::array<double, kChunks> sums{}, sq_sums{};
    parallel_for(0, kChunks, threads, [&](std::size_t c) {
        const std::size_t b = m * c / kChunks, e = m * (c + 1) / kChunks;
        double s = 0.0, s2 = 0.0;
        for (std::size_t k = b; k < e; ++k) {
            const double d = edges[k].w;
            s += d;
            s2 += d * d;
        }
        sums[c] = s;
        sq_sums[c] = s2;
    });
    double s = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < kChunks; ++c) {
        s += sums[c];
        s2 += sq_sums[c];
    }
    EdgeStats st;
    st.mean = s / static_cast<double>(m);
    const double var = std::max(0.0, s2 / static_cast<double>(m) - st.mean * st.mean);
    st.stddev = std::sqrt(var);
    return st;
}

} // namespace detail

// Smallest nearest-neighbor distance over all points (0 when duplicates
// exist); exact.  Errors on fewer than two points, or when `exclude_zero`
// finds no positive distance at all.
inline double min_nn_distance(const PointMatrix& pts, int threads = 0, bool exclude_zero = false) {
    const std::size_t n = static_cast<std::size_t>(pts.rows());
    if (n < 2) throw config_error("nearest-neighbor distance requires at least 2 points");
    std::array<double, 3> ext{};
    for (int a = 0; a < 3; ++a)
        ext[a] = static_cast<double>(pts.col(a).maxCoeff()) -
                 static_cast<double>(pts.col(a).minCoeff());
    const double max_ext = std::max({ext[0], ext[1], ext[2]});
    const double cell = max_ext > 0.0 ? max_ext / std::max(1.0, std::cbrt(double(n))) : 1.0;
    detail::UniformGrid grid(pts, cell);
    std::vector<double> best(n);
    parallel_for(0, n, threads, [&](std::size_t i) {
        best[i] = detail::nn_sq_dist(grid, static_cast<std::uint32_t>(i), exclude_zero);
    });
    double m = std::numeric_limits<double>::infinity();
    for (double b : best) m = std::min(m, b);
    if (!std::isfinite(m)) throw config_error("degenerate input: all points coincide");
    return std::sqrt(m);
}

// y = W x, accumulated per output row in index order (deterministic for any
// thread count).
inline Eigen::MatrixXd shift_apply(const PrimitiveGraph& g, const Eigen::MatrixXd& x,
                                   int threads = 0) {
    if (static_cast<std::uint64_t>(x.rows()) != g.n)
        throw config_error("signal has " + std::to_string(x.rows()) + " rows, graph has " +
                           std::to_string(g.n));
    Eigen::MatrixXd y(x.rows(), x.cols());
    const Eigen::Index cols = x.cols();
    parallel_for(0, static_cast<std::size_t>(g.n), threads, [&](std::size_t r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (std::uint64_t k = g.adj_offsets[r]; k < g.adj_offsets[r + 1]; ++k)
                acc += static_cast<double>(g.adj[k].w) * x(g.adj[k].nbr, c);
            y(static_cast<Eigen::Index>(r), c) = acc;
        }
    });
    return y;
}

// Largest |eigenvalue| of W by power iteration on W^2 (symmetric W may carry
// a -lambda twin, so iterating the square is sign-robust).  The Rayleigh
// quotient of W^2 never exceeds lambda_max^2, which keeps the estimate on
// the conservative side.  Stops on a relative residual below `tol` or at
// `max_iters`; reductions run single-threaded so results do not depend on
// the thread count.
inline double spectral_norm_estimate(const PrimitiveGraph& g, int max_iters = 200,
                                     double tol = 1e-6, int threads = 0) {
    if (g.edges.empty()) throw config_error("spectral norm of an edgeless graph is undefined");
    const Eigen::Index n = static_cast<Eigen::Index>(g.n);
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(n, 1, 1.0 / std::sqrt(double(g.n)));
    double mu = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::MatrixXd u = shift_apply(g, v, threads);
        const Eigen::MatrixXd z = shift_apply(g, u, threads);
        double dot = 0.0, znorm_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            dot += v(i, 0) * z(i, 0);
            znorm_sq += z(i, 0) * z(i, 0);
        }
        mu = dot;  // = v^T W^2 v = ||W v||^2 for unit v
        if (znorm_sq == 0.0) {
            // v landed in the kernel; restart from a hash-seeded vector
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double r = hash_symmetric(0x5eedULL + std::uint64_t(it),
                                                static_cast<std::uint64_t>(i));
                v(i, 0) = r;
                s += r * r;
            }
            v /= std::sqrt(std::max(s, 1e-300));
            continue;
        }
        double res_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = z(i, 0) - mu * v(i, 0);
            res_sq += r * r;
        }
        v = z / std::sqrt(znorm_sq);
        if (std::sqrt(res_sq) <= tol * mu) break;
    }
    return std::sqrt(std::max(mu, 0.0));
}

// Builds the thresholded Gaussian affinity graph over `pts`: an edge (i, j)
// exists iff dist(i, j) < tau (squared distance when configured so), with
// weight exp(-dist^2 / (2 sigma^2)).  Runs the power iteration for the
// spectral norm unless the edge set is empty.
inline PrimitiveGraph build_graph(const PointMatrix& pts, const GraphBuildConfig& cfg = {}) {
    const std::size_t n = static_cast<std::size_t>(pts.rows());
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw capacity_error("point count exceeds 32-bit index range");

    PrimitiveGraph g;
    g.n = n;
    g.degree.assign(n, 0.0);
    g.adj_offsets.assign(n + 1, 0);

    double tau = cfg.tau;
    if (tau <= 0.0) {
        double base = min_nn_distance(pts, cfg.threads);
        if (base == 0.0) base = min_nn_distance(pts, cfg.threads, /*exclude_zero=*/true);
        tau = 10.0 * base;
    }
    g.tau = tau;
    if (n == 0) return g;

    const double radius = cfg.squared_threshold ? std::sqrt(tau) : tau;
    const double thresh = cfg.squared_threshold ? tau : tau * tau;  // bound on squared distance
    detail::UniformGrid grid(pts, radius);
    const auto& cells = grid.cells();
    const auto& order = grid.order();

    // Partition cells so chunks carry similar point counts.
    const int nthreads = resolve_threads(cfg.threads);
    const std::size_t nchunks = std::min<std::size_t>(static_cast<std::size_t>(nthreads) * 4,
                                                      std::max<std::size_t>(cells.size(), 1));
    std::vector<std::size_t> chunk_bounds(nchunks + 1, cells.size());
    {
        chunk_bounds[0] = 0;
        std::size_t ci = 0;
        for (std::size_t c = 1; c < nchunks; ++c) {
            const std::size_t target = n * c / nchunks;
            while (ci < cells.size() && cells[ci].end < target) ++ci;
            chunk_bounds[c] = std::max(ci, chunk_bounds[c - 1]);
        }
    }

    // Forward half of the 26-neighborhood: offsets lexicographically
    // positive in (z, y, x).  Together with in-cell pairs this visits each
    // unordered pair at most once.
    std::array<std::array<std::int64_t, 3>, 13> fwd{};
    {
        std::size_t k = 0;
        for (std::int64_t dz = 0; dz <= 1; ++dz)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    if (dz == 0 && (dy < 0 || (dy == 0 && dx <= 0))) continue;
                    fwd[k++] = {dx, dy, dz};
                }
    }

    std::vector<std::vector<GraphEdge>> buffers(nchunks);
    std::atomic<std::uint64_t> total_edges{0};
    std::atomic<bool> over_cap{false};

    parallel_for(0, nchunks, cfg.threads, [&](std::size_t chunk) {
        auto& buf = buffers[chunk];
        std::uint64_t local_since_sync = 0;
        auto emit = [&](std::uint32_t a, std::uint32_t b, double d2) {
            GraphEdge e;
            e.i = std::min(a, b);
            e.j = std::max(a, b);
            e.w = static_cast<float>(std::sqrt(d2));  // distance; weight comes later
            buf.push_back(e);
            if (++local_since_sync == 65536) {
                if (total_edges.fetch_add(local_since_sync) + local_since_sync > cfg.max_edges)
                    over_cap.store(true);
                local_since_sync = 0;
            }
        };
        for (std::size_t c = chunk_bounds[chunk]; c < chunk_bounds[chunk + 1]; ++c) {
            if (over_cap.load(std::memory_order_relaxed)) return;
            const auto& cell = cells[c];
            const auto cc = detail::UniformGrid::coord_of(cell.key);
            for (std::uint32_t u = cell.begin; u < cell.end; ++u)
                for (std::uint32_t v = u + 1; v < cell.end; ++v) {
                    const double d2 = grid.sq_dist(order[u], order[v]);
                    if (d2 < thresh) emit(order[u], order[v], d2);
                }
            for (const auto& off : fwd) {
                const auto* nb = grid.find({cc[0] + off[0], cc[1] + off[1], cc[2] + off[2]});
                if (!nb) continue;
                for (std::uint32_t u = cell.begin; u < cell.end; ++u)
                    for (std::uint32_t v = nb->begin; v < nb->end; ++v) {
                        const double d2 = grid.sq_dist(order[u], order[v]);
                        if (d2 < thresh) emit(order[u], order[v], d2);
                    }
            }
        }
        total_edges.fetch_add(local_since_sync);
        if (buf.size() > cfg.max_edges) over_cap.store(true);
    });

    std::uint64_t m = 0;
    for (const auto& b : buffers) m += b.size();
    if (over_cap.load() || m > cfg.max_edges)
        throw capacity_error("graph edge count exceeds cap of " + std::to_string(cfg.max_edges) +
                             "; reduce tau or raise the cap");

    g.edges.resize(m);
    {
        std::vector<std::size_t> offs(nchunks);
        std::size_t off = 0;
        for (std::size_t c = 0; c < nchunks; ++c) {
            offs[c] = off;
            off += buffers[c].size();
        }
        parallel_for(0, nchunks, cfg.threads, [&](std::size_t c) {
            std::copy(buffers[c].begin(), buffers[c].end(), g.edges.begin() + offs[c]);
            std::vector<GraphEdge>().swap(buffers[c]);
        });
    }
    parallel_sort(g.edges, cfg.threads, [](const GraphEdge& a, const GraphEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    // sigma from the edge distances (still parked in the w slots)
    double sigma = cfg.sigma;
    if (sigma <= 0.0) {
        if (m == 0) {
            sigma = 1.0;
        } else {
            const auto st = detail::edge_distance_stats(g.edges, cfg.threads);
            sigma = st.stddev;
            if (!(sigma > 0.0) || sigma < 1e-12 * std::max(st.mean, 1e-300))
                sigma = st.mean;              // all edges equally long
            if (!(sigma > 0.0)) sigma = 1.0;  // only zero-length edges
        }
    }
    g.sigma = sigma;

    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    parallel_for(0, g.edges.size(), cfg.threads, [&](std::size_t k) {
        const double d = g.edges[k].w;
        float wf = static_cast<float>(std::exp(-d * d * inv_two_sigma_sq));
        if (wf <= 0.0f) wf = std::numeric_limits<float>::min();
        g.edges[k].w = wf;
    });

    // Traversal index.  Entry counting is order-independent; the fill walks
    // the sorted edge list once, so per-row entry order is reproducible.
    {
        std::vector<std::atomic<std::uint32_t>> counts(n);
        for (auto& c : counts) c.store(0, std::memory_order_relaxed);
        parallel_for(0, g.edges.size(), cfg.threads, [&](std::size_t k) {
            counts[g.edges[k].i].fetch_add(1, std::memory_order_relaxed);
            counts[g.edges[k].j].fetch_add(1, std::memory_order_relaxed);
        });
        for (std::size_t r = 0; r < n; ++r)
            g.adj_offsets[r + 1] = g.adj_offsets[r] + counts[r].load(std::memory_order_relaxed);
        g.adj.resize(g.adj_offsets[n]);
        std::vector<std::uint64_t> cursor(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
        for (const auto& e : g.edges) {
            g.adj[cursor[e.i]++] = {e.j, e.w};
            g.adj[cursor[e.j]++] = {e.i, e.w};
        }
    }

    parallel_for(0, n, cfg.threads, [&](std::size_t r) {
        double s = 0.0;
        for (std::uint64_t k = g.adj_offsets[r]; k < g.adj_offsets[r + 1]; ++k)
            s += g.adj[k].w;
        g.degree[r] = s;
    });

    if (!g.edges.empty())
        g.spectral_norm =
            spectral_norm_estimate(g, cfg.power_max_iters, cfg.power_tol, cfg.threads);
    return g;
}

inline PrimitiveGraph build_graph(const GaussianField& field, const GraphBuildConfig& cfg = {}) {
    PointMatrix pts(static_cast<Eigen::Index>(field.size()), 3);
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        pts.row(i) = field.primitives[static_cast<std::size_t>(i)].center.transpose();
    return build_graph(pts, cfg);
}

// y = (W / ||W||) x; the zero operator when the graph has no edges.
inline Eigen::MatrixXd normalized_shift_apply(const PrimitiveGraph& g, const Eigen::MatrixXd& x,
                                              int threads = 0) {
    if (g.edges.empty()) {
        if (static_cast<std::uint64_t>(x.rows()) != g.n)
            throw config_error("signal has " + std::to_string(x.rows()) + " rows, graph has " +
                               std::to_string(g.n));
        return Eigen::MatrixXd::Zero(x.rows(), x.cols());
    }
    return shift_apply(g, x, threads) / g.spectral_norm;
}

// --- binary dump: "GSPG", u64 point count, u64 edge count, then
// (u32 i, u32 j, f32 w) triples in (i, j) order ---

inline void save_graph_dump(const PrimitiveGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.write("GSPG", 4);
    const std::uint64_t n = g.n, m = g.edges.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&m), 8);
    for (const auto& e : g.edges) {
        out.write(reinterpret_cast<const char*>(&e.i), 4);
        out.write(reinterpret_cast<const char*>(&e.j), 4);
        out.write(reinterpret_cast<const char*>(&e.w), 4);
    }
    if (!out) throw io_error("failed writing '" + path + "'");
}

// Reads a dump back into a usable graph: adjacency and degrees are rebuilt,
// and the spectral norm re-estimated (tau / sigma are not stored in the
// binary and stay 0).
inline PrimitiveGraph load_graph_dump(const std::string& path, int threads = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "GSPG", 4) != 0)
        throw format_error("'" + path + "': bad graph dump magic");
    std::uint64_t n = 0, m = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&m), 8);
    if (!in) throw io_error("'" + path + "': truncated header");

    PrimitiveGraph g;
    g.n = n;
    g.edges.resize(m);
    in.read(reinterpret_cast<char*>(g.edges.data()),
            static_cast<std::streamsize>(m * sizeof(GraphEdge)));
    if (static_cast<std::uint64_t>(in.gcount()) != m * sizeof(GraphEdge))
        throw io_error("'" + path + "': truncated edge list");
    for (const auto& e : g.edges)
        if (e.i >= e.j || e.j >= n)
            throw format_error("'" + path + "': invalid edge (" + std::to_string(e.i) + ", " +
                               std::to_string(e.j) + ")");

    g.adj_offsets.assign(n + 1, 0);
    for (const auto& e : g.edges) {
        ++g.adj_offsets[e.i + 1];
        ++g.adj_offsets[e.j + 1];
    }
    for (std::size_t r = 0; r < n; ++r) g.adj_offsets[r + 1] += g.adj_offsets[r];
    g.adj.resize(2 * m);
    {
        std::vector<std::uint64_t> cursor(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
        for (const auto& e : g.edges) {
            g.adj[cursor[e.i]++] = {e.j, e.w};
            g.adj[cursor[e.j]++] = {e.i, e.w};
        }
    }
    g.degree.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::uint64_t k = g.adj_offsets[r]; k < g.adj_offsets[r + 1]; ++k)
            g.degree[r] += g.adj[k].w;
    if (!g.edges.empty()) g.spectral_norm = spectral_norm_estimate(g, 200, 1e-6, threads);
    return g;
}

} // namespace gsprune
