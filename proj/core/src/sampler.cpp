#include "pairpot/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pairpot/errors.hpp"
#include "pairpot/rng.hpp"

namespace pairpot {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double pos_inf = std::numeric_limits<double>::infinity();

/// Mutable configuration with a cell grid sized for the interaction
/// range, supporting O(1) insert/remove and range-radius neighbor
/// collection under either boundary metric. Falls back to a plain sweep
/// when the window is too small for a wrapped 3-cell stencil.
class ChainState {
public:
    ChainState(const Window& window, double range, bool torus)
        : window_(window), range_(range), metric_{window.dim(), window.side(), torus}, torus_(torus) {
        if (range_ > 0.0) {
            cells_per_axis_ = std::max(1, static_cast<int>(std::floor(window.side() / range_)));
            if (torus_ && cells_per_axis_ < 3) cells_per_axis_ = 1;
            edge_ = window.side() / cells_per_axis_;
            use_grid_ = cells_per_axis_ >= 3;
            if (use_grid_) {
                std::size_t n = 1;
                for (int i = 0; i < window.dim(); ++i) n *= static_cast<std::size_t>(cells_per_axis_);
                buckets_.resize(n);
            }
        }
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const Metric& metric() const { return metric_; }

    void insert(const Point& p) {
        points_.push_back(p);
        if (use_grid_) {
            const std::size_t c = flat_cell(p);
            point_cell_.push_back(c);
            buckets_[c].push_back(static_cast<std::uint32_t>(points_.size() - 1));
        }
    }

    void remove(std::size_t i) {
        const std::size_t last = points_.size() - 1;
        if (use_grid_) {
            detach(i);
            if (i != last) {
                detach(last);
                point_cell_[i] = point_cell_[last];
                buckets_[point_cell_[i]].push_back(static_cast<std::uint32_t>(i));
            }
            point_cell_.pop_back();
        }
        if (i != last) points_[i] = points_[last];
        points_.pop_back();
    }

    /// Points within `range` of u (inclusive), excluding index `exclude`.
    void neighbors(const Point& u, std::vector<Neighbor>& out, std::size_t exclude = no_index) const {
        out.clear();
        if (range_ <= 0.0) return;
        if (!use_grid_) {
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (i == exclude) continue;
                consider(u, i, out);
            }
            return;
        }
        int base[3] = {0, 0, 0};
        for (int d = 0; d < window_.dim(); ++d) {
            base[d] = static_cast<int>(std::floor(u[d] / edge_));
        }
        int off[3] = {-1, -1, -1};
        const int dim = window_.dim();
        while (true) {
            bool valid = true;
            std::size_t flat = 0;
            for (int d = 0; d < dim; ++d) {
                int c = base[d] + off[d];
                if (torus_) {
                    c = (c % cells_per_axis_ + cells_per_axis_) % cells_per_axis_;
                } else if (c < 0 || c >= cells_per_axis_) {
                    valid = false;
                    break;
                }
                flat = flat * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(c);
            }
            if (valid) {
                for (std::uint32_t idx : buckets_[flat]) {
                    if (idx == exclude) continue;
                    consider(u, idx, out);
                }
            }
            int d = dim - 1;
            while (d >= 0) {
                if (++off[d] <= 1) break;
                off[d] = -1;
                --d;
            }
            if (d < 0) break;
        }
    }

private:
    void consider(const Point& u, std::size_t i, std::vector<Neighbor>& out) const {
        const double dist = metric_(points_[i], u);
        if (dist <= range_) out.push_back(Neighbor{i, points_[i], dist});
    }

    void detach(std::size_t i) {
        auto& bucket = buckets_[point_cell_[i]];
        const auto it = std::find(bucket.begin(), bucket.end(), static_cast<std::uint32_t>(i));
        *it = bucket.back();
        bucket.pop_back();
    }

    std::size_t flat_cell(const Point& p) const {
        std::size_t flat = 0;
        for (int d = 0; d < window_.dim(); ++d) {
            int c = static_cast<int>(std::floor(p[d] / edge_));
            c = std::clamp(c, 0, cells_per_axis_ - 1);
            flat = flat * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(c);
        }
        return flat;
    }

    const Window& window_;
    double range_;
    Metric metric_;
    bool torus_;
    bool use_grid_ = false;
    int cells_per_axis_ = 1;
    double edge_ = 0.0;
    std::vector<Point> points_;
    std::vector<std::size_t> point_cell_;
    std::vector<std::vector<std::uint32_t>> buckets_;
};


/// Parallel loop that carries the first worker exception out of the
/// OpenMP region instead of terminating.
template <typename Body>
void parallel_chains(int count, Body&& body) {
    std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(pairpot_parallel_chains_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

Point uniform_point(const Window& window, Rng& rng) {
    Point p;
    for (int d = 0; d < window.dim(); ++d) p[d] = rng.uniform(0.0, window.side());
    return p;
}

std::vector<Point> run_chain(const Model& model, const Window& window, const ChainConfig& cfg,
                             Rng& rng) {
    ChainState state(window, model.range(), cfg.boundary == ChainConfig::Boundary::torus);
    if (cfg.initial == ChainConfig::Initial::poisson) {
        const double mean = model.beta() * window.volume();
        if (mean >= 1e8) throw ResourceError("run_birth_death: initial intensity too large");
        const std::uint64_t n = rng.poisson(mean);
        for (std::uint64_t i = 0; i < n; ++i) state.insert(uniform_point(window, rng));
    }

    const double log_volume = std::log(window.volume());
    std::vector<Neighbor> in_range;
    for (std::uint64_t step = 0; step < cfg.steps; ++step) {
        const bool propose_birth = rng.bernoulli(0.5);
        if (propose_birth) {
            const Point u = uniform_point(window, rng);
            state.neighbors(u, in_range);
            const double log_lambda = model.log_papangelou_local(u, in_range, state.metric());
            const double log_accept =
                log_lambda + log_volume - std::log(static_cast<double>(state.size() + 1));
            if (std::log(rng.uniform01()) < log_accept) state.insert(u);
        } else {
            if (state.size() == 0) continue;
            const std::size_t victim = static_cast<std::size_t>(rng.uniform_index(state.size()));
            state.neighbors(state.points()[victim], in_range, victim);
            const double log_lambda =
                model.log_papangelou_local(state.points()[victim], in_range, state.metric());
            // lambda = 0 makes the ratio infinite: such points cannot exist
            // under the target and their death is always accepted.
            const double log_accept =
                log_lambda == neg_inf
                    ? pos_inf
                    : std::log(static_cast<double>(state.size())) - log_lambda - log_volume;
            if (std::log(rng.uniform01()) < log_accept) state.remove(victim);
        }
    }
    return state.points();
}

} // namespace

ChainConfig ChainConfig::resolved(const Model& model, const Window& window) const {
    ChainConfig out = *this;
    const double scale = model.beta() * window.volume();
    if (out.burn_in == 0) {
        out.burn_in = std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(std::ceil(10.0 * scale)));
    }
    if (out.steps == 0) {
        out.steps = 2 * out.burn_in;
    }
    if (!(out.burn_in < out.steps)) {
        throw std::invalid_argument("ChainConfig: burn_in must be smaller than steps");
    }
    return out;
}

PointPattern sample_poisson(const Window& window, double beta, std::uint64_t seed,
                            double grid_range) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("sample_poisson: beta must be nonnegative and finite");
    }
    const double mean = beta * window.volume();
    if (mean >= 1e8) throw ResourceError("sample_poisson: beta * |W| exceeds the 1e8 sanity cap");

    Rng rng(seed, 0);
    const std::uint64_t n = rng.poisson(mean);
    std::vector<Point> points;
    points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) points.push_back(uniform_point(window, rng));
    return PointPattern(window, std::move(points), grid_range);
}

PointPattern run_birth_death(const Model& model, const Window& window, const ChainConfig& cfg) {
    const ChainConfig resolved = cfg.resolved(model, window);
    Rng rng(resolved.seed, 0);
    std::vector<Point> points = run_chain(model, window, resolved, rng);
    const double grid_range = model.range() > 0.0 ? model.range() : 0.0;
    return PointPattern(window, std::move(points), grid_range);
}

GnzReport gnz_residual(const Model& model, const Window& window, int n_chains,
                       const ChainConfig& cfg, const GnzTestFunction& test_fn, int grid_res) {
    if (n_chains < 1) throw std::invalid_argument("gnz_residual: need at least one chain");
    if (grid_res < 1) throw std::invalid_argument("gnz_residual: grid_res must be positive");
    const Box& region = test_fn.region;
    if (region.dim != window.dim()) throw std::invalid_argument("gnz_residual: region dim mismatch");
    for (int d = 0; d < region.dim; ++d) {
        if (region.lo[d] < 0.0 || region.hi[d] > window.side()) {
            throw std::invalid_argument("gnz_residual: region must lie inside the window");
        }
    }
    const ChainConfig resolved = cfg.resolved(model, window);
    const double isolation_range =
        test_fn.isolation_range > 0.0 ? test_fn.isolation_range : model.range();
    const bool weighted = test_fn.kind == GnzTestFunction::Kind::htilde_weighted;
    const double volume = region.volume();

    std::vector<double> lhs(static_cast<std::size_t>(n_chains), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(n_chains), 0.0);

    const int dim = window.dim();
    std::size_t grid_points = 1;
    for (int d = 0; d < dim; ++d) grid_points *= static_cast<std::size_t>(grid_res);

    const bool torus = resolved.boundary == ChainConfig::Boundary::torus;
    const double query_range = std::max(model.range(), isolation_range);

    parallel_chains(n_chains, [&](int chain) {
        Rng rng(resolved.seed, static_cast<std::uint64_t>(chain));
        const std::vector<Point> pts = run_chain(model, window, resolved, rng);
        // Query structure under the same boundary metric the chain used,
        // so the diagnostic checks the chain against its actual target.
        ChainState query(window, query_range, torus);
        for (const Point& p : pts) query.insert(p);

        const auto isolated = [&](const std::vector<Neighbor>& nbrs) {
            for (const Neighbor& nb : nbrs) {
                if (nb.dist <= isolation_range) return false;
            }
            return true;
        };

        // Sum side: points of the pattern inside the region.
        std::vector<Neighbor> in_range;
        double sum_side = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!region.contains(pts[i])) continue;
            if (weighted) {
                query.neighbors(pts[i], in_range, i);
                if (!isolated(in_range)) continue;
            }
            sum_side += 1.0;
        }
        lhs[static_cast<std::size_t>(chain)] = sum_side;

        // Integral side: midpoint quadrature of h(u, X) lambda(u, X).
        if (volume > 0.0) {
            double acc = 0.0;
            int idx[3] = {0, 0, 0};
            for (std::size_t g = 0; g < grid_points; ++g) {
                std::size_t rem = g;
                for (int d = dim - 1; d >= 0; --d) {
                    idx[d] = static_cast<int>(rem % static_cast<std::size_t>(grid_res));
                    rem /= static_cast<std::size_t>(grid_res);
                }
                Point u;
                for (int d = 0; d < dim; ++d) {
                    const double extent = region.hi[d] - region.lo[d];
                    u[d] = region.lo[d] + (idx[d] + 0.5) * extent / grid_res;
                }
                query.neighbors(u, in_range);
                if (weighted && !isolated(in_range)) continue;
                const double log_lambda = model.log_papangelou_local(u, in_range, query.metric());
                acc += std::exp(log_lambda);
            }
            rhs[static_cast<std::size_t>(chain)] = acc * volume / static_cast<double>(grid_points);
        }
    });

    GnzReport report;
    report.n_chains = n_chains;
    double mean_diff = 0.0;
    for (int c = 0; c < n_chains; ++c) {
        report.lhs += lhs[static_cast<std::size_t>(c)];
        report.rhs += rhs[static_cast<std::size_t>(c)];
    }
    report.lhs /= n_chains;
    report.rhs /= n_chains;
    mean_diff = report.lhs - report.rhs;

    double ss = 0.0;
    for (int c = 0; c < n_chains; ++c) {
        const double d = lhs[static_cast<std::size_t>(c)] - rhs[static_cast<std::size_t>(c)] - mean_diff;
        ss += d * d;
    }
    if (n_chains > 1) {
        report.mc_stderr = std::sqrt(ss / (n_chains - 1) / n_chains);
    }
    if (report.mc_stderr > 0.0) {
        report.z_score = mean_diff / report.mc_stderr;
    } else {
        report.z_score = mean_diff == 0.0 ? 0.0 : std::copysign(pos_inf, mean_diff);
    }
    return report;
}

GnzReport gnz_pair_residual(const Model& model, const Window& window, int n_chains,
                            const ChainConfig& cfg, const Box& region, double pair_range,
                            int grid_res) {
    if (n_chains < 1) throw std::invalid_argument("gnz_pair_residual: need at least one chain");
    if (grid_res < 1) throw std::invalid_argument("gnz_pair_residual: grid_res must be positive");
    if (!(pair_range > 0.0)) throw std::invalid_argument("gnz_pair_residual: pair_range must be positive");
    if (region.dim != window.dim()) throw std::invalid_argument("gnz_pair_residual: region dim mismatch");
    for (int d = 0; d < region.dim; ++d) {
        if (region.lo[d] - pair_range < 0.0 || region.hi[d] + pair_range > window.side()) {
            throw std::invalid_argument(
                "gnz_pair_residual: region must keep a pair_range margin inside the window");
        }
    }
    const ChainConfig resolved = cfg.resolved(model, window);
    const bool torus = resolved.boundary == ChainConfig::Boundary::torus;
    const double query_range = std::max(model.range(), pair_range);
    const int dim = window.dim();

    // Outer grid over the region; the inner ball reuses the same spacing.
    const double step = (region.hi[0] - region.lo[0]) / grid_res;
    std::size_t outer_nodes = 1;
    double outer_cell = 1.0;
    std::vector<double> axis_extent(static_cast<std::size_t>(dim));
    std::vector<int> axis_res(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        axis_extent[static_cast<std::size_t>(d)] = region.hi[d] - region.lo[d];
        axis_res[static_cast<std::size_t>(d)] =
            std::max(1, static_cast<int>(std::round(axis_extent[static_cast<std::size_t>(d)] / step)));
        outer_nodes *= static_cast<std::size_t>(axis_res[static_cast<std::size_t>(d)]);
        outer_cell *= axis_extent[static_cast<std::size_t>(d)] / axis_res[static_cast<std::size_t>(d)];
    }

    // Offsets w with ||w|| <= pair_range on a lattice of the same
    // spacing, centered on w = 0 (cell-center membership stands in for
    // the ball indicator, as in the one-point quadrature).
    std::vector<Point> offsets;
    {
        const int reach = static_cast<int>(std::ceil(pair_range / step));
        int ix[3] = {0, 0, 0};
        for (int d = 0; d < dim; ++d) ix[d] = -reach;
        while (true) {
            Point w;
            double norm2 = 0.0;
            for (int d = 0; d < dim; ++d) {
                w[d] = ix[d] * step;
                norm2 += w[d] * w[d];
            }
            if (norm2 <= pair_range * pair_range) offsets.push_back(w);
            int d = dim - 1;
            while (d >= 0) {
                if (++ix[d] <= reach) break;
                ix[d] = -reach;
                --d;
            }
            if (d < 0) break;
        }
    }
    double inner_cell = step;
    for (int d = 1; d < dim; ++d) inner_cell *= step;

    std::vector<double> lhs(static_cast<std::size_t>(n_chains), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(n_chains), 0.0);

    parallel_chains(n_chains, [&](int chain) {
        Rng rng(resolved.seed, static_cast<std::uint64_t>(chain));
        const std::vector<Point> pts = run_chain(model, window, resolved, rng);
        ChainState query(window, query_range, torus);
        for (const Point& p : pts) query.insert(p);

        // Pair sum: ordered pairs with the first point in the region.
        std::vector<Neighbor> in_range;
        double sum_side = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!region.contains(pts[i])) continue;
            query.neighbors(pts[i], in_range, i);
            for (const Neighbor& nb : in_range) {
                if (nb.dist <= pair_range) sum_side += 1.0;
            }
        }
        lhs[static_cast<std::size_t>(chain)] = sum_side;

        // Double integral of lambda(u, X) lambda(v, X + u).
        double acc = 0.0;
        std::vector<Neighbor> around_v;
        int idx[3] = {0, 0, 0};
        for (std::size_t g = 0; g < outer_nodes; ++g) {
            std::size_t rem = g;
            for (int d = dim - 1; d >= 0; --d) {
                idx[d] = static_cast<int>(rem % static_cast<std::size_t>(axis_res[static_cast<std::size_t>(d)]));
                rem /= static_cast<std::size_t>(axis_res[static_cast<std::size_t>(d)]);
            }
            Point u;
            for (int d = 0; d < dim; ++d) {
                u[d] = region.lo[d] +
                       (idx[d] + 0.5) * axis_extent[static_cast<std::size_t>(d)] /
                           axis_res[static_cast<std::size_t>(d)];
            }
            query.neighbors(u, in_range);
            const double log_lambda_u = model.log_papangelou_local(u, in_range, query.metric());
            if (log_lambda_u == neg_inf) continue;
            double inner = 0.0;
            for (const Point& w : offsets) {
                Point v;
                for (int d = 0; d < dim; ++d) v[d] = u[d] + w[d];
                query.neighbors(v, around_v);
                const double duv = query.metric()(u, v);
                if (duv <= model.range()) {
                    around_v.push_back(Neighbor{no_index, u, duv});
                }
                const double log_lambda_v = model.log_papangelou_local(v, around_v, query.metric());
                if (log_lambda_v == neg_inf) continue;
                inner += std::exp(log_lambda_u + log_lambda_v);
            }
            acc += inner;
        }
        rhs[static_cast<std::size_t>(chain)] = acc * outer_cell * inner_cell;
    });

    GnzReport report;
    report.n_chains = n_chains;
    for (int c = 0; c < n_chains; ++c) {
        report.lhs += lhs[static_cast<std::size_t>(c)];
        report.rhs += rhs[static_cast<std::size_t>(c)];
    }
    report.lhs /= n_chains;
    report.rhs /= n_chains;
    const double mean_diff = report.lhs - report.rhs;
    double ss = 0.0;
    for (int c = 0; c < n_chains; ++c) {
        const double d = lhs[static_cast<std::size_t>(c)] - rhs[static_cast<std::size_t>(c)] - mean_diff;
        ss += d * d;
    }
    if (n_chains > 1) report.mc_stderr = std::sqrt(ss / (n_chains - 1) / n_chains);
    if (report.mc_stderr > 0.0) {
        report.z_score = mean_diff / report.mc_stderr;
    } else {
        report.z_score = mean_diff == 0.0 ? 0.0 : std::copysign(pos_inf, mean_diff);
    }
    return report;
}

} // namespace pairpot
