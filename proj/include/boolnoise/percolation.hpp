/*
 * percolation.hpp: bond percolation on the (m+1)×m rectangle.
 *
 * Vertices form m rows and m+1 columns; vertex (r, c) has id r·(m+1) + c.
 * Edge order: the m² horizontal edges row by row, then the (m−1)(m+1)
 * vertical edges row by row, 2m² − 1 in total. The crossing event C asks for
 * an open path from column 0 to column m.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "boolnoise/common.hpp"
#include "boolnoise/parallel.hpp"
#include "boolnoise/rng.hpp"

namespace boolnoise {

struct Edge {
    int a = 0;
    int b = 0;
    bool horizontal = true;
};

class GridRectangle {
public:
    explicit GridRectangle(int m) : m_(m) {
        require(m >= 1, "build_grid: m must be at least 1");
        require(m <= 4096, "build_grid: m must be at most 4096");
        const int cols = m + 1;
        edges_.reserve(static_cast<std::size_t>(2) * m * m - 1);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) edges_.push_back({vertex(r, c), vertex(r, c + 1), true});
        }
        for (int r = 0; r + 1 < m; ++r) {
            for (int c = 0; c < cols; ++c) edges_.push_back({vertex(r, c), vertex(r + 1, c), false});
        }
        require(edges_.size() == static_cast<std::size_t>(2) * m * m - 1, "build_grid: edge count mismatch");

        incident_.assign(vertex_count(), {});
        for (int e = 0; e < edge_count(); ++e) {
            incident_[edges_[e].a].push_back(e);
            incident_[edges_[e].b].push_back(e);
        }
    }

    int m() const { return m_; }
    int columns() const { return m_ + 1; }
    int vertex_count() const { return m_ * (m_ + 1); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int vertex(int row, int col) const { return row * (m_ + 1) + col; }
    int row_of(int v) const { return v / (m_ + 1); }
    int column_of(int v) const { return v % (m_ + 1); }
    bool on_left(int v) const { return column_of(v) == 0; }
    bool on_right(int v) const { return column_of(v) == m_; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& incident(int v) const { return incident_[v]; }

    std::vector<int> left_boundary() const {
        std::vector<int> v(m_);
        for (int r = 0; r < m_; ++r) v[r] = vertex(r, 0);
        return v;
    }

    std::vector<int> right_boundary() const {
        std::vector<int> v(m_);
        for (int r = 0; r < m_; ++r) v[r] = vertex(r, m_);
        return v;
    }

    // Twice the x-coordinate of the edge midpoint.
    int doubled_mid_x(int e) const { return column_of(edges_[e].a) + column_of(edges_[e].b); }

    // Edges whose midpoint lies at or right of the vertical centre line.
    std::vector<int> right_half_edges() const {
        std::vector<int> out;
        for (int e = 0; e < edge_count(); ++e) {
            if (doubled_mid_x(e) >= m_) out.push_back(e);
        }
        return out;
    }

private:
    int m_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_;
};

inline GridRectangle build_grid(int m) { return GridRectangle(m); }

class Configuration {
public:
    explicit Configuration(std::size_t size = 0, bool open = false)
        : size_(size), words_((size + 63) / 64, open ? ~std::uint64_t{0} : 0) {
        trim();
    }

    static Configuration uniform(std::size_t size, Philox& rng) {
        Configuration c(size);
        for (auto& w : c.words_) w = rng();
        c.trim();
        return c;
    }

    std::size_t size() const { return size_; }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t bit = std::uint64_t{1} << (i % 64);
        if (v) words_[i / 64] |= bit;
        else words_[i / 64] &= ~bit;
    }
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
    std::size_t count() const {
        std::size_t s = 0;
        for (auto w : words_) s += std::popcount(w);
        return s;
    }
    bool operator==(const Configuration&) const = default;

    // Flips each bit independently with probability eps.
    void apply_noise(double eps, Philox& rng) {
        if (eps <= 0.0) return;
        if (eps >= 1.0) {
            for (auto& w : words_) w = ~w;
            trim();
            return;
        }
        // geometric gaps between flipped positions
        const double log_keep = std::log1p(-eps);
        double pos = -1.0;
        for (;;) {
            pos += std::floor(std::log1p(-rng.uniform()) / log_keep) + 1.0;
            if (pos >= static_cast<double>(size_)) break;
            flip(static_cast<std::size_t>(pos));
        }
    }

    // Nibble k holds bits 4k..4k+3, lowest bit first.
    std::string to_hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s((size_ + 3) / 4, '0');
        for (std::size_t k = 0; k < s.size(); ++k) {
            s[k] = digits[(words_[k / 16] >> (4 * (k % 16))) & 0xFu];
        }
        return s;
    }

    static Configuration from_hex(std::string_view hex, std::size_t size) {
        require(hex.size() == (size + 3) / 4, "configuration hex length does not match the grid");
        Configuration c(size);
        for (std::size_t k = 0; k < hex.size(); ++k) {
            const char ch = hex[k];
            std::uint64_t v;
            if (ch >= '0' && ch <= '9') v = ch - '0';
            else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
            else throw ContractError(std::string("configuration hex: bad digit '") + ch + "'");
            c.words_[k / 16] |= v << (4 * (k % 16));
        }
        const auto before = c.words_;
        c.trim();
        require(before == c.words_, "configuration hex sets bits beyond the edge count");
        return c;
    }

private:
    void trim() {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_;
    std::vector<std::uint64_t> words_;
};

inline void write_snapshot(std::ostream& os, const GridRectangle& g, const Configuration& c) {
    os << "m=" << g.m() << '\n' << c.to_hex() << '\n';
}

inline Configuration read_snapshot(std::istream& is, const GridRectangle& g) {
    std::string header, hex;
    require(static_cast<bool>(is >> header >> hex), "snapshot: expected header and hex line");
    require(header == "m=" + std::to_string(g.m()), "snapshot: header '" + header + "' does not match grid");
    return Configuration::from_hex(hex, g.edge_count());
}

// Union-find crossing test. Column 0 is merged into a virtual source and
// column m into a virtual sink. Reusable across calls.
class CrossingDetector {
public:
    explicit CrossingDetector(const GridRectangle& g) : g_(&g), parent_(g.vertex_count() + 2) {}

    bool operator()(const Configuration& c) {
        require(c.size() == static_cast<std::size_t>(g_->edge_count()), "has_crossing: configuration size mismatch");
        const int source = g_->vertex_count();
        const int sink = source + 1;
        std::iota(parent_.begin(), parent_.end(), 0);
        for (int v = 0; v < g_->vertex_count(); ++v) {
            if (g_->on_left(v)) parent_[v] = source;
            else if (g_->on_right(v)) parent_[v] = sink;
        }
        for (int e = 0; e < g_->edge_count(); ++e) {
            if (!c.test(e)) continue;
            const int ra = find(g_->edge(e).a);
            const int rb = find(g_->edge(e).b);
            if (ra == rb) continue;
            // keep the virtual terminals as roots
            if (ra >= source) parent_[rb] = ra;
            else parent_[ra] = rb;
            if (find(source) == find(sink)) return true;
        }
        return find(source) == find(sink);
    }

private:
    int find(int v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    const GridRectangle* g_;
    std::vector<int> parent_;
};

inline bool has_crossing(const GridRectangle& g, const Configuration& c) { return CrossingDetector(g)(c); }

struct Exploration {
    bool crossed = false;
    std::vector<int> visited;  // queried edges, in query order
};

// Grows the open cluster of column 0 breadth-first, querying each edge from
// the cluster to a vertex outside it once.
inline Exploration explore_crossing(const GridRectangle& g, const std::function<bool(int)>& oracle) {
    Exploration out;
    std::vector<std::uint8_t> in_cluster(g.vertex_count(), 0);
    std::vector<std::uint8_t> queried(g.edge_count(), 0);
    std::deque<int> frontier;
    for (int v : g.left_boundary()) {
        in_cluster[v] = 1;
        frontier.push_back(v);
    }
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop_front();
        for (int e : g.incident(v)) {
            const int u = g.edge(e).a == v ? g.edge(e).b : g.edge(e).a;
            if (in_cluster[u] || queried[e]) continue;
            queried[e] = 1;
            out.visited.push_back(e);
            if (oracle(e)) {
                in_cluster[u] = 1;
                out.crossed |= g.on_right(u);
                frontier.push_back(u);
            }
        }
    }
    return out;
}

inline constexpr int kExactCrossingMaxEdges = 24;

inline Estimate crossing_probability_exact(const GridRectangle& g) {
    const int edges = g.edge_count();
    if (edges > kExactCrossingMaxEdges) {
        throw ResourceError("exact crossing enumeration is limited to " + std::to_string(kExactCrossingMaxEdges) +
                            " edges (m <= 3)");
    }
    CrossingDetector detect(g);
    std::uint64_t hits = 0;
    Configuration c(edges);
    for (Mask x = 0; x <= full_mask(edges); ++x) {
        for (int e = 0; e < edges; ++e) c.set(e, (x >> e) & 1u);
        hits += detect(c);
    }
    Estimate r;
    r.value = std::ldexp(static_cast<double>(hits), -edges);
    r.samples = std::uint64_t{1} << edges;
    r.exact = true;
    return r;
}

namespace detail {
// Runs body(detector, rng, i) for every sample index and returns the per-index
// results; a detector is allocated per worker chunk.
template <class T, class Body>
std::vector<T> per_sample(const GridRectangle& g, std::uint64_t samples, std::uint64_t seed, unsigned workers,
                          Body&& body) {
    std::vector<T> out(samples);
    const unsigned lanes = std::max(1u, workers);
    parallel_for(lanes, lanes, [&](std::uint64_t lane) {
        CrossingDetector detect(g);
        const std::uint64_t lo = samples * lane / lanes;
        const std::uint64_t hi = samples * (lane + 1) / lanes;
        for (std::uint64_t i = lo; i < hi; ++i) {
            Philox rng(seed, i);
            out[i] = body(detect, rng, i);
        }
    });
    return out;
}

inline Estimate mean_estimate(const std::vector<double>& v, std::uint64_t seed) {
    Estimate e;
    e.samples = v.size();
    e.seed = seed;
    if (v.empty()) return e;
    double s = 0.0;
    for (double x : v) s += x;
    e.value = s / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - e.value) * (x - e.value);
        e.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return e;
}

inline std::uint64_t count_true(const std::vector<std::uint8_t>& v) {
    return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
}
}  // namespace detail

inline Estimate estimate_crossing(const GridRectangle& g, std::uint64_t samples, std::uint64_t seed,
                                  unsigned workers = 1) {
    require(samples >= 1, "estimate_crossing: samples must be positive");
    auto hits = detail::per_sample<std::uint8_t>(g, samples, seed, workers, [&](auto& detect, Philox& rng, auto) {
        return static_cast<std::uint8_t>(detect(Configuration::uniform(g.edge_count(), rng)));
    });
    return proportion(detail::count_true(hits), samples, seed);
}

struct SensitivityReport {
    double eps = 0.0;
    std::uint64_t outer = 0;
    std::uint64_t inner = 0;
    double p_bar = 0.0;                // mean crossing frequency over x and noised copies
    std::vector<double> delta_grid;
    std::vector<double> gamma_hat;     // fraction of x with |p̂(x) − p̄| > δ
    double inner_sigma = 0.0;          // √(p̄(1−p̄)/inner), the per-x sampling error
    std::vector<bool> inner_adequate;  // inner_sigma ≤ δ/3
    Estimate covariance;               // Ê[χ(x)χ(N_ε x)] − p̄²
};

inline SensitivityReport estimate_noise_sensitivity(const GridRectangle& g, double eps,
                                                    const std::vector<double>& delta_grid, std::uint64_t outer,
                                                    std::uint64_t inner, std::uint64_t seed, unsigned workers = 1) {
    require(outer >= 2 && inner >= 1, "estimate_noise_sensitivity: need outer >= 2 and inner >= 1");
    require(eps >= 0.0 && eps <= 1.0, "estimate_noise_sensitivity: eps must lie in [0, 1]");
    struct Row {
        bool base = false;
        std::uint32_t noised_hits = 0;
    };
    auto rows = detail::per_sample<Row>(g, outer, seed, workers, [&](auto& detect, Philox& rng, auto) {
        const auto x = Configuration::uniform(g.edge_count(), rng);
        Row r;
        r.base = detect(x);
        for (std::uint64_t j = 0; j < inner; ++j) {
            auto y = x;
            y.apply_noise(eps, rng);
            r.noised_hits += detect(y);
        }
        return r;
    });

    SensitivityReport rep;
    rep.eps = eps;
    rep.outer = outer;
    rep.inner = inner;
    rep.delta_grid = delta_grid;
    const double inv_inner = 1.0 / static_cast<double>(inner);
    double sum_b = 0.0;
    for (const auto& r : rows) sum_b += 0.5 * (r.base + r.noised_hits * inv_inner);
    rep.p_bar = sum_b / static_cast<double>(outer);

    std::vector<double> a(outer), d(outer);
    double sum_a = 0.0;
    for (std::uint64_t i = 0; i < outer; ++i) {
        a[i] = rows[i].base * rows[i].noised_hits * inv_inner;
        sum_a += a[i];
    }
    const double mean_a = sum_a / static_cast<double>(outer);
    // delta method: cov = E a − (E b)², gradient (1, −2p̄)
    for (std::uint64_t i = 0; i < outer; ++i) {
        const double b = 0.5 * (rows[i].base + rows[i].noised_hits * inv_inner);
        d[i] = a[i] - 2.0 * rep.p_bar * b;
    }
    rep.covariance = detail::mean_estimate(d, seed);
    rep.covariance.value = mean_a - rep.p_bar * rep.p_bar;

    rep.inner_sigma = std::sqrt(rep.p_bar * (1.0 - rep.p_bar) * inv_inner);
    for (double delta : delta_grid) {
        std::uint64_t over = 0;
        for (const auto& r : rows) over += std::abs(r.noised_hits * inv_inner - rep.p_bar) > delta;
        rep.gamma_hat.push_back(static_cast<double>(over) / static_cast<double>(outer));
        rep.inner_adequate.push_back(rep.inner_sigma <= delta / 3.0);
    }
    return rep;
}

inline int majority_sign_edges(const Configuration& c, const std::vector<int>& subset) {
    long long diff = 0;
    for (int e : subset) diff += c.test(e) ? 1 : -1;
    return (diff > 0) - (diff < 0);
}

inline Estimate estimate_majority_correlation(const GridRectangle& g, const std::vector<int>& subset,
                                              std::uint64_t samples, std::uint64_t seed, unsigned workers = 1) {
    require(!subset.empty(), "estimate_majority_correlation: edge subset must be nonempty");
    require(samples >= 2, "estimate_majority_correlation: need at least two samples");
    for (int e : subset) require(e >= 0 && e < g.edge_count(), "estimate_majority_correlation: edge out of range");
    auto v = detail::per_sample<double>(g, samples, seed, workers, [&](auto& detect, Philox& rng, auto) {
        const auto x = Configuration::uniform(g.edge_count(), rng);
        return detect(x) ? static_cast<double>(majority_sign_edges(x, subset)) : 0.0;
    });
    return detail::mean_estimate(v, seed);
}

// P[exactly one of x, N_ε x crosses].
inline Estimate switch_probability(const GridRectangle& g, double eps, std::uint64_t samples, std::uint64_t seed,
                                   unsigned workers = 1) {
    require(samples >= 1, "switch_probability: samples must be positive");
    auto hits = detail::per_sample<std::uint8_t>(g, samples, seed, workers, [&](auto& detect, Philox& rng, auto) {
        auto x = Configuration::uniform(g.edge_count(), rng);
        const bool before = detect(x);
        x.apply_noise(eps, rng);
        return static_cast<std::uint8_t>(before != detect(x));
    });
    return proportion(detail::count_true(hits), samples, seed);
}

// E|K ∩ VISITED| / |K| under a uniform oracle.
inline Estimate visited_fraction(const GridRectangle& g, const std::vector<int>& subset, std::uint64_t samples,
                                 std::uint64_t seed, unsigned workers = 1) {
    require(!subset.empty() && samples >= 2, "visited_fraction: need a nonempty subset and two samples");
    std::vector<std::uint8_t> in_k(g.edge_count(), 0);
    for (int e : subset) in_k.at(e) = 1;
    auto v = detail::per_sample<double>(g, samples, seed, workers, [&](auto&, Philox& rng, auto) {
        const auto x = Configuration::uniform(g.edge_count(), rng);
        const auto ex = explore_crossing(g, [&](int e) { return x.test(e); });
        std::size_t hit = 0;
        for (int e : ex.visited) hit += in_k[e];
        return static_cast<double>(hit) / static_cast<double>(subset.size());
    });
    return detail::mean_estimate(v, seed);
}

// P[the open cluster of the middle left-boundary vertex reaches Euclidean
// distance ≥ r], for each r.
inline std::vector<Estimate> one_arm(const GridRectangle& g, const std::vector<double>& radii, std::uint64_t samples,
                                     std::uint64_t seed, unsigned workers = 1) {
    require(samples >= 1, "one_arm: samples must be positive");
    const int start = g.vertex(g.m() / 2, 0);
    auto reach = detail::per_sample<double>(g, samples, seed, workers, [&](auto&, Philox& rng, auto) {
        const auto x = Configuration::uniform(g.edge_count(), rng);
        std::vector<std::uint8_t> seen(g.vertex_count(), 0);
        std::vector<int> stack{start};
        seen[start] = 1;
        double best = 0.0;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const double dr = g.row_of(v) - g.row_of(start);
            const double dc = g.column_of(v) - g.column_of(start);
            best = std::max(best, std::hypot(dr, dc));
            for (int e : g.incident(v)) {
                if (!x.test(e)) continue;
                const int u = g.edge(e).a == v ? g.edge(e).b : g.edge(e).a;
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        return best;
    });
    std::vector<Estimate> out;
    for (double r : radii) {
        std::uint64_t hits = 0;
        for (double b : reach) hits += b >= r;
        out.push_back(proportion(hits, samples, seed));
    }
    return out;
}

struct SwitchingRecord {
    double duration = 0.0;
    bool initial_state = false;
    std::vector<double> switch_times;
    std::uint64_t events = 0;
    bool final_state = false;
};

enum class DynamicsMode { rebuild, fast };

// Each edge flips at the times of its own rate-`rate` Poisson clock. The
// superposition runs as one clock of rate E·rate that picks a uniform edge
// per event.
inline SwitchingRecord run_dynamical(const GridRectangle& g, double duration, double rate, std::uint64_t seed,
                                     std::uint64_t stream = 0, DynamicsMode mode = DynamicsMode::fast) {
    require(duration > 0.0 && std::isfinite(duration), "run_dynamical: duration must be positive");
    require(rate > 0.0 && std::isfinite(rate), "run_dynamical: rate must be positive");
    Philox rng(seed, stream);
    CrossingDetector detect(g);
    auto x = Configuration::uniform(g.edge_count(), rng);
    SwitchingRecord rec;
    rec.duration = duration;
    rec.initial_state = detect(x);
    bool state = rec.initial_state;
    const double total_rate = rate * g.edge_count();
    double t = 0.0;
    for (;;) {
        t += rng.exponential(total_rate);
        if (t > duration) break;
        const auto e = static_cast<std::size_t>(rng.below(g.edge_count()));
        x.flip(e);
        ++rec.events;
        // opening an edge cannot destroy a crossing, closing one cannot create it
        const bool opened = x.test(e);
        if (mode == DynamicsMode::fast && opened == state) continue;
        const bool now = detect(x);
        if (now != state) {
            rec.switch_times.push_back(t);
            state = now;
        }
    }
    rec.final_state = state;
    return rec;
}

}  // namespace boolnoise
