#pragma once

// Shortest street-path travel between sites and the all-pairs cost oracle w.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "fdvrp/detail/text.hpp"
#include "fdvrp/error.hpp"
#include "fdvrp/streetmap.hpp"

namespace fdvrp {

using Pixels = std::int64_t;

/// A location on a street: segment `segment` of chain `street`, `offset` pixels
/// of arc length from the segment's first point.
struct SitePoint {
    std::int32_t street = 0;
    std::int32_t segment = 0;
    double offset = 0.0;
    PointD coord;

    friend bool operator==(const SitePoint&, const SitePoint&) = default;
};

inline PointD interpolate(const StreetChain& chain, std::size_t segment, double offset) {
    const auto a = chain.points[segment];
    const auto b = chain.points[segment + 1];
    const double t = offset / segment_length(chain, segment);
    return {a.x + (static_cast<double>(b.x) - a.x) * t, a.y + (static_cast<double>(b.y) - a.y) * t};
}

/// Builds a site, validating the street/segment/offset triple against the model.
inline SitePoint make_site(const MapModel& model, std::size_t street, std::size_t segment, double offset) {
    if (street >= model.streets.size()) throw Error("site references unknown street " + std::to_string(street));
    const auto& chain = model.streets[street];
    if (segment + 1 >= chain.points.size())
        throw Error("site references unknown segment " + std::to_string(segment) + " of street " +
                    std::to_string(street));
    const double len = segment_length(chain, segment);
    if (!(offset >= 0.0 && offset <= len)) throw Error("site offset outside its segment");
    return {static_cast<std::int32_t>(street), static_cast<std::int32_t>(segment), offset,
            interpolate(chain, segment, offset)};
}

/// Integer rounding applied to final shortest-path values: nearest, ties up.
inline Pixels round_half_up(double px) { return static_cast<Pixels>(std::floor(px + 0.5)); }

namespace detail {

inline bool site_less(const SitePoint& a, const SitePoint& b) {
    return std::tie(a.street, a.segment, a.offset) < std::tie(b.street, b.segment, b.offset);
}

/// Real-valued shortest distances from `source` to every vertex of the graph.
inline std::vector<double> dijkstra_from_site(const StreetGraph& g, const SitePoint& source) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.vertex_count(), inf);
    using Item = std::pair<double, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    const auto& e = g.edges[g.edge_id(source.street, source.segment)];
    dist[e.u] = source.offset;
    dist[e.v] = std::min(dist[e.v], e.length - source.offset);
    heap.push({dist[e.u], e.u});
    heap.push({dist[e.v], e.v});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (auto a = g.arc_begin[v]; a < g.arc_begin[v + 1]; ++a) {
            const auto& arc = g.arcs[a];
            const double nd = d + g.edges[arc.edge].length;
            if (nd < dist[arc.to]) {
                dist[arc.to] = nd;
                heap.push({nd, arc.to});
            }
        }
    }
    return dist;
}

inline double site_distance(const StreetGraph& g, const std::vector<double>& from_source, const SitePoint& source,
                            const SitePoint& target) {
    const auto& e = g.edges[g.edge_id(target.street, target.segment)];
    double d = std::min(from_source[e.u] + target.offset, from_source[e.v] + (e.length - target.offset));
    if (source.street == target.street && source.segment == target.segment)
        d = std::min(d, std::abs(source.offset - target.offset));
    return d;
}

} // namespace detail

/// Shortest street distance between two sites, rounded to integer pixels.
/// Evaluated from the lexicographically smaller site so the result is exactly
/// symmetric.
inline Pixels shortest_travel(const StreetGraph& g, const SitePoint& a, const SitePoint& b) {
    const auto& src = detail::site_less(b, a) ? b : a;
    const auto& dst = detail::site_less(b, a) ? a : b;
    const auto dist = detail::dijkstra_from_site(g, src);
    const double d = detail::site_distance(g, dist, src, dst);
    if (!std::isfinite(d)) throw UnreachableError("unreachable: sites lie in different street components");
    return round_half_up(d);
}

/// Precomputed travel table between the sites of an instance (depots first),
/// plus the delivery surcharge that makes up the cost function w.
class DistanceOracle {
public:
    DistanceOracle() = default;

    DistanceOracle(std::size_t size, std::size_t depot_count, Pixels delivery_cost,
                   std::vector<std::int32_t> travel)
        : size_(size), depot_count_(depot_count), delivery_cost_(delivery_cost), travel_(std::move(travel)) {
        if (travel_.size() != size_ * size_) throw Error("travel table has wrong size");
        if (depot_count_ > size_) throw Error("more depots than sites");
    }

    std::size_t size() const { return size_; }
    std::size_t depot_count() const { return depot_count_; }
    Pixels delivery_cost() const { return delivery_cost_; }
    bool is_delivery(std::size_t site) const { return site >= depot_count_; }

    Pixels travel(std::size_t u, std::size_t v) const { return travel_[u * size_ + v]; }
    std::span<const std::int32_t> row(std::size_t u) const { return {travel_.data() + u * size_, size_}; }
    const std::vector<std::int32_t>& table() const { return travel_; }

    /// w(u, v): travel plus the delivery surcharge when arriving at a delivery.
    Pixels cost(std::size_t u, std::size_t v) const {
        return travel(u, v) + (is_delivery(v) ? delivery_cost_ : 0);
    }

    friend bool operator==(const DistanceOracle&, const DistanceOracle&) = default;

private:
    std::size_t size_ = 0;
    std::size_t depot_count_ = 0;
    Pixels delivery_cost_ = 0;
    std::vector<std::int32_t> travel_;
};

inline Pixels cost_w(const DistanceOracle& oracle, std::size_t u, std::size_t v) { return oracle.cost(u, v); }

/// All-pairs travel between `sites`. Single-source searches are spread over
/// `threads` workers; every pair is written by exactly one search, so the
/// table does not depend on scheduling.
inline DistanceOracle build_oracle(const StreetGraph& g, std::span<const SitePoint> sites, std::size_t depot_count,
                                   Pixels delivery_cost, unsigned threads = 1) {
    const std::size_t n = sites.size();
    if (n > 0) {
        const auto comps = connected_components(g);
        auto comp_of = [&](const SitePoint& s) { return comps.of_vertex[g.edges[g.edge_id(s.street, s.segment)].u]; };
        const auto ref = comp_of(sites[0]);
        std::string offending;
        for (std::size_t i = 1; i < n; ++i)
            if (comp_of(sites[i]) != ref) offending += (offending.empty() ? "" : ", ") + std::to_string(i);
        if (!offending.empty()) throw UnreachableError("disconnected sites: " + offending);
    }

    std::vector<std::int32_t> travel(n * n, 0);
    auto run_source = [&](std::size_t i) {
        const auto dist = detail::dijkstra_from_site(g, sites[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool owner = detail::site_less(sites[i], sites[j]) ||
                               (!detail::site_less(sites[j], sites[i]) && i < j);
            if (!owner) continue;
            const auto d = static_cast<std::int32_t>(round_half_up(detail::site_distance(g, dist, sites[i], sites[j])));
            travel[i * n + j] = d;
            travel[j * n + i] = d;
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) run_source(i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < n; i += threads) run_source(i);
            });
    }
    return DistanceOracle(n, depot_count, delivery_cost, std::move(travel));
}

// ---------------------------------------------------------------------------
// Matrix export: first line N, then N rows of N integers.

inline std::string write_matrix(const DistanceOracle& oracle) {
    std::string out = std::to_string(oracle.size()) + '\n';
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        for (std::size_t j = 0; j < oracle.size(); ++j) {
            if (j) out += ' ';
            out += std::to_string(oracle.travel(i, j));
        }
        out += '\n';
    }
    return out;
}

inline DistanceOracle parse_matrix(std::string_view text, std::size_t depot_count, Pixels delivery_cost) {
    using namespace detail;
    const auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
    if (i == lines.size()) throw ParseError(0, "empty matrix file");
    const auto n = parse_int<std::int64_t>(lines[i]);
    if (!n || *n < 0) throw ParseError(i + 1, "expected matrix size");
    const auto size = static_cast<std::size_t>(*n);
    std::vector<std::int32_t> travel;
    travel.reserve(size * size);
    std::size_t rows = 0;
    for (++i; i < lines.size(); ++i) {
        if (is_comment_or_blank(lines[i])) continue;
        const auto fields = split_ws(lines[i]);
        if (fields.size() != size || rows == size)
            throw ParseError(i + 1, "matrix row must hold " + std::to_string(size) + " integers");
        for (auto f : fields) {
            auto v = parse_int<std::int32_t>(f);
            if (!v || *v < 0) throw ParseError(i + 1, "invalid matrix entry '" + std::string(f) + "'");
            travel.push_back(*v);
        }
        ++rows;
    }
    if (rows != size) throw ParseError(0, "matrix has " + std::to_string(rows) + " rows, expected " + std::to_string(size));
    return DistanceOracle(size, depot_count, delivery_cost, std::move(travel));
}

} // namespace fdvrp
