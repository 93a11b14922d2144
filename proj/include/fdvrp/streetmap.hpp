#pragma once

// City map as attributed polygonal chains, and the undirected street graph
// derived from it.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fdvrp/detail/text.hpp"
#include "fdvrp/error.hpp"

namespace fdvrp {

/// Integer map position in pixels.
struct Coord {
    std::int32_t x = 0;
    std::int32_t y = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Real-valued position, used for sites that fall between chain points.
struct PointD {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PointD&, const PointD&) = default;
};

inline double distance(Coord a, Coord b) {
    return std::hypot(static_cast<double>(b.x) - a.x, static_cast<double>(b.y) - a.y);
}

enum class Region : std::uint8_t { central, peripheral, distant, isolated };
enum class StreetType : std::uint8_t { avenue, street, alley, highway };
enum class Zone : std::uint8_t { commercial, mixed, residential };

inline constexpr std::array<Region, 4> all_regions{Region::central, Region::peripheral, Region::distant,
                                                   Region::isolated};
inline constexpr std::array<StreetType, 4> all_street_types{StreetType::avenue, StreetType::street,
                                                            StreetType::alley, StreetType::highway};
inline constexpr std::array<Zone, 3> all_zones{Zone::commercial, Zone::mixed, Zone::residential};

struct StreetChain {
    std::string name;
    Region region = Region::central;
    StreetType type = StreetType::street;
    Zone zone = Zone::residential;
    /// Spelled LARGEAVENUE in the source file. Only meaningful for avenues; the
    /// sampling law treats it exactly like AVENUE.
    bool large_avenue = false;
    std::vector<Coord> points;

    friend bool operator==(const StreetChain&, const StreetChain&) = default;
};

/// Density multipliers per attribute level.
struct PenaltyTable {
    std::array<double, 4> region{1.0, 0.75, 0.4, 0.2};
    std::array<double, 4> type{1.0, 0.75, 0.4, 0.0};
    std::array<double, 3> zone{1.0, 0.75, 0.4};

    double of(Region r) const { return region[static_cast<std::size_t>(r)]; }
    double of(StreetType t) const { return type[static_cast<std::size_t>(t)]; }
    double of(Zone z) const { return zone[static_cast<std::size_t>(z)]; }

    friend bool operator==(const PenaltyTable&, const PenaltyTable&) = default;
};

struct MapModel {
    double pixel_value = 0.137;       ///< seconds per pixel
    std::int64_t delivery_cost = 2190; ///< pixels charged on arrival at a delivery
    std::int64_t max_route = 13138;    ///< R_max, pixels
    std::optional<std::string> background;
    PenaltyTable penalties;
    std::vector<StreetChain> streets;

    friend bool operator==(const MapModel&, const MapModel&) = default;
};

// ---------------------------------------------------------------------------
// Attribute tokens

inline std::string_view token(Region r) {
    constexpr std::array<std::string_view, 4> names{"CENTRAL", "PERIPHERAL", "DISTANT", "ISOLATED"};
    return names[static_cast<std::size_t>(r)];
}

inline std::string_view token(StreetType t) {
    constexpr std::array<std::string_view, 4> names{"AVENUE", "STREET", "ALLEY", "HIGHWAY"};
    return names[static_cast<std::size_t>(t)];
}

inline std::string_view token(Zone z) {
    constexpr std::array<std::string_view, 3> names{"COMMERCIAL", "MIXED", "RESIDENTIAL"};
    return names[static_cast<std::size_t>(z)];
}

namespace detail {

// Keys are upper-cased ASCII; accented letters are matched in both cases.
inline std::optional<Region> region_from(std::string_view tok) {
    static const std::map<std::string, Region, std::less<>> aliases{
        {"CENTRAL", Region::central},       {"PERIPHERAL", Region::peripheral},
        {"PERIFERICO", Region::peripheral}, {"PERIF\xC3\xA9RICO", Region::peripheral},
        {"PERIF\xC3\x89RICO", Region::peripheral}, {"DISTANT", Region::distant},
        {"DISTANTE", Region::distant},      {"ISOLATED", Region::isolated},
        {"ISOLADO", Region::isolated},
    };
    auto it = aliases.find(upper(trim(tok)));
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

/// Second member is true for the LARGEAVENUE spelling.
inline std::optional<std::pair<StreetType, bool>> street_type_from(std::string_view tok) {
    static const std::map<std::string, std::pair<StreetType, bool>, std::less<>> aliases{
        {"LARGEAVENUE", {StreetType::avenue, true}}, {"AVENUE", {StreetType::avenue, false}},
        {"AVENIDA", {StreetType::avenue, false}},    {"STREET", {StreetType::street, false}},
        {"RUA", {StreetType::street, false}},        {"ALLEY", {StreetType::alley, false}},
        {"ALAMEDA", {StreetType::alley, false}},     {"HIGHWAY", {StreetType::highway, false}},
        {"RODOVIA", {StreetType::highway, false}},
    };
    auto it = aliases.find(upper(trim(tok)));
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

inline std::optional<Zone> zone_from(std::string_view tok) {
    static const std::map<std::string, Zone, std::less<>> aliases{
        {"COMMERCIAL", Zone::commercial}, {"COMERCIAL", Zone::commercial},
        {"MIXED", Zone::mixed},           {"MISTO", Zone::mixed},
        {"RESIDENTIAL", Zone::residential}, {"RESIDENCIAL", Zone::residential},
    };
    auto it = aliases.find(upper(trim(tok)));
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

inline std::vector<Coord> parse_chain_points(std::string_view line, std::size_t lineno) {
    std::vector<Coord> points;
    std::size_t pos = 0;
    line = trim(line);
    while (pos <= line.size()) {
        auto dash = line.find('-', pos);
        if (dash == std::string_view::npos) dash = line.size();
        auto item = trim(line.substr(pos, dash - pos));
        if (item.size() < 5 || item.front() != '[' || item.back() != ']')
            throw ParseError(lineno, "malformed coordinate '" + std::string(item) + "'");
        item = item.substr(1, item.size() - 2);
        auto comma = item.find(',');
        if (comma == std::string_view::npos)
            throw ParseError(lineno, "malformed coordinate '[" + std::string(item) + "]'");
        auto x = parse_int<std::int32_t>(item.substr(0, comma));
        auto y = parse_int<std::int32_t>(item.substr(comma + 1));
        if (!x || !y)
            throw ParseError(lineno, "non-integer coordinate '[" + std::string(item) + "]'");
        if (*x < 0 || *y < 0)
            throw ParseError(lineno, "negative coordinate '[" + std::string(item) + "]'");
        points.push_back({*x, *y});
        pos = dash + 1;
    }
    if (points.size() < 2) throw ParseError(lineno, "street chain needs at least 2 points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i] == points[i - 1])
            throw ParseError(lineno, "repeated consecutive point in street chain");
    return points;
}

} // namespace detail

// ---------------------------------------------------------------------------
// model.txt

inline MapModel parse_model(std::string_view text) {
    using namespace detail;
    MapModel model;
    bool have_pixel = false, have_delivery = false, have_route = false;
    std::optional<std::size_t> declared;
    std::size_t declared_line = 0;

    const auto lines = split_lines(text);
    std::size_t i = 0;
    for (; i < lines.size() && !declared; ++i) {
        const auto lineno = i + 1;
        if (is_comment_or_blank(lines[i])) continue;
        auto line = trim(lines[i]);
        auto sp = line.find_first_of(" \t");
        auto key = line.substr(0, sp);
        auto value = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
        auto bad_value = [&] { return ParseError(lineno, "invalid value for " + std::string(key)); };
        auto once = [&](bool& seen) {
            if (seen) throw ParseError(lineno, "duplicate header key " + std::string(key));
            seen = true;
        };
        if (key == "PIXEL_VALUE") {
            once(have_pixel);
            auto v = parse_real(value);
            if (!v || !(*v > 0.0) || !std::isfinite(*v)) throw bad_value();
            model.pixel_value = *v;
        } else if (key == "DELIVERY_COST") {
            once(have_delivery);
            auto v = parse_int<std::int64_t>(value);
            if (!v || *v < 0) throw bad_value();
            model.delivery_cost = *v;
        } else if (key == "MAX_ROUTE") {
            once(have_route);
            auto v = parse_int<std::int64_t>(value);
            if (!v || *v <= 0) throw bad_value();
            model.max_route = *v;
        } else if (key == "BACKGROUND") {
            if (model.background) throw ParseError(lineno, "duplicate header key BACKGROUND");
            if (value.empty()) throw bad_value();
            model.background = std::string(value);
        } else if (key == "STREETS") {
            auto v = parse_int<std::int64_t>(value);
            if (!v || *v < 0) throw bad_value();
            declared = static_cast<std::size_t>(*v);
            declared_line = lineno;
        } else {
            throw ParseError(lineno, "malformed header key '" + std::string(key) + "'");
        }
    }
    if (!declared) throw ParseError(0, "missing STREETS header");
    if (!have_pixel) throw ParseError(0, "missing PIXEL_VALUE header");
    if (!have_delivery) throw ParseError(0, "missing DELIVERY_COST header");
    if (!have_route) throw ParseError(0, "missing MAX_ROUTE header");

    std::optional<StreetChain> pending;
    for (; i < lines.size(); ++i) {
        const auto lineno = i + 1;
        if (is_comment_or_blank(lines[i])) continue;
        auto line = trim(lines[i]);
        if (!pending) {
            auto open = line.rfind('[');
            if (open == std::string_view::npos || line.back() != ']')
                throw ParseError(lineno, "expected '<NAME> [<REGION>,<TYPE>,<ZONE>]'");
            StreetChain chain;
            chain.name = std::string(trim(line.substr(0, open)));
            if (chain.name.empty()) throw ParseError(lineno, "street without a name");
            auto attrs = line.substr(open + 1, line.size() - open - 2);
            std::vector<std::string_view> parts;
            std::size_t p = 0;
            while (true) {
                auto c = attrs.find(',', p);
                parts.push_back(attrs.substr(p, c == std::string_view::npos ? std::string_view::npos : c - p));
                if (c == std::string_view::npos) break;
                p = c + 1;
            }
            if (parts.size() != 3) throw ParseError(lineno, "expected three street attributes");
            auto region = region_from(parts[0]);
            auto type = street_type_from(parts[1]);
            auto zone = zone_from(parts[2]);
            if (!region) throw ParseError(lineno, "unknown region '" + std::string(trim(parts[0])) + "'");
            if (!type) throw ParseError(lineno, "unknown street type '" + std::string(trim(parts[1])) + "'");
            if (!zone) throw ParseError(lineno, "unknown zone '" + std::string(trim(parts[2])) + "'");
            chain.region = *region;
            chain.type = type->first;
            chain.large_avenue = type->second;
            chain.zone = *zone;
            pending = std::move(chain);
        } else {
            pending->points = parse_chain_points(line, lineno);
            model.streets.push_back(std::move(*pending));
            pending.reset();
        }
    }
    if (pending) throw ParseError(lines.size(), "street '" + pending->name + "' has no coordinate line");
    if (model.streets.empty()) throw ParseError(declared_line, "no streets");
    if (model.streets.size() != *declared)
        throw ParseError(declared_line, "STREETS declares " + std::to_string(*declared) + " but " +
                                            std::to_string(model.streets.size()) + " were found");
    return model;
}

inline std::string serialize_street(const StreetChain& s) {
    std::string out = s.name;
    out += " [";
    out += token(s.region);
    out += ',';
    out += (s.type == StreetType::avenue && s.large_avenue) ? std::string_view("LARGEAVENUE") : token(s.type);
    out += ',';
    out += token(s.zone);
    out += "]\n";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) out += '-';
        out += '[' + std::to_string(s.points[i].x) + ',' + std::to_string(s.points[i].y) + ']';
    }
    out += '\n';
    return out;
}

inline std::string serialize_model(const MapModel& model) {
    std::string out;
    out += "PIXEL_VALUE " + detail::format_real(model.pixel_value) + '\n';
    out += "DELIVERY_COST " + std::to_string(model.delivery_cost) + '\n';
    out += "MAX_ROUTE " + std::to_string(model.max_route) + '\n';
    if (model.background) out += "BACKGROUND " + *model.background + '\n';
    out += "STREETS " + std::to_string(model.streets.size()) + '\n';
    for (const auto& s : model.streets) out += serialize_street(s);
    return out;
}

// ---------------------------------------------------------------------------
// Geometry and sampling mass

inline double segment_length(const StreetChain& chain, std::size_t segment) {
    return distance(chain.points[segment], chain.points[segment + 1]);
}

inline double chain_length(const StreetChain& chain) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) total += segment_length(chain, i);
    return total;
}

/// Unnormalized probability mass of receiving a delivery: length times the
/// three attribute penalties.
inline double street_weight(const StreetChain& chain, const PenaltyTable& penalties) {
    return chain_length(chain) * penalties.of(chain.region) * penalties.of(chain.type) * penalties.of(chain.zone);
}

inline double px_to_seconds(double px, const MapModel& model) { return px * model.pixel_value; }

// ---------------------------------------------------------------------------
// Street graph

struct GraphEdge {
    std::int32_t u = 0;
    std::int32_t v = 0;
    double length = 0.0;
};

struct EdgeOrigin {
    std::int32_t street = 0;
    std::int32_t segment = 0;

    friend bool operator==(const EdgeOrigin&, const EdgeOrigin&) = default;
};

/// Undirected graph with one vertex per distinct chain coordinate and one edge
/// per chain segment. Edges of street s occupy ids first_edge[s] .. first_edge[s+1]-1
/// in segment order.
struct StreetGraph {
    struct Arc {
        std::int32_t to;
        std::int32_t edge;
    };

    std::vector<Coord> vertices;
    std::vector<GraphEdge> edges;
    std::vector<EdgeOrigin> street_of_edge;
    std::vector<std::int32_t> first_edge;
    std::vector<std::int32_t> arc_begin; ///< CSR offsets, size vertices+1
    std::vector<Arc> arcs;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }

    std::int32_t edge_id(std::size_t street, std::size_t segment) const {
        return first_edge[street] + static_cast<std::int32_t>(segment);
    }

    std::size_t degree(std::int32_t v) const {
        return static_cast<std::size_t>(arc_begin[v + 1] - arc_begin[v]);
    }
};

inline StreetGraph build_graph(const MapModel& model) {
    StreetGraph g;
    std::map<Coord, std::int32_t> index;
    auto vertex_of = [&](Coord c) {
        auto [it, inserted] = index.try_emplace(c, static_cast<std::int32_t>(g.vertices.size()));
        if (inserted) g.vertices.push_back(c);
        return it->second;
    };
    g.first_edge.reserve(model.streets.size() + 1);
    for (std::size_t s = 0; s < model.streets.size(); ++s) {
        const auto& chain = model.streets[s];
        g.first_edge.push_back(static_cast<std::int32_t>(g.edges.size()));
        for (std::size_t k = 0; k + 1 < chain.points.size(); ++k) {
            auto u = vertex_of(chain.points[k]);
            auto v = vertex_of(chain.points[k + 1]);
            g.edges.push_back({u, v, segment_length(chain, k)});
            g.street_of_edge.push_back({static_cast<std::int32_t>(s), static_cast<std::int32_t>(k)});
        }
    }
    g.first_edge.push_back(static_cast<std::int32_t>(g.edges.size()));

    g.arc_begin.assign(g.vertices.size() + 1, 0);
    for (const auto& e : g.edges) {
        ++g.arc_begin[e.u + 1];
        ++g.arc_begin[e.v + 1];
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) g.arc_begin[v + 1] += g.arc_begin[v];
    g.arcs.resize(g.arc_begin.back());
    auto fill = g.arc_begin;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& edge = g.edges[e];
        g.arcs[fill[edge.u]++] = {edge.v, static_cast<std::int32_t>(e)};
        g.arcs[fill[edge.v]++] = {edge.u, static_cast<std::int32_t>(e)};
    }
    return g;
}

struct Components {
    std::vector<std::int32_t> of_vertex;
    std::int32_t count = 0;
};

inline Components connected_components(const StreetGraph& g) {
    Components c;
    c.of_vertex.assign(g.vertex_count(), -1);
    std::vector<std::int32_t> stack;
    for (std::size_t start = 0; start < g.vertex_count(); ++start) {
        if (c.of_vertex[start] >= 0) continue;
        c.of_vertex[start] = c.count;
        stack.push_back(static_cast<std::int32_t>(start));
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto a = g.arc_begin[v]; a < g.arc_begin[v + 1]; ++a) {
                auto w = g.arcs[a].to;
                if (c.of_vertex[w] < 0) {
                    c.of_vertex[w] = c.count;
                    stack.push_back(w);
                }
            }
        }
        ++c.count;
    }
    return c;
}

} // namespace fdvrp
