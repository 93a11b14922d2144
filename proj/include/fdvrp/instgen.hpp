#pragma once

// Benchmark instance generation: density-weighted sampling of sites along the
// streets, with the first `depots` draws becoming the depots.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "fdvrp/detail/text.hpp"
#include "fdvrp/error.hpp"
#include "fdvrp/routing.hpp"
#include "fdvrp/streetmap.hpp"

namespace fdvrp {

struct InstanceSpec {
    std::string name;
    std::int64_t deliveries = 1;
    std::int64_t depots = 1;
    std::int64_t max_vehicles = 1;
    std::uint64_t seed = 0;
    std::optional<Pixels> r_max; ///< overrides the model's MAX_ROUTE when set

    friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct Instance {
    InstanceSpec spec;
    Pixels r_max = 0;
    std::string model_sha256;
    std::vector<SitePoint> sites; ///< depots first, then deliveries

    std::size_t depot_count() const { return static_cast<std::size_t>(spec.depots); }
    std::size_t client_count() const { return static_cast<std::size_t>(spec.deliveries); }

    friend bool operator==(const Instance&, const Instance&) = default;
};

// ---------------------------------------------------------------------------
// instances.txt: `name deliveries depots max_vehicles seed [r_max_px]`

inline std::vector<InstanceSpec> parse_instances(std::string_view text) {
    using namespace detail;
    std::vector<InstanceSpec> specs;
    std::set<std::string, std::less<>> names;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto lineno = i + 1;
        if (is_comment_or_blank(lines[i])) continue;
        const auto f = split_ws(lines[i]);
        if (f.size() != 5 && f.size() != 6)
            throw ParseError(lineno, "expected 'name deliveries depots max_vehicles seed [r_max]'");
        InstanceSpec spec;
        spec.name = std::string(f[0]);
        auto positive = [&](std::string_view field, const char* what) {
            auto v = parse_int<std::int64_t>(field);
            if (!v) throw ParseError(lineno, std::string("malformed ") + what + " '" + std::string(field) + "'");
            if (*v <= 0) throw ParseError(lineno, std::string(what) + " must be positive");
            return *v;
        };
        spec.deliveries = positive(f[1], "deliveries");
        spec.depots = positive(f[2], "depots");
        spec.max_vehicles = positive(f[3], "max_vehicles");
        auto seed = parse_int<std::uint64_t>(f[4]);
        if (!seed) throw ParseError(lineno, "malformed seed '" + std::string(f[4]) + "'");
        spec.seed = *seed;
        if (f.size() == 6) spec.r_max = positive(f[5], "r_max");
        if (!names.insert(spec.name).second) throw ParseError(lineno, "duplicate instance name '" + spec.name + "'");
        specs.push_back(std::move(spec));
    }
    return specs;
}

inline std::string write_instances(const std::vector<InstanceSpec>& specs) {
    std::string out = "# name deliveries depots max_vehicles seed [r_max_px]\n";
    for (const auto& s : specs) {
        out += s.name + ' ' + std::to_string(s.deliveries) + ' ' + std::to_string(s.depots) + ' ' +
               std::to_string(s.max_vehicles) + ' ' + std::to_string(s.seed);
        if (s.r_max) out += ' ' + std::to_string(*s.r_max);
        out += '\n';
    }
    return out;
}

/// The 23-instance FoodDeliveryVRP configuration table; seed = instance id.
inline std::vector<InstanceSpec> food_delivery_suite() {
    struct Row {
        int deliveries, variant, depots, vehicles;
    };
    constexpr std::array<Row, 23> rows{{
        {10, 0, 2, 5},     {10, 1, 3, 5},     {10, 2, 4, 5},     {20, 0, 2, 5},     {20, 1, 3, 5},
        {20, 2, 4, 5},     {50, 0, 4, 5},     {50, 1, 5, 5},     {50, 2, 6, 5},     {100, 0, 5, 10},
        {100, 1, 6, 10},   {100, 2, 7, 10},   {200, 0, 5, 10},   {200, 1, 6, 10},   {200, 2, 7, 10},
        {500, 0, 5, 20},   {500, 1, 6, 20},   {500, 2, 7, 20},   {1000, 0, 5, 40},  {1000, 1, 6, 40},
        {1000, 2, 7, 40},  {2000, 0, 7, 80},  {2000, 1, 7, 80},
    }};
    std::vector<InstanceSpec> specs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        specs.push_back({"FoodDelivery_" + std::to_string(r.deliveries) + "_" + std::to_string(r.variant),
                         r.deliveries, r.depots, r.vehicles, static_cast<std::uint64_t>(i + 1), std::nullopt});
    }
    return specs;
}

// ---------------------------------------------------------------------------
// Sampling

/// Random stream used by the generator: 64-bit Mersenne Twister (bit-exact by
/// the standard) with hand-rolled real conversion, so instances only depend on
/// the seed.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Street selection proportional to street_weight, position uniform in arc length.
class SiteSampler {
public:
    explicit SiteSampler(const MapModel& model) : model_(&model) {
        cumulative_.reserve(model.streets.size());
        segment_ends_.reserve(model.streets.size());
        double total = 0.0;
        for (const auto& s : model.streets) {
            total += street_weight(s, model.penalties);
            cumulative_.push_back(total);
            std::vector<double> ends;
            double along = 0.0;
            for (std::size_t k = 0; k + 1 < s.points.size(); ++k) {
                along += segment_length(s, k);
                ends.push_back(along);
            }
            segment_ends_.push_back(std::move(ends));
        }
        if (!(total > 0.0)) throw Error("all weights zero");
    }

    double total_weight() const { return cumulative_.back(); }

    std::size_t pick_street(Rng& rng) const {
        const double x = uniform01(rng) * total_weight();
        auto idx = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), x) -
                                            cumulative_.begin());
        if (idx == cumulative_.size()) {
            // x rounded up to the total: take the last street with positive weight
            idx = cumulative_.size() - 1;
            while (idx > 0 && cumulative_[idx] == cumulative_[idx - 1]) --idx;
        }
        return idx;
    }

    SitePoint sample(Rng& rng) const {
        const auto street = pick_street(rng);
        const auto& ends = segment_ends_[street];
        const double along = uniform01(rng) * ends.back();
        auto seg = static_cast<std::size_t>(std::upper_bound(ends.begin(), ends.end(), along) - ends.begin());
        seg = std::min(seg, ends.size() - 1);
        const double start = seg == 0 ? 0.0 : ends[seg - 1];
        const double len = segment_length(model_->streets[street], seg);
        const double offset = std::clamp(along - start, 0.0, len);
        return {static_cast<std::int32_t>(street), static_cast<std::int32_t>(seg), offset,
                interpolate(model_->streets[street], seg, offset)};
    }

private:
    const MapModel* model_;
    std::vector<double> cumulative_;
    std::vector<std::vector<double>> segment_ends_;
};

inline SitePoint sample_site(const MapModel& model, Rng& rng) { return SiteSampler(model).sample(rng); }

// ---------------------------------------------------------------------------
// Generation

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

inline std::string model_checksum(const MapModel& model) { return sha256_hex(serialize_model(model)); }

/// Redraws allowed for a site that lands outside the main street component.
inline constexpr int max_site_redraws = 1000;

inline Instance generate(const MapModel& model, const StreetGraph& graph, InstanceSpec spec) {
    if (spec.deliveries < 1 || spec.depots < 1 || spec.max_vehicles < 1)
        throw Error("instance '" + spec.name + "' needs positive deliveries, depots and max_vehicles");
    if (spec.r_max && *spec.r_max == model.max_route) spec.r_max.reset();

    const SiteSampler sampler(model);

    // Sites must share one component; use the one carrying the most sampling mass.
    const auto comps = connected_components(graph);
    std::vector<double> mass(static_cast<std::size_t>(comps.count), 0.0);
    for (std::size_t s = 0; s < model.streets.size(); ++s)
        mass[comps.of_vertex[graph.edges[graph.first_edge[s]].u]] += street_weight(model.streets[s], model.penalties);
    const auto main_comp =
        static_cast<std::int32_t>(std::max_element(mass.begin(), mass.end()) - mass.begin());

    Instance inst;
    inst.spec = spec;
    inst.r_max = spec.r_max.value_or(model.max_route);
    inst.model_sha256 = model_checksum(model);
    Rng rng(spec.seed);
    const auto total = static_cast<std::size_t>(spec.depots + spec.deliveries);
    inst.sites.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        int attempt = 0;
        while (true) {
            auto site = sampler.sample(rng);
            if (comps.of_vertex[graph.edges[graph.edge_id(site.street, site.segment)].u] == main_comp) {
                inst.sites.push_back(site);
                break;
            }
            if (++attempt > max_site_redraws)
                throw Error("disconnected site: gave up after " + std::to_string(max_site_redraws) + " redraws");
        }
    }
    return inst;
}

inline Instance generate(const MapModel& model, const InstanceSpec& spec) {
    return generate(model, build_graph(model), spec);
}

inline DistanceOracle build_oracle(const StreetGraph& graph, const Instance& inst, const MapModel& model,
                                   unsigned threads = 1) {
    return build_oracle(graph, inst.sites, inst.depot_count(), model.delivery_cost, threads);
}

// ---------------------------------------------------------------------------
// Instance files

inline std::string write_instance(const Instance& inst) {
    using detail::format_real;
    std::string out;
    out += "NAME " + inst.spec.name + '\n';
    out += "DELIVERIES " + std::to_string(inst.spec.deliveries) + '\n';
    out += "DEPOTS " + std::to_string(inst.spec.depots) + '\n';
    out += "MAX_VEHICLES " + std::to_string(inst.spec.max_vehicles) + '\n';
    out += "R_MAX " + std::to_string(inst.r_max) + '\n';
    out += "SEED " + std::to_string(inst.spec.seed) + '\n';
    out += "MODEL_SHA256 " + inst.model_sha256 + '\n';
    for (std::size_t i = 0; i < inst.sites.size(); ++i) {
        const auto& s = inst.sites[i];
        out += (i < inst.depot_count() ? "D " : "C ") + std::to_string(s.street) + ' ' + std::to_string(s.segment) +
               ' ' + format_real(s.offset) + ' ' + format_real(s.coord.x) + ' ' + format_real(s.coord.y) + '\n';
    }
    return out;
}

inline Instance parse_instance(std::string_view text, const MapModel& model) {
    using namespace detail;
    Instance inst;
    const auto lines = split_lines(text);
    std::set<std::string, std::less<>> seen;
    constexpr std::array<std::string_view, 7> header_keys{"NAME", "DELIVERIES", "DEPOTS", "MAX_VEHICLES",
                                                          "R_MAX", "SEED", "MODEL_SHA256"};
    std::size_t i = 0;
    for (; i < lines.size() && seen.size() < header_keys.size(); ++i) {
        const auto lineno = i + 1;
        if (is_comment_or_blank(lines[i])) continue;
        const auto f = split_ws(lines[i]);
        if (f.size() != 2) throw ParseError(lineno, "expected '<KEY> <value>' header line");
        const auto key = f[0];
        if (std::find(header_keys.begin(), header_keys.end(), key) == header_keys.end())
            throw ParseError(lineno, "unknown header key '" + std::string(key) + "'");
        if (!seen.insert(std::string(key)).second)
            throw ParseError(lineno, "duplicate header key " + std::string(key));
        auto positive = [&] {
            auto v = parse_int<std::int64_t>(f[1]);
            if (!v || *v <= 0) throw ParseError(lineno, "invalid value for " + std::string(key));
            return *v;
        };
        if (key == "NAME") inst.spec.name = std::string(f[1]);
        else if (key == "DELIVERIES") inst.spec.deliveries = positive();
        else if (key == "DEPOTS") inst.spec.depots = positive();
        else if (key == "MAX_VEHICLES") inst.spec.max_vehicles = positive();
        else if (key == "R_MAX") inst.r_max = positive();
        else if (key == "SEED") {
            auto v = parse_int<std::uint64_t>(f[1]);
            if (!v) throw ParseError(lineno, "invalid value for SEED");
            inst.spec.seed = *v;
        } else {
            inst.model_sha256 = std::string(f[1]);
        }
    }
    if (seen.size() < header_keys.size()) throw ParseError(0, "incomplete instance header");
    if (inst.model_sha256 != model_checksum(model))
        throw Error("instance '" + inst.spec.name + "' was generated from a different model (checksum mismatch)");
    if (inst.r_max != model.max_route) inst.spec.r_max = inst.r_max;

    const auto total = static_cast<std::size_t>(inst.spec.depots + inst.spec.deliveries);
    for (; i < lines.size(); ++i) {
        const auto lineno = i + 1;
        if (is_comment_or_blank(lines[i])) continue;
        const auto f = split_ws(lines[i]);
        if (f.size() != 6 || (f[0] != "D" && f[0] != "C"))
            throw ParseError(lineno, "expected 'D|C street segment offset x y'");
        const bool depot = f[0] == "D";
        if (depot != (inst.sites.size() < inst.depot_count()))
            throw ParseError(lineno, depot ? "depot listed after deliveries" : "too few depot lines");
        const auto street = parse_int<std::int64_t>(f[1]);
        const auto segment = parse_int<std::int64_t>(f[2]);
        const auto offset = parse_real(f[3]);
        const auto x = parse_real(f[4]);
        const auto y = parse_real(f[5]);
        if (!street || !segment || !offset || !x || !y || *street < 0 || *segment < 0)
            throw ParseError(lineno, "malformed site record");
        if (static_cast<std::size_t>(*street) >= model.streets.size())
            throw ParseError(lineno, "site on street " + std::to_string(*street) + " but the model has " +
                                         std::to_string(model.streets.size()) + " streets");
        SitePoint site;
        try {
            site = make_site(model, static_cast<std::size_t>(*street), static_cast<std::size_t>(*segment), *offset);
        } catch (const Error& e) {
            throw ParseError(lineno, e.what());
        }
        if (std::abs(site.coord.x - *x) > 1e-6 || std::abs(site.coord.y - *y) > 1e-6)
            throw ParseError(lineno, "site coordinate does not match its street position");
        inst.sites.push_back(site);
    }
    if (inst.sites.size() != total)
        throw ParseError(0, "instance lists " + std::to_string(inst.sites.size()) + " sites, expected " +
                                std::to_string(total));
    return inst;
}

} // namespace fdvrp
