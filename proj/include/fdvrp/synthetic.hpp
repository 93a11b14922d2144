#pragma once

// Deterministic synthetic street maps: a jittered city grid for benchmarks and a
// small attribute-enumerating grid used as a test fixture.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fdvrp/instgen.hpp"
#include "fdvrp/streetmap.hpp"

namespace fdvrp {

struct CityOptions {
    int lines = 18;          ///< junction rows and columns
    int spacing = 400;       ///< pixels between neighbouring junctions
    int jitter = 90;         ///< max junction displacement
    int margin = 300;        ///< offset of the first junction from the origin
    std::uint64_t seed = 2021;
};

namespace detail {

inline std::int32_t jitter_of(Rng& rng, int amount) {
    return static_cast<std::int32_t>(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * amount + 1)) -
                                     amount);
}

} // namespace detail

/// A grid city of about 200 streets. Streets run along grid lines in chains of
/// 2-4 blocks with occasional mid-block bends; attributes fall off with the
/// distance to the centre, and a highway runs along the southern edge.
inline MapModel make_synthetic_city(const CityOptions& opt = {}) {
    Rng rng(opt.seed);
    const int n = opt.lines;
    std::vector<Coord> junction(static_cast<std::size_t>(n * n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            junction[static_cast<std::size_t>(r * n + c)] = {
                opt.margin + c * opt.spacing + detail::jitter_of(rng, opt.jitter),
                opt.margin + r * opt.spacing + detail::jitter_of(rng, opt.jitter)};
    auto at = [&](int r, int c) { return junction[static_cast<std::size_t>(r * n + c)]; };

    const double centre = opt.margin + (n - 1) * opt.spacing / 2.0;
    const double half = (n - 1) * opt.spacing / 2.0;

    MapModel model;
    int counter = 0;
    auto classify = [&](StreetChain& s, bool main_axis) {
        double sx = 0, sy = 0;
        for (auto p : s.points) {
            sx += p.x;
            sy += p.y;
        }
        const double k = static_cast<double>(s.points.size());
        const double rel = std::hypot(sx / k - centre, sy / k - centre) / half;
        s.region = rel < 0.35 ? Region::central : rel < 0.7 ? Region::peripheral : rel < 1.0 ? Region::distant
                                                                                              : Region::isolated;
        s.zone = rel < 0.3 ? Zone::commercial : rel < 0.65 ? Zone::mixed : Zone::residential;
        const auto roll = rng() % 10;
        s.type = main_axis ? StreetType::avenue : roll < 7 ? StreetType::street : StreetType::alley;
    };

    auto add_line = [&](bool horizontal, int line) {
        const bool main_axis = line % 6 == 2;
        int pos = 0;
        while (pos < n - 1) {
            int blocks = 2 + static_cast<int>(rng() % 3);
            if (pos + blocks > n - 1) blocks = n - 1 - pos;
            StreetChain s;
            s.name = std::string(main_axis ? "AV. " : "RUA ") + (horizontal ? "H" : "V") + std::to_string(line) + "-" +
                     std::to_string(++counter);
            for (int b = 0; b <= blocks; ++b) {
                const auto p = horizontal ? at(line, pos + b) : at(pos + b, line);
                if (b > 0 && rng() % 3 == 0) {
                    // mid-block bend
                    const auto q = s.points.back();
                    Coord mid{(p.x + q.x) / 2 + detail::jitter_of(rng, opt.jitter / 2),
                              (p.y + q.y) / 2 + detail::jitter_of(rng, opt.jitter / 2)};
                    if (mid != p && mid != q) s.points.push_back(mid);
                }
                s.points.push_back(p);
            }
            classify(s, main_axis);
            model.streets.push_back(std::move(s));
            pos += blocks;
        }
    };
    for (int line = 0; line < n; ++line) add_line(true, line);
    for (int line = 0; line < n; ++line) add_line(false, line);

    // Highway hugging the southern edge, joined to the grid at both corners.
    StreetChain highway;
    highway.name = "RODOVIA SP-" + std::to_string(100 + opt.seed % 400);
    highway.type = StreetType::highway;
    highway.region = Region::isolated;
    highway.zone = Zone::residential;
    highway.points.push_back(at(n - 1, 0));
    const std::int32_t south = at(n - 1, 0).y + opt.spacing;
    for (int c = 0; c < n; c += 4) highway.points.push_back({at(n - 1, c).x, south + detail::jitter_of(rng, opt.jitter)});
    highway.points.push_back(at(n - 1, n - 1));
    model.streets.push_back(std::move(highway));
    return model;
}

/// 48 streets on a 12x12-line grid (every crossing is a shared point) covering every
/// (region, type, zone) combination exactly once.
inline MapModel make_attribute_grid() {
    MapModel model;
    constexpr int lines = 12;
    constexpr int spacing = 100;
    std::size_t combo = 0;
    auto next_attrs = [&](StreetChain& s) {
        s.region = all_regions[combo / 12];
        s.type = all_street_types[(combo / 3) % 4];
        s.zone = all_zones[combo % 3];
        ++combo;
    };
    for (int horizontal = 1; horizontal >= 0; --horizontal) {
        for (int line = 0; line < lines; ++line) {
            // each grid line is two chains: columns 0..5 and 5..11
            for (int half = 0; half < 2; ++half) {
                StreetChain s;
                s.name = std::string(horizontal ? "ROW " : "COL ") + std::to_string(line) + (half ? "B" : "A");
                const int from = half ? 5 : 0;
                const int to = half ? lines - 1 : 5;
                for (int p = from; p <= to; ++p) {
                    const Coord c = horizontal ? Coord{p * spacing, line * spacing} : Coord{line * spacing, p * spacing};
                    s.points.push_back(c);
                }
                next_attrs(s);
                model.streets.push_back(std::move(s));
            }
        }
    }
    return model;
}

} // namespace fdvrp
