#pragma once

// SVG drawing of a street map, optionally with an instance's sites and a
// solution's routes. One map pixel is one SVG user unit.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fdvrp/core.hpp"
#include "fdvrp/detail/text.hpp"
#include "fdvrp/instgen.hpp"
#include "fdvrp/streetmap.hpp"

namespace fdvrp {

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Evenly spread hues so neighbouring route indices look different.
inline std::string route_colour(std::size_t index) {
    const auto hue = static_cast<int>((index * 137) % 360);
    return "hsl(" + std::to_string(hue) + ",70%,40%)";
}

inline std::string street_colour(StreetType t) {
    switch (t) {
    case StreetType::avenue: return "#555";
    case StreetType::street: return "#888";
    case StreetType::alley: return "#bbb";
    case StreetType::highway: return "#a33";
    }
    return "#888";
}

inline std::string num(double v) { return format_real(v); }

} // namespace detail

struct RenderInput {
    const MapModel* model = nullptr;
    const Instance* instance = nullptr;          ///< optional
    const SolutionSequence* solution = nullptr;  ///< optional, needs instance
};

inline std::string render_svg(const RenderInput& in) {
    using namespace detail;
    if (!in.model) throw Error("render needs a model");
    if (in.solution && !in.instance) throw Error("rendering a solution needs its instance");
    const auto& model = *in.model;

    std::int64_t width = 1, height = 1;
    for (const auto& s : model.streets)
        for (auto p : s.points) {
            width = std::max<std::int64_t>(width, p.x);
            height = std::max<std::int64_t>(height, p.y);
        }
    width += 50;
    height += 50;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + ' ' + std::to_string(height) + "\">\n";
    if (model.background)
        out += "<image class=\"background\" x=\"0\" y=\"0\" xlink:href=\"" + xml_escape(*model.background) + "\"/>\n";

    out += "<g id=\"streets\" fill=\"none\" stroke-width=\"4\" stroke-dasharray=\"12 8\">\n";
    for (const auto& s : model.streets) {
        out += "<path class=\"street\" stroke=\"" + street_colour(s.type) + "\" d=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i)
            out += (i ? " L" : "M") + std::to_string(s.points[i].x) + ' ' + std::to_string(s.points[i].y);
        out += "\"><title>" + xml_escape(s.name) + "</title></path>\n";
    }
    out += "</g>\n";

    if (in.solution) {
        const auto& inst = *in.instance;
        const auto nd = inst.depot_count();
        const auto routes = particao(*in.solution);
        out += "<g id=\"routes\" fill=\"none\" stroke-width=\"6\" stroke-linejoin=\"round\">\n";
        for (std::size_t r = 0; r < routes.size(); ++r) {
            const auto& route = routes[r];
            std::vector<std::size_t> stops{depot_site(route.depot)};
            for (auto c : route.clients) stops.push_back(client_site(c, nd));
            stops.push_back(depot_site(route.depot));
            out += "<polyline class=\"route\" stroke=\"" + route_colour(r) + "\" points=\"";
            for (std::size_t k = 0; k < stops.size(); ++k) {
                if (stops[k] >= inst.sites.size()) throw Error("solution refers to a site the instance lacks");
                const auto& p = inst.sites[stops[k]].coord;
                out += (k ? " " : "") + num(p.x) + ',' + num(p.y);
            }
            out += "\"/>\n";
        }
        out += "</g>\n";
    }

    if (in.instance) {
        const auto& inst = *in.instance;
        out += "<g id=\"sites\">\n";
        for (std::size_t i = 0; i < inst.sites.size(); ++i) {
            const auto& p = inst.sites[i].coord;
            if (i < inst.depot_count())
                out += "<rect class=\"depot\" x=\"" + num(p.x - 14) + "\" y=\"" + num(p.y - 14) +
                       "\" width=\"28\" height=\"28\" fill=\"#d40\" stroke=\"#000\" stroke-width=\"3\"/>\n";
            else
                out += "<circle class=\"client\" cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) +
                       "\" r=\"8\" fill=\"#06c\"/>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace fdvrp
