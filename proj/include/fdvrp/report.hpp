#pragma once

// Result tables (per-algorithm benchmark rows) and evaluation reports, as
// aligned text and as CSV with a header row and dot decimals.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fdvrp/core.hpp"
#include "fdvrp/detail/text.hpp"
#include "fdvrp/error.hpp"

namespace fdvrp {

struct BenchRow {
    std::string instance;
    std::string algorithm;
    double f1_hours = 0.0; ///< already rounded to 2 decimals
    double mean_time_ms = 0.0;
    double stddev_time_ms = 0.0;
    std::int64_t f2 = 0;
    double f3 = 0.0;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline double round_hours(double hours) { return std::round(hours * 100.0) / 100.0; }

struct TimingStats {
    double mean = 0.0;
    double stddev = 0.0; ///< population (divisor = number of runs)
};

inline TimingStats timing_stats(const std::vector<double>& samples) {
    if (samples.empty()) throw Error("timing statistics need at least one run");
    TimingStats s;
    for (double v : samples) s.mean += v;
    s.mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double v : samples) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(samples.size()));
    return s;
}

namespace detail {

inline std::string fixed2(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, ptr);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto end = line.find(',', start);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

inline std::string pad(std::string s, std::size_t width, bool left = false) {
    if (s.size() >= width) return s;
    return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

} // namespace detail

inline constexpr std::string_view bench_csv_header = "instance,algorithm,f1_hours,mean_time_ms,stddev_time_ms,f2,f3";

inline std::string write_bench_csv(const std::vector<BenchRow>& rows) {
    using namespace detail;
    std::string out(bench_csv_header);
    out += '\n';
    for (const auto& r : rows) {
        if (r.instance.find(',') != std::string::npos || r.algorithm.find(',') != std::string::npos)
            throw Error("CSV fields must not contain commas");
        out += r.instance + ',' + r.algorithm + ',' + fixed2(r.f1_hours) + ',' + format_real(r.mean_time_ms) + ',' +
               format_real(r.stddev_time_ms) + ',' + std::to_string(r.f2) + ',' + format_real(r.f3) + '\n';
    }
    return out;
}

inline std::vector<BenchRow> parse_bench_csv(std::string_view text) {
    using namespace detail;
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != bench_csv_header) throw ParseError(1, "missing benchmark CSV header");
    std::vector<BenchRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split_csv(lines[i]);
        if (f.size() != 7) throw ParseError(i + 1, "expected 7 comma-separated fields");
        BenchRow r;
        r.instance = std::string(f[0]);
        r.algorithm = std::string(f[1]);
        const auto h = parse_real(f[2]);
        const auto mean = parse_real(f[3]);
        const auto sd = parse_real(f[4]);
        const auto f2 = parse_int<std::int64_t>(f[5]);
        const auto f3 = parse_real(f[6]);
        if (!h || !mean || !sd || !f2 || !f3) throw ParseError(i + 1, "malformed benchmark row");
        r.f1_hours = *h;
        r.mean_time_ms = *mean;
        r.stddev_time_ms = *sd;
        r.f2 = *f2;
        r.f3 = *f3;
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string format_bench_text(const std::vector<BenchRow>& rows) {
    using namespace detail;
    std::size_t wi = 8, wa = 9;
    for (const auto& r : rows) {
        wi = std::max(wi, r.instance.size());
        wa = std::max(wa, r.algorithm.size());
    }
    std::string out = pad("instance", wi, true) + "  " + pad("algorithm", wa, true) + "  " + pad("f1 (h)", 10) + "  " +
                      pad("mean (ms)", 11) + "  " + pad("stddev (ms)", 11) + "  " + pad("f2", 4) + "  " +
                      pad("f3", 9) + '\n';
    for (const auto& r : rows)
        out += pad(r.instance, wi, true) + "  " + pad(r.algorithm, wa, true) + "  " + pad(fixed2(r.f1_hours), 10) +
               "  " + pad(fixed2(r.mean_time_ms), 11) + "  " + pad(fixed2(r.stddev_time_ms), 11) + "  " +
               pad(std::to_string(r.f2), 4) + "  " + pad(fixed2(r.f3), 9) + '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation of one solution

struct EvaluationReport {
    std::string instance;
    ObjectiveVector objectives;
    double f1_hours = 0.0;
    std::vector<Route> routes;
    std::vector<Pixels> route_costs;
    FeasibilityReport feasibility;
};

inline EvaluationReport make_evaluation(const std::string& name, const SolutionSequence& seq, const ProblemSize& size,
                                        Pixels r_max, const DistanceOracle& oracle, double pixel_value) {
    EvaluationReport rep;
    rep.instance = name;
    rep.feasibility = validate(seq, size, r_max, oracle);
    if (!rep.feasibility.valid_multiset) return rep;
    rep.objectives = evaluate(seq, oracle);
    rep.f1_hours = round_hours(pixels_to_hours(rep.objectives.f1, pixel_value));
    rep.routes = particao(seq);
    for (const auto& r : rep.routes) rep.route_costs.push_back(route_cost(r, oracle));
    return rep;
}

inline std::string format_evaluation_text(const EvaluationReport& rep) {
    using namespace detail;
    const auto& fz = rep.feasibility;
    std::string out = "instance " + rep.instance + '\n';
    if (!fz.valid_multiset) {
        out += "invalid token multiset:\n";
        for (const auto& p : fz.multiset_problems) out += "  " + p + '\n';
        out += "feasible no\n";
        return out;
    }
    out += "f1 " + std::to_string(rep.objectives.f1) + " px (" + fixed2(rep.f1_hours) + " h)\n";
    out += "f2 " + std::to_string(rep.objectives.f2) + '\n';
    out += "f3 " + format_real(rep.objectives.f3) + '\n';
    out += "routes " + std::to_string(rep.routes.size()) + '\n';
    for (std::size_t r = 0; r < rep.routes.size(); ++r) {
        const auto& route = rep.routes[r];
        out += "  #" + std::to_string(r + 1) + " depot " + std::to_string(route.depot) + ", " +
               std::to_string(route.clients.size()) + " clients, " + std::to_string(rep.route_costs[r]) + " px";
        if (route.prefix) out += " (prefix route)";
        out += '\n';
    }
    if (fz.prefix_route) out += "notice: clients before the first depot token form a route of depot 1\n";
    for (const auto& o : fz.over_length_routes)
        out += "over-length route #" + std::to_string(o.route_index + 1) + ": " + std::to_string(o.cost) + " px > " +
               std::to_string(o.r_max) + " px\n";
    out += std::string("feasible ") + (fz.feasible ? "yes" : "no") + '\n';
    return out;
}

inline constexpr std::string_view evaluation_csv_header =
    "instance,f1_px,f1_hours,f2,f3,valid_multiset,over_length_routes,feasible";

inline std::string format_evaluation_csv(const EvaluationReport& rep) {
    using namespace detail;
    const auto& fz = rep.feasibility;
    std::string out(evaluation_csv_header);
    out += '\n';
    out += rep.instance + ',' + std::to_string(rep.objectives.f1) + ',' + fixed2(rep.f1_hours) + ',' +
           std::to_string(rep.objectives.f2) + ',' + format_real(rep.objectives.f3) + ',' +
           (fz.valid_multiset ? "1" : "0") + ',' + std::to_string(fz.over_length_routes.size()) + ',' +
           (fz.feasible ? "1" : "0") + '\n';
    return out;
}

} // namespace fdvrp
