// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fdvrp.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fdvrp;
using Clock = std::chrono::steady_clock;

namespace {

// tolerances and bands
constexpr double constant_tol_s = 0.001;
constexpr double enumeration_budget_s = 60.0;
constexpr double shortest_path_budget_s = 10.0;
constexpr double two_opt_optimal_min = 0.70;
constexpr double three_opt_optimal_min = 0.90;
constexpr double reduction_lo = 0.15, reduction_hi = 0.50;
constexpr double three_vs_two_mean_max = 0.02;
constexpr double three_le_two_min = 0.90;
constexpr double two_opt_2000_budget_s = 5.0;
constexpr double three_opt_500_budget_s = 30.0;
constexpr double sampling_sigma = 3.0;
constexpr std::int64_t sampling_draws = 100000;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome constants() {
    const MapModel m;
    const double a = px_to_seconds(2190, m), b = px_to_seconds(13138, m);
    const bool ok = std::abs(a - 300.03) <= constant_tol_s && std::abs(b - 1799.906) <= constant_tol_s &&
                    m.delivery_cost == 2190 && m.max_route == 13138;
    return {ok, fmt("2190 px = %.4f s, 13138 px = %.4f s", a, b)};
}

Outcome partition_example() {
    // c1 c2 pi_a pi_b c3 c4 with a = 1, b = 2
    const auto routes = particao(oracle::from_tokens({1, 2, -1, -2, 3, 4}));
    const std::vector<Route> expected{{1, {1, 2}, true}, {2, {3, 4}, false}};
    bool ok = routes.size() == expected.size();
    for (std::size_t r = 0; ok && r < routes.size(); ++r)
        ok = routes[r].depot == expected[r].depot && routes[r].clients == expected[r].clients &&
             routes[r].prefix == expected[r].prefix;
    return {ok, fmt("%zu routes", routes.size())};
}

Outcome objective_enumeration() {
    const auto t0 = Clock::now();
    const auto model = make_attribute_grid();
    const auto graph = build_graph(model);
    const auto inst = generate(model, graph, {"enum", 6, 2, 2, 99, {}});
    const auto fw = oracle::floyd_warshall_sites(model, inst.sites);
    std::size_t checked = 0, mismatches = 0;
    for (int n = 1; n <= 6; ++n)
        for (int nd = 1; nd <= 2; ++nd)
            for (int k = 1; k <= 2; ++k) {
                std::vector<SitePoint> sites(inst.sites.begin(), inst.sites.begin() + nd);
                sites.insert(sites.end(), inst.sites.begin() + 2, inst.sites.begin() + 2 + n);
                const auto o = build_oracle(graph, sites, std::size_t(nd), model.delivery_cost);
                // FW table restricted to the same sites
                std::vector<std::size_t> pick;
                for (int d = 0; d < nd; ++d) pick.push_back(std::size_t(d));
                for (int c = 0; c < n; ++c) pick.push_back(std::size_t(2 + c));
                std::vector<std::int64_t> travel;
                for (auto a : pick)
                    for (auto b : pick) travel.push_back(fw[a * inst.sites.size() + b]);

                std::vector<int> tokens;
                for (int d = nd; d >= 1; --d)
                    for (int r = 0; r < k; ++r) tokens.push_back(-d);
                for (int c = 1; c <= n; ++c) tokens.push_back(c);
                std::sort(tokens.begin(), tokens.end());
                do {
                    const auto seq = oracle::from_tokens(tokens);
                    const auto got = evaluate(seq, o);
                    const auto want = oracle::brute_objectives(tokens, nd, travel, pick.size(), model.delivery_cost);
                    ++checked;
                    if (got.f1 != want.f1 || got.f2 != want.f2 || got.f3 != want.f3 ||
                        f3(seq, nd) != want.f3)
                        ++mismatches;
                } while (std::next_permutation(tokens.begin(), tokens.end()));
            }
    const double s = seconds_since(t0);
    return {mismatches == 0 && s < enumeration_budget_s,
            fmt("%zu sequences, %zu mismatches, %.1f s", checked, mismatches, s)};
}

Outcome shortest_paths() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t pairs = 0, mismatches = 0;
    for (int map = 0; map < 20; ++map) {
        const auto m = oracle::random_map(rng, 50);
        const auto sites = oracle::random_sites(rng, m, 1 + rng() % 25);
        const auto o = build_oracle(build_graph(m), sites, 1, m.delivery_cost);
        const auto fw = oracle::floyd_warshall_sites(m, sites);
        for (std::size_t a = 0; a < sites.size(); ++a)
            for (std::size_t b = 0; b < sites.size(); ++b, ++pairs)
                if (o.travel(a, b) != fw[a * sites.size() + b]) ++mismatches;
    }
    const double s = seconds_since(t0);
    return {mismatches == 0 && s < shortest_path_budget_s,
            fmt("20 maps, %zu pairs, %zu mismatches, %.2f s", pairs, mismatches, s)};
}

Route random_route(std::mt19937_64& rng, std::size_t depots, std::size_t clients) {
    Route r{std::int32_t(1 + rng() % depots), {}, false};
    for (std::size_t c = 1; c <= clients; ++c) r.clients.push_back(std::int32_t(c));
    std::shuffle(r.clients.begin(), r.clients.end(), rng);
    return r;
}

Outcome certificates() {
    std::mt19937_64 rng(4242);
    int bad2 = 0, bad3 = 0, bad32 = 0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t clients = rng() % 13, depots = 1 + rng() % 3;
        const auto o = oracle::euclid_oracle(rng, depots + clients, depots);
        const auto r = random_route(rng, depots, clients);
        const auto t2 = oracle::route_tour(two_opt(r, o), depots);
        const auto t3 = oracle::route_tour(three_opt(r, o), depots);
        if (t2.size() >= 4 && oracle::best_two_exchange(t2, o) < oracle::tour_travel(t2, o)) ++bad2;
        if (t3.size() >= 4 && oracle::best_three_exchange(t3, o) < oracle::tour_travel(t3, o)) ++bad3;
        if (t3.size() >= 4 && oracle::best_two_exchange(t3, o) < oracle::tour_travel(t3, o)) ++bad32;
    }
    return {bad2 == 0 && bad3 == 0 && bad32 == 0,
            fmt("200 routes; improvable: 2-opt %d, 3-opt %d, 3-opt by 2-exchange %d", bad2, bad3, bad32)};
}

Outcome small_optimality() {
    std::mt19937_64 rng(777);
    int hit2 = 0, hit3 = 0;
    const int cases = 50;
    for (int k = 0; k < cases; ++k) {
        const std::size_t clients = 7;
        const auto o = oracle::euclid_oracle(rng, 1 + clients, 1);
        const auto r = random_route(rng, 1, clients);
        const auto best = oracle::brute_optimum(oracle::route_tour(r, 1), o);
        hit2 += oracle::tour_travel(oracle::route_tour(two_opt(r, o), 1), o) == best;
        hit3 += oracle::tour_travel(oracle::route_tour(three_opt(r, o), 1), o) == best;
    }
    const double r2 = double(hit2) / cases, r3 = double(hit3) / cases;
    return {r2 >= two_opt_optimal_min && r3 >= three_opt_optimal_min,
            fmt("7 clients: 2-opt optimal %.0f%%, 3-opt optimal %.0f%%", 100 * r2, 100 * r3)};
}

// ---------------------------------------------------------------------------
// Suite runs shared by the band, conservation and timing criteria.

struct SuiteRow {
    InstanceSpec spec;
    ObjectiveVector cluster, two, three;
    double two_seconds = 0, three_seconds = 0, oracle_seconds = 0;
};

std::vector<SuiteRow> run_suite(const MapModel& city) {
    const auto graph = build_graph(city);
    std::vector<SuiteRow> rows;
    for (const auto& spec : parse_instances(fixture::text("instances.txt"))) {
        SuiteRow row{spec, {}, {}, {}};
        const auto inst = generate(city, graph, spec);
        auto t = Clock::now();
        const auto o = build_oracle(graph, inst, city);
        row.oracle_seconds = seconds_since(t);
        const auto base = cluster_nearest_depot(o, spec.max_vehicles);
        row.cluster = evaluate(base, o);
        for (auto opt : {Optimizer::two_opt, Optimizer::three_opt}) {
            SolverConfig cfg;
            cfg.optimizer = opt;
            t = Clock::now();
            const auto seq = improve(cluster_nearest_depot(o, spec.max_vehicles), o, cfg);
            const double s = seconds_since(t);
            (opt == Optimizer::two_opt ? row.two : row.three) = evaluate(seq, o);
            (opt == Optimizer::two_opt ? row.two_seconds : row.three_seconds) = s;
        }
        std::printf("  %-20s cluster %9lld  2-opt %9lld (-%4.1f%%, %7.3f s)  3-opt %9lld (%+6.3f%%, %7.3f s)\n",
                    spec.name.c_str(), (long long)row.cluster.f1, (long long)row.two.f1,
                    100.0 * double(row.cluster.f1 - row.two.f1) / double(row.cluster.f1), row.two_seconds,
                    (long long)row.three.f1, 100.0 * double(row.three.f1 - row.two.f1) / double(row.two.f1),
                    row.three_seconds);
        std::fflush(stdout);
        rows.push_back(row);
    }
    return rows;
}

Outcome behaviour_band(const std::vector<SuiteRow>& rows) {
    double lo = 1, hi = 0, mean_gap = 0;
    int out_of_band = 0, three_le_two = 0;
    for (const auto& r : rows) {
        if (r.spec.deliveries >= 50) {
            const double red = double(r.cluster.f1 - r.two.f1) / double(r.cluster.f1);
            lo = std::min(lo, red);
            hi = std::max(hi, red);
            if (red < reduction_lo || red > reduction_hi) ++out_of_band;
        }
        mean_gap += std::abs(double(r.three.f1 - r.two.f1)) / double(r.two.f1);
        three_le_two += r.three.f1 <= r.two.f1;
    }
    mean_gap /= double(rows.size());
    const double share = double(three_le_two) / double(rows.size());
    return {out_of_band == 0 && mean_gap <= three_vs_two_mean_max && share >= three_le_two_min,
            fmt("2-opt reduction %.1f%%..%.1f%% (%d outside band), mean |3-opt - 2-opt| %.3f%%, 3-opt <= 2-opt on "
                "%d/%zu",
                100 * lo, 100 * hi, out_of_band, 100 * mean_gap, three_le_two, rows.size())};
}

Outcome conservation(const std::vector<SuiteRow>& rows) {
    int changed = 0;
    for (const auto& r : rows)
        for (const auto* v : {&r.two, &r.three})
            if (v->f2 != r.cluster.f2 || v->f3 != r.cluster.f3) ++changed;
    return {changed == 0, fmt("%zu instances x 2 optimizers, %d changed f2/f3", rows.size(), changed)};
}

Outcome performance(const std::vector<SuiteRow>& rows) {
    // timed from the distance table on, single thread
    double worst2 = 0, worst3 = 0;
    int n2 = 0, n3 = 0;
    for (const auto& r : rows) {
        if (r.spec.deliveries == 2000 && r.spec.depots == 7) {
            worst2 = std::max(worst2, r.oracle_seconds + r.two_seconds);
            ++n2;
        }
        if (r.spec.deliveries == 500) {
            worst3 = std::max(worst3, r.oracle_seconds + r.three_seconds);
            ++n3;
        }
    }
    return {n2 > 0 && n3 > 0 && worst2 <= two_opt_2000_budget_s && worst3 <= three_opt_500_budget_s,
            fmt("2000 deliveries cluster+2-opt %.2f s (%d runs), 500 deliveries cluster+3-opt %.2f s (%d runs)",
                worst2, n2, worst3, n3)};
}

// ---------------------------------------------------------------------------

Outcome generation_statistics(const MapModel& city) {
    // expected street shares from length times the attribute multipliers
    const double region[] = {1.0, 0.75, 0.4, 0.2}, type[] = {1.0, 0.75, 0.4, 0.0}, zone[] = {1.0, 0.75, 0.4};
    auto law = [&](const MapModel& m) {
        std::vector<double> p;
        double total = 0;
        for (const auto& s : m.streets) {
            double len = 0;
            for (std::size_t k = 0; k + 1 < s.points.size(); ++k)
                len += std::hypot(double(s.points[k + 1].x - s.points[k].x), double(s.points[k + 1].y - s.points[k].y));
            p.push_back(len * region[int(s.region)] * type[int(s.type)] * zone[int(s.zone)]);
            total += p.back();
        }
        for (auto& x : p) x /= total;
        return p;
    };

    const auto grid = make_attribute_grid();
    std::string detail;
    bool ok = true;
    std::int64_t highway_hits = 0;
    for (const auto* m : {&grid, &city}) {
        const SiteSampler sampler(*m);
        Rng rng(2024);
        std::vector<std::int64_t> counts(m->streets.size(), 0);
        for (std::int64_t k = 0; k < sampling_draws; ++k) ++counts[std::size_t(sampler.sample(rng).street)];
        for (std::size_t s = 0; s < counts.size(); ++s)
            if (m->streets[s].type == StreetType::highway) highway_hits += counts[s];
        const double z = oracle::max_multinomial_z(counts, law(*m), sampling_draws);
        ok = ok && z <= sampling_sigma;
        detail += fmt("%s%s max |z| %.2f over %zu streets", detail.empty() ? "" : ", ",
                      m == &grid ? "attribute grid" : "city", z, counts.size());
    }
    ok = ok && highway_hits == 0;

    const auto graph = build_graph(city);
    const InstanceSpec spec{"seeded", 100, 3, 5, 31337, {}};
    const auto a = write_instance(generate(city, graph, spec));
    const auto b = write_instance(generate(city, graph, spec));
    ok = ok && a == b;
    detail += fmt(", highway samples %lld, repeat seed %s", (long long)highway_hits, a == b ? "identical" : "differs");
    return {ok, detail};
}

Outcome round_trips() {
    int files = 0, broken = 0;
    auto check = [&](const std::string& original, const std::function<std::string(const std::string&)>& cycle) {
        ++files;
        const auto once = cycle(original);
        if (once != original || cycle(once) != once) ++broken;
    };
    const auto grid = parse_model(fixture::text("fixtures/attribute_grid.txt"));
    for (const char* m : {"synthetic_city.txt", "fixtures/attribute_grid.txt", "fixtures/jfk.txt"})
        check(fixture::text(m), [](const std::string& t) { return serialize_model(parse_model(t)); });
    for (const char* i : {"fixtures/grid_7.txt", "fixtures/grid_25.txt", "fixtures/partition_4.txt"})
        check(fixture::text(i), [&](const std::string& t) { return write_instance(parse_instance(t, grid)); });
    for (const char* s : {"fixtures/grid_7.sol", "fixtures/partition_4.sol"})
        check(fixture::text(s), [](const std::string& t) { return write_solution(parse_solution(t)); });
    check(fixture::text("fixtures/grid_7.matrix"),
          [](const std::string& t) { return write_matrix(parse_matrix(t, 2, 2190)); });
    return {broken == 0, fmt("%d files, %d changed", files, broken)};
}

} // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* name, const Outcome& o) {
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    };
    report(1, "constants", constants());
    report(2, "partition example", partition_example());
    report(3, "objective enumeration", objective_enumeration());
    report(4, "shortest paths", shortest_paths());
    report(5, "local-optimum certificates", certificates());
    report(6, "small-instance optimality", small_optimality());

    const auto city = parse_model(fixture::text("synthetic_city.txt"));
    std::printf("suite on the synthetic city (%zu streets):\n", city.streets.size());
    const auto rows = run_suite(city);
    report(7, "behaviour band", behaviour_band(rows));
    report(8, "f2/f3 conservation", conservation(rows));
    report(9, "performance", performance(rows));
    report(10, "generation statistics", generation_statistics(city));
    report(11, "round-trips", round_trips());

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
