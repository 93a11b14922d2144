#include <gtest/gtest.h>

#include <random>

#include "fdvrp/heuristics.hpp"
#include "fdvrp/instgen.hpp"
#include "fdvrp/synthetic.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fdvrp;

namespace {

DistanceOracle points_oracle(const std::vector<std::pair<int, int>>& p, std::size_t depots) {
    const auto n = p.size();
    std::vector<std::int32_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            t[a * n + b] = std::int32_t(std::llround(std::hypot(p[a].first - p[b].first, p[a].second - p[b].second)));
    return DistanceOracle(n, depots, 2190, std::move(t));
}

Route random_route(std::mt19937_64& rng, std::size_t clients) {
    Route r{1, {}, false};
    for (std::size_t c = 1; c <= clients; ++c) r.clients.push_back(std::int32_t(c));
    std::shuffle(r.clients.begin(), r.clients.end(), rng);
    return r;
}

std::int64_t travel_of(const Route& r, const DistanceOracle& o) {
    return oracle::tour_travel(oracle::route_tour(r, o.depot_count()), o);
}

struct Built {
    MapModel model = make_synthetic_city();
    StreetGraph graph = build_graph(model);
};

const Built& city() {
    static const Built b;
    return b;
}

} // namespace

TEST(Cluster, SingleDepotOneRoute) {
    std::mt19937_64 rng(1);
    const auto o = oracle::euclid_oracle(rng, 9, 1);
    const auto s = cluster_nearest_depot(o, 3);
    const auto routes = particao(s);
    ASSERT_EQ(routes.size(), 1u);
    EXPECT_EQ(routes[0].clients.size(), 8u);
    EXPECT_TRUE(s.entries.front().is_depot());
    EXPECT_EQ(std::count_if(s.entries.begin(), s.entries.end(), [](Token t) { return t.is_depot(); }), 3);
}

TEST(Cluster, TieGoesToLowerDepot) {
    // depots 1..5 then one client, equidistant from depots 2 and 5
    const DistanceOracle o(6, 5, 2190,
                           {0, 0, 0, 0, 0, 90,  //
                            0, 0, 0, 0, 0, 40,  //
                            0, 0, 0, 0, 0, 70,  //
                            0, 0, 0, 0, 0, 55,  //
                            0, 0, 0, 0, 0, 40,  //
                            90, 40, 70, 55, 40, 0});
    EXPECT_EQ(nearest_depots(o), (std::vector<std::int32_t>{2}));
    const auto routes = particao(cluster_nearest_depot(o, 1));
    ASSERT_EQ(routes.size(), 1u);
    EXPECT_EQ(routes[0].depot, 2);
}

TEST(Cluster, AssignmentIsArgminOfTravel) {
    const auto& c = city();
    const auto inst = generate(c.model, c.graph, {"a", 12, 3, 2, 17, std::nullopt});
    const auto o = build_oracle(c.graph, inst, c.model);
    const auto s = cluster_nearest_depot(o, 2);
    for (const auto& r : particao(s))
        for (auto client : r.clients) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            int arg = 0;
            for (int j = 0; j < 3; ++j)
                if (o.table()[std::size_t(j) * o.size() + 2 + std::size_t(client)] < best) {
                    best = o.table()[std::size_t(j) * o.size() + 2 + std::size_t(client)];
                    arg = j + 1;
                }
            EXPECT_EQ(r.depot, arg);
        }
    EXPECT_TRUE(validate(s, {12, 3, 2}, inst.r_max, o).valid_multiset);
    EXPECT_FALSE(has_prefix_route(s));
}

TEST(Cluster, ConstructionOrders) {
    // depot at 0, clients at 30, 10, 20 on a line
    const auto o = points_oracle({{0, 0}, {30, 0}, {10, 0}, {20, 0}}, 1);
    EXPECT_EQ(particao(cluster_nearest_depot(o, 1, ConstructionOrder::generation))[0].clients,
              (std::vector<std::int32_t>{1, 2, 3}));
    EXPECT_EQ(particao(cluster_nearest_depot(o, 1, ConstructionOrder::nearest_neighbor))[0].clients,
              (std::vector<std::int32_t>{2, 3, 1}));
}

TEST(TwoOpt, UncrossesSquare) {
    // depot A=(0,0), clients B=(100,0), C=(100,100), D=(0,100); visit A,C,B,D
    const auto o = points_oracle({{0, 0}, {100, 0}, {100, 100}, {0, 100}}, 1);
    const Route crossed{1, {2, 1, 3}, false};
    const auto out = two_opt(crossed, o);
    EXPECT_EQ(travel_of(out, o), 400);
    EXPECT_EQ(travel_of(out, o), oracle::brute_optimum(oracle::route_tour(crossed, 1), o));
    EXPECT_LT(route_cost(out, o), route_cost(crossed, o));
}

TEST(TwoOpt, FixedPoint) {
    const auto o = points_oracle({{0, 0}, {100, 0}, {100, 100}, {0, 100}}, 1);
    const Route good{1, {1, 2, 3}, false};
    const auto res = two_opt_search(good, o);
    EXPECT_EQ(res.route, good);
    EXPECT_TRUE(res.deltas.empty());
}

TEST(TwoOpt, RandomRoutesReachLocalOptimum) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng() % 8;
        const auto o = oracle::euclid_oracle(rng, m + 1);
        const auto r = random_route(rng, m);
        const auto out = two_opt(r, o);
        EXPECT_LE(route_cost(out, o), route_cost(r, o));
        if (m >= 3) EXPECT_GE(oracle::best_two_exchange(oracle::route_tour(out, 1), o), travel_of(out, o));
        auto a = r.clients, b = out.clients;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
    }
}

TEST(ThreeOpt, TinyRoutesUnchanged) {
    std::mt19937_64 rng(2);
    const auto o = oracle::euclid_oracle(rng, 3);
    for (const Route& r : {Route{1, {1}, false}, Route{1, {1, 2}, false}, Route{1, {2, 1}, false}})
        EXPECT_EQ(three_opt(r, o), r);
}

TEST(ThreeOpt, RandomRoutesReachLocalOptimum) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 3 + rng() % 5;
        const auto o = oracle::euclid_oracle(rng, m + 1);
        const auto r = random_route(rng, m);
        const auto out = three_opt(r, o);
        const auto tour = oracle::route_tour(out, 1);
        EXPECT_GE(oracle::best_three_exchange(tour, o), travel_of(out, o));
        EXPECT_GE(oracle::best_two_exchange(tour, o), travel_of(out, o));
        EXPECT_GE(travel_of(out, o), oracle::brute_optimum(tour, o));
        EXPECT_LE(route_cost(out, o), route_cost(r, o));
    }
}

TEST(ThreeOpt, FixedPoint) {
    std::mt19937_64 rng(32);
    const auto o = oracle::euclid_oracle(rng, 8);
    const auto once = three_opt(random_route(rng, 7), o);
    const auto res = three_opt_search(once, o);
    EXPECT_EQ(res.route, once);
    EXPECT_TRUE(res.deltas.empty());
}

TEST(LocalSearch, DeltasAreExact) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 4 + rng() % 20;
        const auto o = oracle::euclid_oracle(rng, m + 1);
        const auto r = random_route(rng, m);
        for (int which = 0; which < 2; ++which) {
            // replay with max_passes = k to observe every intermediate route
            const auto full = which ? three_opt_search(r, o) : two_opt_search(r, o);
            Route prev = r;
            for (std::size_t k = 0; k < full.deltas.size(); ++k) {
                SolverConfig cfg;
                cfg.max_passes = std::int64_t(k + 1);
                const auto step = which ? three_opt_search(r, o, cfg) : two_opt_search(r, o, cfg);
                ASSERT_EQ(step.deltas.size(), k + 1);
                EXPECT_LT(full.deltas[k], 0);
                EXPECT_EQ(route_cost(step.route, o), route_cost(prev, o) + full.deltas[k]);
                prev = step.route;
            }
            EXPECT_EQ(prev, full.route);
        }
    }
}

TEST(LocalSearch, ScaleEquivariant) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 4 + rng() % 15;
        const auto o = oracle::euclid_oracle(rng, m + 1, 1, 0, trial % 2 ? 1000 : 4); // small span forces ties
        auto scaled_table = o.table();
        for (auto& v : scaled_table) v *= 7;
        const DistanceOracle scaled(o.size(), 1, 0, scaled_table);
        const auto r = random_route(rng, m);
        for (int which = 0; which < 2; ++which) {
            const auto a = which ? three_opt_search(r, o) : two_opt_search(r, o);
            const auto b = which ? three_opt_search(r, scaled) : two_opt_search(r, scaled);
            EXPECT_EQ(a.route, b.route);
            ASSERT_EQ(a.deltas.size(), b.deltas.size());
            for (std::size_t k = 0; k < a.deltas.size(); ++k) EXPECT_EQ(a.deltas[k] * 7, b.deltas[k]);
        }
    }
}

TEST(LocalSearch, PrunedScanMatchesFullScan) {
    std::mt19937_64 rng(61);
    int scans = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 4 + rng() % 25;
        const auto o = oracle::euclid_oracle(rng, n, 1, 0, trial % 3 == 0 ? 3 : 1000);
        std::vector<std::size_t> tour(n);
        std::iota(tour.begin(), tour.end(), 0);
        std::shuffle(tour.begin() + 1, tour.end(), rng);
        detail::PrunedScanner two(o, tour), three(o, tour);
        while (true) {
            const auto cur = two.tour(tour);
            const auto full = detail::scan_two_opt(detail::PositionMatrix(o, cur), n, Strategy::best_improvement);
            const auto fast = two.scan_two_opt();
            ++scans;
            ASSERT_EQ(std::tie(full.delta, full.i, full.j), std::tie(fast.delta, fast.i, fast.j));
            if (fast.delta >= 0) break;
            two.apply(fast);
        }
        while (true) {
            const auto cur = three.tour(tour);
            const auto full = detail::scan_three_opt(detail::PositionMatrix(o, cur), n, Strategy::best_improvement);
            const auto fast = three.scan_three_opt();
            ++scans;
            ASSERT_EQ(std::tie(full.delta, full.i, full.j, full.k, full.kind),
                      std::tie(fast.delta, fast.i, fast.j, fast.k, fast.kind));
            if (fast.delta >= 0) break;
            three.apply(fast);
        }
    }
    EXPECT_GT(scans, 1000);
}

TEST(LocalSearch, FirstImprovementAlsoTerminatesAtLocalOptimum) {
    std::mt19937_64 rng(71);
    SolverConfig cfg;
    cfg.strategy = Strategy::first_improvement;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 3 + rng() % 6;
        const auto o = oracle::euclid_oracle(rng, m + 1);
        const auto r = random_route(rng, m);
        const auto a = two_opt(r, o, cfg);
        EXPECT_GE(oracle::best_two_exchange(oracle::route_tour(a, 1), o), travel_of(a, o));
        const auto b = three_opt(r, o, cfg);
        EXPECT_GE(oracle::best_three_exchange(oracle::route_tour(b, 1), o), travel_of(b, o));
    }
}

TEST(Improve, ConservesDepotTokensAndObjectives) {
    const auto& c = city();
    const auto inst = generate(c.model, c.graph, {"i", 60, 4, 5, 7, std::nullopt});
    const auto o = build_oracle(c.graph, inst, c.model);
    const auto s = cluster_nearest_depot(o, 5);
    const auto before = evaluate(s, o);
    for (auto opt : {Optimizer::two_opt, Optimizer::three_opt}) {
        SolverConfig cfg;
        cfg.optimizer = opt;
        const auto out = improve(s, o, cfg);
        const auto after = evaluate(out, o);
        EXPECT_EQ(after.f2, before.f2);
        EXPECT_EQ(after.f3, before.f3);
        EXPECT_LE(after.f1, before.f1);
        ASSERT_EQ(out.entries.size(), s.entries.size());
        for (std::size_t p = 0; p < s.entries.size(); ++p)
            if (s.entries[p].is_depot()) EXPECT_EQ(out.entries[p], s.entries[p]);
    }
}

TEST(Improve, SingletonRoutesUnchanged) {
    std::mt19937_64 rng(81);
    const auto o = oracle::euclid_oracle(rng, 6, 3);
    const auto s = oracle::from_tokens({-1, 1, -2, 2, -3, 3});
    EXPECT_EQ(improve(s, o), s);
    SolverConfig cfg;
    cfg.optimizer = Optimizer::three_opt;
    EXPECT_EQ(improve(s, o, cfg), s);
}

TEST(Improve, DecomposesPerRoute) {
    const auto& c = city();
    const auto inst = generate(c.model, c.graph, {"d", 15, 3, 2, 5, std::nullopt});
    const auto o = build_oracle(c.graph, inst, c.model);
    auto s = cluster_nearest_depot(o, 2);
    const auto out = improve(s, o);
    const auto in_routes = particao(s), out_routes = particao(out);
    ASSERT_EQ(in_routes.size(), out_routes.size());
    for (std::size_t r = 0; r < in_routes.size(); ++r) EXPECT_EQ(out_routes[r], two_opt(in_routes[r], o));

    SolverConfig threaded;
    threaded.threads = 3;
    EXPECT_EQ(improve(s, o, threaded), out);
}

TEST(Improve, PrefixRouteIsOptimizedToo) {
    std::mt19937_64 rng(82);
    const auto o = oracle::euclid_oracle(rng, 10, 2);
    const auto s = oracle::from_tokens({3, 1, 5, 2, 4, -1, -2, 8, 6, 7});
    const auto out = improve(s, o);
    EXPECT_TRUE(has_prefix_route(out));
    EXPECT_EQ(particao(out)[0], two_opt(particao(s)[0], o));
}

TEST(Improve, TimeBudgetAndPassCap) {
    std::mt19937_64 rng(83);
    const auto o = oracle::euclid_oracle(rng, 40, 1);
    std::vector<int> tokens{-1};
    for (int c = 1; c <= 39; ++c) tokens.push_back(c);
    const auto s = oracle::from_tokens(tokens);
    SolverConfig none;
    none.time_budget = 0.0;
    EXPECT_EQ(improve(s, o, none), s);
    SolverConfig one;
    one.max_passes = 1;
    const auto stepped = improve(s, o, one);
    EXPECT_NE(stepped, s);
    EXPECT_LT(f1(stepped, o), f1(s, o));
    EXPECT_GT(f1(stepped, o), f1(improve(s, o), o));
}
