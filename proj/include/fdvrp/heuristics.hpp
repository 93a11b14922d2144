#pragma once

// Baseline solvers: nearest-depot clusterization and intra-route 2-opt / 3-opt
// local search.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fdvrp/core.hpp"
#include "fdvrp/error.hpp"
#include "fdvrp/routing.hpp"

namespace fdvrp {

enum class Strategy : std::uint8_t { best_improvement, first_improvement };
enum class Optimizer : std::uint8_t { none, two_opt, three_opt };

/// Order of the clients inside each cluster before local search.
enum class ConstructionOrder : std::uint8_t {
    /// Client index order, i.e. the order in which the generator drew them.
    generation,
    /// Greedy nearest neighbour from the depot.
    nearest_neighbor,
};

struct SolverConfig {
    Optimizer optimizer = Optimizer::two_opt;
    Strategy strategy = Strategy::best_improvement;
    std::optional<std::int64_t> max_passes;
    std::optional<double> time_budget; ///< seconds, shared by all routes of one improve() call
    unsigned threads = 1;
};

struct LocalSearchResult {
    Route route;
    std::vector<Pixels> deltas; ///< travel change of every applied move, in order
    std::int64_t passes = 0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

/// Travel distances between tour positions, with column L duplicating column 0
/// so that edge (k, k+1 mod L) never needs a modulo.
class PositionMatrix {
public:
    PositionMatrix(const DistanceOracle& oracle, const std::vector<std::size_t>& tour)
        : oracle_(&oracle), size_(tour.size()), stride_(tour.size() + 1), data_(size_ * stride_) {
        refresh(tour);
    }

    void refresh(const std::vector<std::size_t>& tour) {
        for (std::size_t p = 0; p < size_; ++p) {
            const auto row = oracle_->row(tour[p]);
            auto* out = data_.data() + p * stride_;
            for (std::size_t q = 0; q < size_; ++q) out[q] = row[tour[q]];
            out[size_] = out[0];
        }
    }

    const std::int32_t* row(std::size_t p) const { return data_.data() + p * stride_; }
    std::int32_t at(std::size_t p, std::size_t q) const { return data_[p * stride_ + q]; }

private:
    const DistanceOracle* oracle_;
    std::size_t size_;
    std::size_t stride_;
    std::vector<std::int32_t> data_;
};

inline std::vector<std::size_t> tour_of(const Route& route, std::size_t depot_count) {
    std::vector<std::size_t> tour;
    tour.reserve(route.clients.size() + 1);
    tour.push_back(depot_site(route.depot));
    for (auto c : route.clients) tour.push_back(client_site(c, depot_count));
    return tour;
}

inline Route route_of(const std::vector<std::size_t>& tour, const Route& original, std::size_t depot_count) {
    Route r = original;
    for (std::size_t p = 1; p < tour.size(); ++p)
        r.clients[p - 1] = static_cast<std::int32_t>(tour[p] - depot_count + 1);
    return r;
}

struct Deadline {
    std::optional<Clock::time_point> at;
    bool passed() const { return at && Clock::now() >= *at; }
};

struct TwoOptMove {
    std::size_t i = 0, j = 0;
    std::int64_t delta = 0;
};

/// Scans edge pairs (i, j), i < j, in lexicographic order.
inline TwoOptMove scan_two_opt(const PositionMatrix& d, std::size_t n, Strategy strategy) {
    TwoOptMove best;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const auto* ri = d.row(i);
        const auto* ri1 = d.row(i + 1);
        const std::int64_t ab = ri[i + 1];
        for (std::size_t j = i + 2; j < n; ++j) {
            const auto* rj = d.row(j);
            const std::int64_t delta = std::int64_t{ri[j]} + ri1[j + 1] - ab - rj[j + 1];
            if (delta < best.delta) {
                best = {i, j, delta};
                if (strategy == Strategy::first_improvement) return best;
            }
        }
    }
    return best;
}

struct ThreeOptMove {
    std::size_t i = 0, j = 0, k = 0;
    int kind = 0; ///< 1..7, see apply_three_opt
    std::int64_t delta = 0;
};

/// Scans edge triples (i, j, k), i < j < k, and the seven reconnections of each,
/// in lexicographic (i, j, k, kind) order.
inline ThreeOptMove scan_three_opt(const PositionMatrix& d, std::size_t n, Strategy strategy) {
    ThreeOptMove best;
    for (std::size_t i = 0; i + 3 <= n; ++i) {
        const auto* ra = d.row(i);
        const auto* rb = d.row(i + 1);
        const std::int64_t ab = ra[i + 1];
        for (std::size_t j = i + 1; j + 2 <= n; ++j) {
            const auto* rc = d.row(j);
            const auto* rd = d.row(j + 1);
            const std::int64_t cd = rc[j + 1];
            const std::int64_t ac = ra[j], bd = rb[j + 1], ad = ra[j + 1];
            for (std::size_t k = j + 1; k < n; ++k) {
                const std::int64_t ef = d.row(k)[k + 1];
                const std::int64_t ae = ra[k], bf = rb[k + 1], ce = rc[k], df = rd[k + 1], be = rb[k],
                                   cf = rc[k + 1];
                const std::int64_t old = ab + cd + ef;
                const std::int64_t cand[7] = {
                    ac + bd + ef - old, // 1: reverse first segment
                    ab + ce + df - old, // 2: reverse second segment
                    ae + cd + bf - old, // 3: reverse both as one block
                    ac + be + df - old, // 4: reverse both in place
                    ad + be + cf - old, // 5: swap segments
                    ad + ce + bf - old, // 6: swap, first reversed
                    ae + bd + cf - old, // 7: swap, second reversed
                };
                std::int64_t m = cand[0];
                for (int c = 1; c < 7; ++c) m = std::min(m, cand[c]);
                if (m < best.delta) {
                    int kind = 0;
                    while (cand[kind] != m) ++kind;
                    best = {i, j, k, kind + 1, m};
                    if (strategy == Strategy::first_improvement) return best;
                }
            }
        }
    }
    return best;
}

inline void apply_three_opt(std::vector<std::size_t>& tour, const ThreeOptMove& mv) {
    using It = std::vector<std::size_t>::const_iterator;
    const It s1b = tour.begin() + static_cast<std::ptrdiff_t>(mv.i + 1);
    const It s1e = tour.begin() + static_cast<std::ptrdiff_t>(mv.j + 1);
    const It s2e = tour.begin() + static_cast<std::ptrdiff_t>(mv.k + 1);
    std::vector<std::size_t> s1(s1b, s1e), s2(s1e, s2e);
    auto rev = [](std::vector<std::size_t> v) {
        std::reverse(v.begin(), v.end());
        return v;
    };
    std::vector<std::size_t> first, second;
    switch (mv.kind) {
    case 1: first = rev(s1); second = s2; break;
    case 2: first = s1; second = rev(s2); break;
    case 3: first = rev(s2); second = rev(s1); break;
    case 4: first = rev(s1); second = rev(s2); break;
    case 5: first = s2; second = s1; break;
    case 6: first = s2; second = rev(s1); break;
    case 7: first = rev(s2); second = s1; break;
    default: throw Error("invalid 3-opt reconnection");
    }
    auto out = tour.begin() + static_cast<std::ptrdiff_t>(mv.i + 1);
    out = std::copy(first.begin(), first.end(), out);
    std::copy(second.begin(), second.end(), out);
}

/// Best-improvement scans that return exactly the move of scan_two_opt /
/// scan_three_opt (same delta, same lexicographic tie-break) without visiting
/// every pair or triple.
///
/// Every reconnection is an alternating cycle of removed and added edges. For a
/// move whose gain is at least the best gain G found so far, some rotation of
/// its cycle keeps every partial sum of (removed - added - G/pairs) non-negative.
/// Enumerating from each removed edge outward through distance-sorted neighbour
/// lists and cutting at those bounds therefore reaches every candidate move.
class PrunedScanner {
public:
    PrunedScanner(const DistanceOracle& oracle, const std::vector<std::size_t>& tour)
        : n_(tour.size()), dist_(n_ * n_), neighbours_(n_ * (n_ - 1)), tour_(n_), pos_(n_), edge_(n_) {
        for (std::size_t a = 0; a < n_; ++a) {
            const auto row = oracle.row(tour[a]);
            for (std::size_t b = 0; b < n_; ++b) dist_[a * n_ + b] = row[tour[b]];
        }
        for (std::size_t a = 0; a < n_; ++a) {
            auto* list = neighbours_.data() + a * (n_ - 1);
            std::size_t w = 0;
            for (std::size_t b = 0; b < n_; ++b)
                if (b != a) list[w++] = static_cast<std::int32_t>(b);
            std::sort(list, list + (n_ - 1), [&](std::int32_t x, std::int32_t y) {
                return std::pair(d(a, static_cast<std::size_t>(x)), x) < std::pair(d(a, static_cast<std::size_t>(y)), y);
            });
        }
        for (std::size_t p = 0; p < n_; ++p) tour_[p] = static_cast<std::int32_t>(p);
        refresh();
    }

    /// Local node order -> site ids of the original tour.
    std::vector<std::size_t> tour(const std::vector<std::size_t>& original) const {
        std::vector<std::size_t> out(n_);
        for (std::size_t p = 0; p < n_; ++p) out[p] = original[static_cast<std::size_t>(tour_[p])];
        return out;
    }

    void apply(const ThreeOptMove& mv) {
        std::vector<std::size_t> t(tour_.begin(), tour_.end());
        apply_three_opt(t, mv);
        for (std::size_t p = 0; p < n_; ++p) tour_[p] = static_cast<std::int32_t>(t[p]);
        refresh();
    }

    void apply(const TwoOptMove& mv) {
        std::reverse(tour_.begin() + static_cast<std::ptrdiff_t>(mv.i + 1),
                     tour_.begin() + static_cast<std::ptrdiff_t>(mv.j + 1));
        refresh();
    }

    TwoOptMove scan_two_opt() const {
        TwoOptMove best;
        for (const auto p : edges_by_length()) {
            const std::int64_t r1 = edge_[p];
            if (2 * r1 < -best.delta) break;
            // cycle A-B, B-D, D-C, C-A entered from edge i (via B) or edge j (via C)
            for (int rot = 0; rot < 2; ++rot) {
                const auto u1 = static_cast<std::size_t>(tour_[rot == 0 ? (p + 1) % n_ : p]);
                const auto* list = neighbours_.data() + u1 * (n_ - 1);
                for (std::size_t a = 0; a + 1 < n_; ++a) {
                    const auto v = static_cast<std::size_t>(list[a]);
                    const std::int64_t a1 = d(u1, v);
                    if (2 * a1 > 2 * r1 + best.delta) break;
                    const auto q = static_cast<std::size_t>(pos_[v]);
                    const std::size_t i = rot == 0 ? p : q;
                    const std::size_t j = rot == 0 ? (q + n_ - 1) % n_ : p;
                    if (!(i + 2 <= j && j < n_)) continue;
                    const std::int64_t delta =
                        dp(i, j) + dp(i + 1, (j + 1) % n_) - dp(i, i + 1) - dp(j, (j + 1) % n_);
                    if (delta < 0 && (delta < best.delta || (delta == best.delta && std::pair(i, j) < std::pair(best.i, best.j))))
                        best = {i, j, delta};
                }
            }
        }
        return best;
    }

    ThreeOptMove scan_three_opt() const {
        ThreeOptMove best;
        for (const auto p : edges_by_length()) {
            const std::int64_t r1 = edge_[p];
            const std::int64_t gain = -best.delta;
            if (3 * r1 < gain) break;
            for (const auto& cyc : cycles) {
                if (cyc.pairs == 2 && 2 * r1 < gain) continue;
                for (int rot = 0; rot < cyc.pairs; ++rot) expand(cyc, rot, p, best);
            }
        }
        return best;
    }

private:
    // Roles: A=0,B=1 on edge i; C=2,D=3 on edge j; E=4,F=5 on edge k.
    struct Cycle {
        int kind;
        int pairs;
        std::array<int, 6> roles; ///< removed (r0,r1), added (r1,r2), removed (r2,r3), ...
    };
    static constexpr std::array<Cycle, 7> cycles{{
        {1, 2, {0, 1, 3, 2, 0, 0}}, // AC, BD
        {2, 2, {2, 3, 5, 4, 0, 0}}, // CE, DF
        {3, 2, {0, 1, 5, 4, 0, 0}}, // AE, BF
        {4, 3, {0, 1, 4, 5, 3, 2}}, // AC, BE, DF
        {5, 3, {0, 1, 4, 5, 2, 3}}, // AD, BE, CF
        {6, 3, {0, 1, 5, 4, 2, 3}}, // AD, CE, BF
        {7, 3, {0, 1, 3, 2, 5, 4}}, // AE, BD, CF
    }};

    std::vector<std::size_t> edges_by_length() const {
        std::vector<std::size_t> order(n_);
        for (std::size_t p = 0; p < n_; ++p) order[p] = p;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edge_[a] > edge_[b]; });
        return order;
    }

    static bool first_end(int role) { return role % 2 == 0; }
    static int edge_of(int role) { return role / 2; }

    std::int64_t d(std::size_t a, std::size_t b) const { return dist_[a * n_ + b]; }
    std::int64_t dp(std::size_t p, std::size_t q) const {
        return d(static_cast<std::size_t>(tour_[p]), static_cast<std::size_t>(tour_[q]));
    }

    void refresh() {
        for (std::size_t p = 0; p < n_; ++p) pos_[static_cast<std::size_t>(tour_[p])] = static_cast<std::int32_t>(p);
        for (std::size_t p = 0; p < n_; ++p) edge_[p] = dp(p, (p + 1) % n_);
    }

    /// Position of `role` when its edge sits at index `idx`.
    std::size_t role_pos(int role, std::size_t idx) const { return first_end(role) ? idx : (idx + 1) % n_; }
    /// Edge index implied by finding `role` at position `q`.
    std::size_t edge_at(int role, std::size_t q) const { return first_end(role) ? q : (q + n_ - 1) % n_; }

    void consider(int kind, std::array<std::size_t, 3> idx, ThreeOptMove& best) const {
        auto [i, j, k] = idx;
        if (!(i + 1 <= j && j + 1 <= k && k + 1 <= n_)) return;
        const std::int64_t ab = dp(i, i + 1), cd = dp(j, j + 1), ef = dp(k, (k + 1) % n_);
        const std::int64_t old = ab + cd + ef;
        const std::size_t A = i, B = i + 1, C = j, D = j + 1, E = k, F = (k + 1) % n_;
        std::int64_t delta = 0;
        switch (kind) {
        case 1: delta = dp(A, C) + dp(B, D) + ef - old; break;
        case 2: delta = ab + dp(C, E) + dp(D, F) - old; break;
        case 3: delta = dp(A, E) + cd + dp(B, F) - old; break;
        case 4: delta = dp(A, C) + dp(B, E) + dp(D, F) - old; break;
        case 5: delta = dp(A, D) + dp(B, E) + dp(C, F) - old; break;
        case 6: delta = dp(A, D) + dp(C, E) + dp(B, F) - old; break;
        default: delta = dp(A, E) + dp(B, D) + dp(C, F) - old; break;
        }
        if (delta >= 0) return;
        if (delta < best.delta ||
            (delta == best.delta && std::tie(i, j, k, kind) < std::tie(best.i, best.j, best.k, best.kind)))
            best = {i, j, k, kind, delta};
    }

    /// Completes the free edge of a two-pair (2-opt type) case with its
    /// lexicographically smallest valid index.
    void consider_pair_case(int kind, std::array<std::size_t, 3> idx, ThreeOptMove& best) const {
        switch (kind) {
        case 1: idx[2] = idx[1] + 1; break;
        case 2: idx[0] = 0; if (idx[1] == 0) return; break;
        default: idx[1] = idx[0] + 1; break;
        }
        consider(kind, idx, best);
    }

    void expand(const Cycle& cyc, int rot, std::size_t p, ThreeOptMove& best) const {
        std::array<int, 6> y{};
        const int len = 2 * cyc.pairs;
        for (int t = 0; t < len; ++t) y[static_cast<std::size_t>(t)] = cyc.roles[static_cast<std::size_t>((t + 2 * rot) % len)];

        std::array<std::size_t, 3> idx{};
        idx[static_cast<std::size_t>(edge_of(y[0]))] = p;
        const auto u1 = static_cast<std::size_t>(tour_[role_pos(y[1], p)]);
        const std::int64_t r1 = edge_[p];
        const std::int64_t pairs = cyc.pairs;
        const auto* list = neighbours_.data() + u1 * (n_ - 1);
        for (std::size_t a = 0; a + 1 < n_; ++a) {
            const auto v = static_cast<std::size_t>(list[a]);
            const std::int64_t a1 = d(u1, v);
            if (pairs * a1 > pairs * r1 + best.delta) break;
            const auto q = static_cast<std::size_t>(pos_[v]);
            const auto idx2 = edge_at(y[2], q);
            idx[static_cast<std::size_t>(edge_of(y[2]))] = idx2;
            if (cyc.pairs == 2) {
                consider_pair_case(cyc.kind, idx, best);
                continue;
            }
            const auto u2 = static_cast<std::size_t>(tour_[role_pos(y[3], idx2)]);
            const std::int64_t r2 = edge_[idx2];
            const auto* list2 = neighbours_.data() + u2 * (n_ - 1);
            for (std::size_t b = 0; b + 1 < n_; ++b) {
                const auto w = static_cast<std::size_t>(list2[b]);
                const std::int64_t a2 = d(u2, w);
                if (3 * (a1 + a2) > 3 * (r1 + r2) + 2 * best.delta) break;
                idx[static_cast<std::size_t>(edge_of(y[4]))] = edge_at(y[4], static_cast<std::size_t>(pos_[w]));
                consider(cyc.kind, idx, best);
            }
        }
    }

    std::size_t n_;
    std::vector<std::int32_t> dist_;       ///< by local node id
    std::vector<std::int32_t> neighbours_; ///< per node, others by ascending distance
    std::vector<std::int32_t> tour_;       ///< local node at each position
    std::vector<std::int32_t> pos_;
    std::vector<std::int64_t> edge_;       ///< length of edge (p, p+1)
};

template <class Scan, class Apply>
LocalSearchResult run_local_search(const Route& route, const DistanceOracle& oracle, const SolverConfig& cfg,
                                   const Deadline& deadline, std::size_t min_nodes, Scan scan, Apply apply) {
    LocalSearchResult res{route, {}, 0};
    auto tour = tour_of(route, oracle.depot_count());
    if (tour.size() < min_nodes) return res;
    PositionMatrix d(oracle, tour);
    while (!cfg.max_passes || res.passes < *cfg.max_passes) {
        if (deadline.passed()) break;
        ++res.passes;
        const auto mv = scan(d, tour.size(), cfg.strategy);
        if (mv.delta >= 0) break;
        apply(tour, mv);
        res.deltas.push_back(mv.delta);
        d.refresh(tour);
    }
    res.route = route_of(tour, route, oracle.depot_count());
    return res;
}

template <class Scan>
LocalSearchResult run_pruned_search(const Route& route, const DistanceOracle& oracle, const SolverConfig& cfg,
                                    const Deadline& deadline, Scan scan) {
    LocalSearchResult res{route, {}, 0};
    const auto original = tour_of(route, oracle.depot_count());
    if (original.size() < 4) return res;
    PrunedScanner scanner(oracle, original);
    while (!cfg.max_passes || res.passes < *cfg.max_passes) {
        if (deadline.passed()) break;
        ++res.passes;
        const auto mv = scan(scanner);
        if (mv.delta >= 0) break;
        scanner.apply(mv);
        res.deltas.push_back(mv.delta);
    }
    res.route = route_of(scanner.tour(original), route, oracle.depot_count());
    return res;
}

} // namespace detail

/// 2-opt on the closed tour depot, c1..cm: reverse the segment between the two
/// removed edges whenever that strictly shortens travel. The depot stays first.
inline LocalSearchResult two_opt_search(const Route& route, const DistanceOracle& oracle, const SolverConfig& cfg = {},
                                        const detail::Deadline& deadline = {}) {
    if (cfg.strategy == Strategy::first_improvement)
        return detail::run_local_search(route, oracle, cfg, deadline, 4, detail::scan_two_opt,
                                        [](std::vector<std::size_t>& tour, const detail::TwoOptMove& mv) {
                                            std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(mv.i + 1),
                                                         tour.begin() + static_cast<std::ptrdiff_t>(mv.j + 1));
                                        });
    return detail::run_pruned_search(route, oracle, cfg, deadline,
                                     [](const detail::PrunedScanner& s) { return s.scan_two_opt(); });
}

/// 3-opt with all seven reconnections of three removed edges.
inline LocalSearchResult three_opt_search(const Route& route, const DistanceOracle& oracle,
                                          const SolverConfig& cfg = {}, const detail::Deadline& deadline = {}) {
    if (cfg.strategy == Strategy::first_improvement)
        return detail::run_local_search(route, oracle, cfg, deadline, 4, detail::scan_three_opt,
                                        detail::apply_three_opt);

    return detail::run_pruned_search(route, oracle, cfg, deadline,
                                     [](const detail::PrunedScanner& s) { return s.scan_three_opt(); });
}

inline Route two_opt(const Route& route, const DistanceOracle& oracle, const SolverConfig& cfg = {}) {
    return two_opt_search(route, oracle, cfg).route;
}

inline Route three_opt(const Route& route, const DistanceOracle& oracle, const SolverConfig& cfg = {}) {
    return three_opt_search(route, oracle, cfg).route;
}

// ---------------------------------------------------------------------------
// Clusterization

/// For every client (1-based order), the depot with the smallest travel; ties
/// go to the lower depot index.
inline std::vector<std::int32_t> nearest_depots(const DistanceOracle& oracle) {
    const auto nd = oracle.depot_count();
    if (nd == 0) throw Error("instance has no depots");
    std::vector<std::int32_t> owner;
    owner.reserve(oracle.size() - nd);
    for (std::size_t c = nd; c < oracle.size(); ++c) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < nd; ++j)
            if (oracle.travel(j, c) < oracle.travel(best, c)) best = j;
        owner.push_back(static_cast<std::int32_t>(best + 1));
    }
    return owner;
}

/// Nearest-depot clusterization: per depot j, k_max copies of `D j` followed by
/// its clients in the requested construction order.
inline SolutionSequence cluster_nearest_depot(const DistanceOracle& oracle, std::int64_t max_vehicles,
                                              ConstructionOrder order = ConstructionOrder::generation) {
    const auto nd = oracle.depot_count();
    const auto owner = nearest_depots(oracle);
    std::vector<std::vector<std::int32_t>> members(nd);
    for (std::size_t c = 0; c < owner.size(); ++c)
        members[static_cast<std::size_t>(owner[c] - 1)].push_back(static_cast<std::int32_t>(c + 1));

    SolutionSequence seq;
    seq.entries.reserve(owner.size() + nd * static_cast<std::size_t>(max_vehicles));
    for (std::size_t j = 0; j < nd; ++j) {
        for (std::int64_t k = 0; k < max_vehicles; ++k) seq.entries.push_back(Token::depot(static_cast<std::int32_t>(j + 1)));
        auto& pool = members[j];
        if (order == ConstructionOrder::nearest_neighbor) {
            std::vector<bool> used(pool.size(), false);
            std::size_t at = j;
            for (std::size_t step = 0; step < pool.size(); ++step) {
                std::size_t pick = pool.size();
                for (std::size_t q = 0; q < pool.size(); ++q) {
                    if (used[q]) continue;
                    if (pick == pool.size() ||
                        oracle.travel(at, client_site(pool[q], nd)) < oracle.travel(at, client_site(pool[pick], nd)))
                        pick = q;
                }
                used[pick] = true;
                seq.entries.push_back(Token::client(pool[pick]));
                at = client_site(pool[pick], nd);
            }
        } else {
            for (auto c : pool) seq.entries.push_back(Token::client(c));
        }
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Whole-solution improvement

/// Runs the configured intra-route optimizer on every route of the partition.
/// Depot tokens and route membership are untouched, so f2 and f3 are preserved.
inline SolutionSequence improve(const SolutionSequence& seq, const DistanceOracle& oracle, const SolverConfig& cfg = {}) {
    if (cfg.optimizer == Optimizer::none) return seq;
    detail::Deadline deadline;
    if (cfg.time_budget)
        deadline.at = detail::Clock::now() +
                      std::chrono::duration_cast<detail::Clock::duration>(std::chrono::duration<double>(*cfg.time_budget));

    struct Run {
        std::size_t begin;
        Route route;
    };
    std::vector<Run> runs;
    std::int32_t owner = 1;
    for (std::size_t p = 0; p < seq.entries.size();) {
        if (seq.entries[p].is_depot()) {
            owner = seq.entries[p].index;
            ++p;
            continue;
        }
        Run run{p, Route{owner, {}, p == 0}};
        while (p < seq.entries.size() && seq.entries[p].is_client()) run.route.clients.push_back(seq.entries[p++].index);
        runs.push_back(std::move(run));
    }

    auto optimize = [&](Run& run) {
        run.route = cfg.optimizer == Optimizer::two_opt ? two_opt_search(run.route, oracle, cfg, deadline).route
                                                        : three_opt_search(run.route, oracle, cfg, deadline).route;
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(runs.size())));
    if (threads <= 1) {
        for (auto& r : runs) optimize(r);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t r = t; r < runs.size(); r += threads) optimize(runs[r]);
            });
    }

    SolutionSequence out = seq;
    for (const auto& run : runs)
        for (std::size_t q = 0; q < run.route.clients.size(); ++q)
            out.entries[run.begin + q] = Token::client(run.route.clients[q]);
    return out;
}

} // namespace fdvrp
