#pragma once

// Depot-interleaved permutation encoding, route partition, objectives and
// feasibility.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fdvrp/detail/text.hpp"
#include "fdvrp/error.hpp"
#include "fdvrp/routing.hpp"

namespace fdvrp {

/// One entry of a solution sequence. Indices are 1-based, as in solution files.
struct Token {
    enum class Kind : std::uint8_t { client, depot };

    Kind kind = Kind::client;
    std::int32_t index = 1;

    static constexpr Token client(std::int32_t i) { return {Kind::client, i}; }
    static constexpr Token depot(std::int32_t j) { return {Kind::depot, j}; }

    bool is_depot() const { return kind == Kind::depot; }
    bool is_client() const { return kind == Kind::client; }

    friend bool operator==(const Token&, const Token&) = default;
};

/// A permutation of S(C, k_max): every client once, every depot k_max times.
struct SolutionSequence {
    std::vector<Token> entries;

    friend bool operator==(const SolutionSequence&, const SolutionSequence&) = default;
};

struct Route {
    std::int32_t depot = 1;
    std::vector<std::int32_t> clients;
    /// Built from clients preceding the first depot token; owned by depot 1.
    bool prefix = false;

    friend bool operator==(const Route&, const Route&) = default;
};

struct ObjectiveVector {
    Pixels f1 = 0;      ///< total route cost
    std::int64_t f2 = 0; ///< non-empty routes
    double f3 = 0.0;    ///< population std-dev of per-depot delivery counts
};

struct ProblemSize {
    std::int64_t clients = 0;
    std::int64_t depots = 0;
    std::int64_t max_vehicles = 0;
};

/// Site index of a 1-based depot or client id in an instance's site list.
inline std::size_t depot_site(std::int32_t depot) { return static_cast<std::size_t>(depot - 1); }
inline std::size_t client_site(std::int32_t client, std::size_t depot_count) {
    return depot_count + static_cast<std::size_t>(client - 1);
}

inline SolutionSequence canonical_sequence(std::int64_t n, std::int64_t depots, std::int64_t k_max) {
    if (n < 1 || depots < 1 || k_max < 1) throw Error("canonical sequence needs positive counts");
    SolutionSequence seq;
    seq.entries.reserve(static_cast<std::size_t>(n + depots * k_max));
    for (std::int32_t i = 1; i <= n; ++i) seq.entries.push_back(Token::client(i));
    for (std::int32_t j = 1; j <= depots; ++j)
        for (std::int64_t k = 0; k < k_max; ++k) seq.entries.push_back(Token::depot(j));
    return seq;
}

/// Splits the sequence at every depot token; routes without clients are dropped.
inline std::vector<Route> particao(const SolutionSequence& seq) {
    std::vector<Route> routes;
    Route current{1, {}, true};
    for (const auto& t : seq.entries) {
        if (t.is_depot()) {
            if (!current.clients.empty()) routes.push_back(std::move(current));
            current = Route{t.index, {}, false};
        } else {
            current.clients.push_back(t.index);
        }
    }
    if (!current.clients.empty()) routes.push_back(std::move(current));
    return routes;
}

inline bool has_prefix_route(const SolutionSequence& seq) {
    return !seq.entries.empty() && seq.entries.front().is_client();
}

/// W(R): cost of the closed walk depot, c1, ..., cm, depot under w.
inline Pixels route_cost(const Route& route, const DistanceOracle& oracle) {
    const auto nd = oracle.depot_count();
    auto prev = depot_site(route.depot);
    Pixels total = 0;
    for (auto c : route.clients) {
        const auto site = client_site(c, nd);
        total += oracle.cost(prev, site);
        prev = site;
    }
    total += oracle.cost(prev, depot_site(route.depot));
    return total;
}

inline Pixels f1(const SolutionSequence& seq, const DistanceOracle& oracle) {
    Pixels total = 0;
    for (const auto& r : particao(seq)) total += route_cost(r, oracle);
    return total;
}

inline std::int64_t f2(const SolutionSequence& seq) { return static_cast<std::int64_t>(particao(seq).size()); }

/// |Entregas(pi_j)| for j = 1..depots; prefix clients count for depot 1.
inline std::vector<std::int64_t> deliveries_per_depot(const SolutionSequence& seq, std::int64_t depots) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(depots), 0);
    for (const auto& r : particao(seq)) {
        if (r.depot < 1 || r.depot > depots) throw Error("depot " + std::to_string(r.depot) + " out of range");
        counts[static_cast<std::size_t>(r.depot - 1)] += static_cast<std::int64_t>(r.clients.size());
    }
    return counts;
}

inline double population_stddev(const std::vector<std::int64_t>& counts) {
    if (counts.empty()) return 0.0;
    double mean = 0.0;
    for (auto c : counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(counts.size());
    double var = 0.0;
    for (auto c : counts) var += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
    return std::sqrt(var / static_cast<double>(counts.size()));
}

inline double f3(const SolutionSequence& seq, std::int64_t depots) {
    return population_stddev(deliveries_per_depot(seq, depots));
}

inline ObjectiveVector evaluate(const SolutionSequence& seq, const DistanceOracle& oracle) {
    return {f1(seq, oracle), f2(seq), f3(seq, static_cast<std::int64_t>(oracle.depot_count()))};
}

/// f1 in hours, as reported in result tables.
inline double pixels_to_hours(Pixels px, double pixel_value) {
    return static_cast<double>(px) * pixel_value / 3600.0;
}

// ---------------------------------------------------------------------------
// Feasibility

struct OverLengthRoute {
    std::size_t route_index = 0; ///< position in particao()
    Route route;
    Pixels cost = 0;
    Pixels r_max = 0;
};

struct FeasibilityReport {
    bool valid_multiset = false;
    std::vector<std::string> multiset_problems;
    std::vector<OverLengthRoute> over_length_routes;
    bool prefix_route = false;
    bool feasible = false;
};

/// Checks the token multiset against S(C, k_max) and every route against R_max.
/// Route lengths are only evaluated when all token indices are in range.
inline FeasibilityReport validate(const SolutionSequence& seq, const ProblemSize& size, Pixels r_max,
                                  const DistanceOracle& oracle) {
    FeasibilityReport rep;
    rep.prefix_route = has_prefix_route(seq);
    std::vector<std::int64_t> client_seen(static_cast<std::size_t>(size.clients), 0);
    std::vector<std::int64_t> depot_seen(static_cast<std::size_t>(size.depots), 0);
    bool indices_ok = true;
    for (const auto& t : seq.entries) {
        if (t.is_client()) {
            if (t.index < 1 || t.index > size.clients) {
                rep.multiset_problems.push_back("client " + std::to_string(t.index) + " out of range");
                indices_ok = false;
            } else {
                ++client_seen[static_cast<std::size_t>(t.index - 1)];
            }
        } else {
            if (t.index < 1 || t.index > size.depots) {
                rep.multiset_problems.push_back("depot " + std::to_string(t.index) + " out of range");
                indices_ok = false;
            } else {
                ++depot_seen[static_cast<std::size_t>(t.index - 1)];
            }
        }
    }
    for (std::size_t i = 0; i < client_seen.size(); ++i)
        if (client_seen[i] != 1)
            rep.multiset_problems.push_back("client " + std::to_string(i + 1) + " appears " +
                                            std::to_string(client_seen[i]) + " times");
    for (std::size_t j = 0; j < depot_seen.size(); ++j)
        if (depot_seen[j] != size.max_vehicles)
            rep.multiset_problems.push_back("depot " + std::to_string(j + 1) + " appears " +
                                            std::to_string(depot_seen[j]) + " times, expected " +
                                            std::to_string(size.max_vehicles));
    rep.valid_multiset = rep.multiset_problems.empty();

    if (indices_ok && oracle.depot_count() == static_cast<std::size_t>(size.depots) &&
        oracle.size() == static_cast<std::size_t>(size.depots + size.clients)) {
        const auto routes = particao(seq);
        for (std::size_t r = 0; r < routes.size(); ++r) {
            const auto c = route_cost(routes[r], oracle);
            if (c > r_max) rep.over_length_routes.push_back({r, routes[r], c, r_max});
        }
    }
    rep.feasible = rep.valid_multiset && rep.over_length_routes.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Solution files: `INSTANCE name`, then one `C i` / `D j` per line.

struct SolutionFile {
    std::string instance;
    SolutionSequence sequence;

    friend bool operator==(const SolutionFile&, const SolutionFile&) = default;
};

inline std::string write_solution(const SolutionFile& sol) {
    std::string out = "INSTANCE " + sol.instance + '\n';
    for (const auto& t : sol.sequence.entries) {
        out += t.is_depot() ? "D " : "C ";
        out += std::to_string(t.index);
        out += '\n';
    }
    return out;
}

inline SolutionFile parse_solution(std::string_view text) {
    using namespace detail;
    SolutionFile sol;
    bool have_header = false;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto lineno = i + 1;
        if (is_comment_or_blank(lines[i])) continue;
        const auto f = split_ws(lines[i]);
        if (!have_header) {
            if (f.size() != 2 || f[0] != "INSTANCE") throw ParseError(lineno, "expected 'INSTANCE <name>'");
            sol.instance = std::string(f[1]);
            have_header = true;
            continue;
        }
        if (f.size() != 2 || (f[0] != "C" && f[0] != "D")) throw ParseError(lineno, "expected 'C <i>' or 'D <j>'");
        const auto idx = parse_int<std::int32_t>(f[1]);
        if (!idx || *idx < 1) throw ParseError(lineno, "invalid index '" + std::string(f[1]) + "'");
        sol.sequence.entries.push_back(f[0] == "C" ? Token::client(*idx) : Token::depot(*idx));
    }
    if (!have_header) throw ParseError(0, "missing INSTANCE header");
    return sol;
}

} // namespace fdvrp
