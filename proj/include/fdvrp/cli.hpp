#pragma once

// Subcommands of the fdvrp tool. Each returns the process exit code:
// 0 success, 1 validation or feasibility failure, 2 I/O or parse failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fdvrp/core.hpp"
#include "fdvrp/error.hpp"
#include "fdvrp/heuristics.hpp"
#include "fdvrp/instgen.hpp"
#include "fdvrp/render.hpp"
#include "fdvrp/report.hpp"
#include "fdvrp/routing.hpp"
#include "fdvrp/streetmap.hpp"
#include "fdvrp/synthetic.hpp"

namespace fdvrp::cli {

enum Exit : int { ok = 0, failed = 1, bad_input = 2 };

class IoError : public Error {
public:
    using Error::Error;
};

enum class Format { text, csv };

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

/// Runs `body`, mapping library errors to exit codes and messages on `err`.
template <class F>
int guarded(std::ostream& err, F body) {
    try {
        return body();
    } catch (const UnreachableError& e) {
        err << "error: " << e.what() << '\n';
        return failed;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return bad_input;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
}

struct Algorithm {
    std::string name;
    Optimizer optimizer;
};

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
    if (s == "cluster") return Algorithm{"cluster", Optimizer::none};
    if (s == "cluster+2opt") return Algorithm{"cluster+2opt", Optimizer::two_opt};
    if (s == "cluster+3opt") return Algorithm{"cluster+3opt", Optimizer::three_opt};
    return std::nullopt;
}

inline std::optional<ConstructionOrder> parse_construction(std::string_view s) {
    if (s == "generation") return ConstructionOrder::generation;
    if (s == "nearest") return ConstructionOrder::nearest_neighbor;
    return std::nullopt;
}

/// Replaces every spec's seed by override + position in the list.
inline void apply_seed_override(std::vector<InstanceSpec>& specs, std::optional<std::uint64_t> seed) {
    if (!seed) return;
    for (std::size_t i = 0; i < specs.size(); ++i) specs[i].seed = *seed + i;
}

// ---------------------------------------------------------------------------

inline int cmd_validate(const std::filesystem::path& model_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto model = parse_model(read_file(model_path));
        const auto graph = build_graph(model);
        const auto comps = connected_components(graph);
        double total = 0.0;
        std::vector<std::string> zero;
        for (const auto& s : model.streets) {
            total += chain_length(s);
            if (street_weight(s, model.penalties) == 0.0) zero.push_back(s.name);
        }
        out << model.streets.size() << " streets, " << comps.count << (comps.count == 1 ? " component" : " components")
            << '\n';
        out << "vertices " << graph.vertices.size() << ", segments " << graph.edges.size() << '\n';
        out << "total length " << detail::fixed2(total) << " px (" << detail::fixed2(total * model.pixel_value / 3600.0)
            << " h)\n";
        out << "zero-weight streets " << zero.size() << '\n';
        for (const auto& n : zero) out << "  " << n << '\n';
        if (comps.count > 1)
            out << "warning: " << comps.count << " components; instances only use the one with the most sampling mass\n";
        return ok;
    });
}

inline int cmd_generate(const std::filesystem::path& model_path, const std::filesystem::path& instances_path,
                        const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed_override,
                        std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto model = parse_model(read_file(model_path));
        auto specs = parse_instances(read_file(instances_path));
        apply_seed_override(specs, seed_override);
        const auto graph = build_graph(model);
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
        for (const auto& spec : specs) {
            const auto inst = generate(model, graph, spec);
            const auto path = out_dir / (spec.name + ".txt");
            write_file(path, write_instance(inst));
            out << path.string() << '\n';
        }
        return ok;
    });
}

struct SolveOptions {
    std::filesystem::path model;
    std::filesystem::path instance;
    std::string algo = "cluster+2opt";
    int runs = 5;
    std::optional<std::filesystem::path> out; ///< solution file
    Format format = Format::text;
    ConstructionOrder construction = ConstructionOrder::generation;
    unsigned threads = 1;
};

struct SolveResult {
    SolutionSequence best;
    BenchRow row;
};

/// Clusterization plus optional local search, repeated `runs` times. Timing
/// covers construction and optimization, not the distance table.
inline SolveResult solve_instance(const Instance& inst, const DistanceOracle& oracle, const MapModel& model,
                                  const Algorithm& algo, int runs, ConstructionOrder construction,
                                  unsigned threads = 1) {
    if (runs < 1) throw Error("runs must be at least 1");
    SolveResult res;
    std::optional<Pixels> best_f1;
    std::vector<double> times;
    SolverConfig cfg;
    cfg.optimizer = algo.optimizer;
    cfg.threads = threads;
    for (int r = 0; r < runs; ++r) {
        const auto start = std::chrono::steady_clock::now();
        auto seq = cluster_nearest_depot(oracle, inst.spec.max_vehicles, construction);
        seq = improve(seq, oracle, cfg);
        times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
        const auto f = f1(seq, oracle);
        if (!best_f1 || f < *best_f1) {
            best_f1 = f;
            res.best = std::move(seq);
        }
    }
    const auto obj = evaluate(res.best, oracle);
    const auto t = timing_stats(times);
    res.row = {inst.spec.name, algo.name, round_hours(pixels_to_hours(obj.f1, model.pixel_value)),
               t.mean,         t.stddev,  obj.f2,
               obj.f3};
    return res;
}

inline int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto algo = parse_algorithm(opt.algo);
        if (!algo) throw Error("unknown algorithm '" + opt.algo + "'");
        const auto model = parse_model(read_file(opt.model));
        const auto inst = parse_instance(read_file(opt.instance), model);
        const auto graph = build_graph(model);
        const auto oracle = build_oracle(graph, inst, model, opt.threads);
        const auto res = solve_instance(inst, oracle, model, *algo, opt.runs, opt.construction, opt.threads);
        if (opt.out) write_file(*opt.out, write_solution({inst.spec.name, res.best}));
        out << (opt.format == Format::csv ? write_bench_csv({res.row}) : format_bench_text({res.row}));
        const auto rep = validate(res.best, {inst.spec.deliveries, inst.spec.depots, inst.spec.max_vehicles},
                                  inst.r_max, oracle);
        if (!rep.over_length_routes.empty())
            err << "note: " << rep.over_length_routes.size() << " route(s) exceed R_max " << inst.r_max << " px\n";
        return ok;
    });
}

struct BenchOptions {
    std::filesystem::path model;
    std::filesystem::path instances;
    std::vector<std::string> algos{"cluster", "cluster+2opt", "cluster+3opt"};
    int runs = 5;
    std::optional<std::uint64_t> seed_override;
    Format format = Format::text;
    ConstructionOrder construction = ConstructionOrder::generation;
    unsigned threads = 1;
};

/// Generates every instance of a spec file in memory and solves it with each algorithm.
inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<Algorithm> algos;
        for (const auto& a : opt.algos) {
            auto p = parse_algorithm(a);
            if (!p) throw Error("unknown algorithm '" + a + "'");
            algos.push_back(*p);
        }
        const auto model = parse_model(read_file(opt.model));
        auto specs = parse_instances(read_file(opt.instances));
        apply_seed_override(specs, opt.seed_override);
        const auto graph = build_graph(model);
        std::vector<BenchRow> rows;
        for (const auto& spec : specs) {
            const auto inst = generate(model, graph, spec);
            const auto oracle = build_oracle(graph, inst, model, opt.threads);
            for (const auto& a : algos)
                rows.push_back(solve_instance(inst, oracle, model, a, opt.runs, opt.construction, opt.threads).row);
        }
        out << (opt.format == Format::csv ? write_bench_csv(rows) : format_bench_text(rows));
        return ok;
    });
}

inline int cmd_evaluate(const std::filesystem::path& model_path, const std::filesystem::path& instance_path,
                        const std::filesystem::path& solution_path, Format format, std::ostream& out,
                        std::ostream& err) {
    return guarded(err, [&] {
        const auto model = parse_model(read_file(model_path));
        const auto inst = parse_instance(read_file(instance_path), model);
        const auto sol = parse_solution(read_file(solution_path));
        if (sol.instance != inst.spec.name)
            err << "warning: solution names instance '" << sol.instance << "', evaluating against '"
                << inst.spec.name << "'\n";
        const auto oracle = build_oracle(build_graph(model), inst, model);
        const auto rep = make_evaluation(inst.spec.name, sol.sequence,
                                         {inst.spec.deliveries, inst.spec.depots, inst.spec.max_vehicles}, inst.r_max,
                                         oracle, model.pixel_value);
        out << (format == Format::csv ? format_evaluation_csv(rep) : format_evaluation_text(rep));
        return rep.feasibility.feasible ? ok : failed;
    });
}

inline int cmd_render(const std::filesystem::path& model_path, const std::optional<std::filesystem::path>& instance_path,
                      const std::optional<std::filesystem::path>& solution_path,
                      const std::optional<std::filesystem::path>& out_svg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto model = parse_model(read_file(model_path));
        std::optional<Instance> inst;
        std::optional<SolutionSequence> sol;
        if (instance_path) inst = parse_instance(read_file(*instance_path), model);
        if (solution_path) {
            if (!inst) throw Error("--solution needs --instance");
            sol = parse_solution(read_file(*solution_path)).sequence;
        }
        const auto svg = render_svg({&model, inst ? &*inst : nullptr, sol ? &*sol : nullptr});
        if (out_svg) write_file(*out_svg, svg);
        else out << svg;
        return ok;
    });
}

inline int cmd_distances(const std::filesystem::path& model_path, const std::filesystem::path& instance_path,
                         const std::optional<std::filesystem::path>& out_path, unsigned threads, std::ostream& out,
                         std::ostream& err) {
    return guarded(err, [&] {
        const auto model = parse_model(read_file(model_path));
        const auto inst = parse_instance(read_file(instance_path), model);
        const auto matrix = write_matrix(build_oracle(build_graph(model), inst, model, threads));
        if (out_path) write_file(*out_path, matrix);
        else out << matrix;
        return ok;
    });
}

/// Writes the synthetic benchmark city, or the 48-street attribute grid.
inline int cmd_synth_map(const CityOptions& opt, bool attribute_grid, const std::optional<std::filesystem::path>& out_path,
                         std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto text = serialize_model(attribute_grid ? make_attribute_grid() : make_synthetic_city(opt));
        if (out_path) write_file(*out_path, text);
        else out << text;
        return ok;
    });
}

} // namespace fdvrp::cli
