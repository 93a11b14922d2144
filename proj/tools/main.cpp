#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fdvrp/cli.hpp"

namespace {

using fdvrp::cli::Format;

std::optional<std::filesystem::path> opt_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s;
}

} // namespace

int main(int argc, char** argv) {
    using namespace fdvrp;
    CLI::App app{"Food-delivery multi-depot VRP toolkit: street maps, instances, clusterization + 2-opt/3-opt"};
    app.require_subcommand(1);

    std::string model, instances, instance, solution, out, algo = "cluster+2opt", format = "text",
                                                           construction = "generation";
    int runs = 5;
    std::optional<std::uint64_t> seed_override;
    unsigned threads = 1;
    std::vector<std::string> algos{"cluster", "cluster+2opt", "cluster+3opt"};
    const std::map<std::string, Format> formats{{"text", Format::text}, {"csv", Format::csv}};

    auto add_model = [&](CLI::App* c) { c->add_option("--model", model, "street map model file")->required(); };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "csv"}));
    };
    auto add_construction = [&](CLI::App* c) {
        c->add_option("--construction", construction, "client order inside clusters before local search")
            ->check(CLI::IsMember({"generation", "nearest"}));
    };

    auto* validate = app.add_subcommand("validate", "parse a model and report streets, components and length");
    add_model(validate);

    auto* generate = app.add_subcommand("generate", "write one instance file per line of an instance list");
    add_model(generate);
    generate->add_option("--instances", instances, "instance list")->required();
    generate->add_option("--out", out, "output directory")->required();
    generate->add_option("--seed-override", seed_override, "use seed+i for the i-th instance");

    auto* solve = app.add_subcommand("solve", "clusterize and optimize one instance");
    add_model(solve);
    solve->add_option("--instance", instance, "instance file")->required();
    solve->add_option("--algo", algo, "algorithm")->check(CLI::IsMember({"cluster", "cluster+2opt", "cluster+3opt"}));
    solve->add_option("--runs", runs, "timed repetitions")->check(CLI::PositiveNumber);
    solve->add_option("--out", out, "solution file to write");
    solve->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    add_format(solve);
    add_construction(solve);

    auto* bench = app.add_subcommand("bench", "generate and solve every instance of a list, print a result table");
    add_model(bench);
    bench->add_option("--instances", instances, "instance list")->required();
    bench->add_option("--algo", algos, "algorithms")->check(CLI::IsMember({"cluster", "cluster+2opt", "cluster+3opt"}));
    bench->add_option("--runs", runs, "timed repetitions")->check(CLI::PositiveNumber);
    bench->add_option("--seed-override", seed_override, "use seed+i for the i-th instance");
    bench->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    add_format(bench);
    add_construction(bench);

    auto* evaluate = app.add_subcommand("evaluate", "objectives and feasibility of a solution file");
    add_model(evaluate);
    evaluate->add_option("--instance", instance, "instance file")->required();
    evaluate->add_option("--solution", solution, "solution file")->required();
    add_format(evaluate);

    auto* render = app.add_subcommand("render", "draw the map, sites and routes as SVG");
    add_model(render);
    render->add_option("--instance", instance, "instance file");
    render->add_option("--solution", solution, "solution file (needs --instance)");
    render->add_option("--out", out, "SVG file (default stdout)");

    auto* distances = app.add_subcommand("distances", "export the travel matrix of an instance");
    add_model(distances);
    distances->add_option("--instance", instance, "instance file")->required();
    distances->add_option("--out", out, "matrix file (default stdout)");
    distances->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    CityOptions city;
    auto* synth = app.add_subcommand("synth-map", "write the synthetic benchmark city");
    synth->add_option("--out", out, "model file (default stdout)");
    synth->add_option("--lines", city.lines, "grid lines per axis")->check(CLI::Range(2, 200));
    synth->add_option("--seed", city.seed, "layout seed");
    bool attribute_grid = false;
    synth->add_flag("--attribute-grid", attribute_grid, "write the 48-street attribute grid instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::bad_input;
    }

    const auto fmt = formats.at(format);
    const auto order = *cli::parse_construction(construction);
    auto& o = std::cout;
    auto& e = std::cerr;

    if (*validate) return cli::cmd_validate(model, o, e);
    if (*generate) return cli::cmd_generate(model, instances, out, seed_override, o, e);
    if (*solve) return cli::cmd_solve({model, instance, algo, runs, opt_path(out), fmt, order, threads}, o, e);
    if (*bench) return cli::cmd_bench({model, instances, algos, runs, seed_override, fmt, order, threads}, o, e);
    if (*evaluate) return cli::cmd_evaluate(model, instance, solution, fmt, o, e);
    if (*render) return cli::cmd_render(model, opt_path(instance), opt_path(solution), opt_path(out), o, e);
    if (*distances) return cli::cmd_distances(model, instance, opt_path(out), threads, o, e);
    if (*synth) return cli::cmd_synth_map(city, attribute_grid, opt_path(out), o, e);
    return cli::bad_input;
}
