#include "histq/errors.hpp"
#include "histq/pathint.hpp"
#include "histq/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1; // parse or validation failure
constexpr int kExitEngine = 2; // well-formed input the engine cannot honour

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw histq::ValidationError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string doc_name(const std::string& path) {
    const std::string stem = std::filesystem::path(path).stem().string();
    return stem.empty() ? "scenario" : stem;
}

void print_diagnostics(const std::string& path, const histq::ParseError& e) {
    for (const auto& d : e.diagnostics()) {
        std::cerr << path << ':' << d.line << ':' << d.column << ": error: " << d.message << '\n';
    }
}

int cmd_run(const std::string& path, const std::string& format) {
    const histq::ScenarioDocument doc = histq::parse(read_file(path), doc_name(path));
    const std::vector<histq::QueryResult> results = histq::run_queries(doc);
    std::cout << (format == "json" ? histq::format_json(doc, results)
                                   : histq::format_table(doc, results));
    return kExitOk;
}

int cmd_check(const std::string& path) {
    const histq::ScenarioDocument doc = histq::parse(read_file(path), doc_name(path));
    histq::require_valid(doc.to_schedule());
    std::cout << "ok: " << doc.name << " (dim " << doc.dim << ", " << doc.slots.size()
              << " slots, " << doc.queries.size() << " queries)\n";
    return kExitOk;
}

int cmd_examples(const std::string& which) {
    const auto& texts = histq::golden_scenario_texts();
    if (which == "list") {
        for (const auto& [name, text] : texts) std::cout << name << '\n';
        return kExitOk;
    }
    for (const auto& [name, text] : texts) {
        if (name == which) {
            std::cout << text;
            return kExitOk;
        }
    }
    throw histq::ValidationError("no example named '" + which + "' (try 'examples list')");
}

int cmd_pathint(const std::string& kind, std::size_t grid, double spacing, double t,
                std::size_t slices, std::size_t from, std::optional<std::size_t> to,
                const std::string& format) {
    const histq::GridSystem g = (kind == "oscillator") ? histq::harmonic_oscillator(grid, spacing)
                                                       : histq::free_particle(grid, spacing);
    const histq::TimeSlicing ts{0.0, t, slices};
    if (from >= grid) throw histq::ValidationError("--from is outside the grid");
    if (to && *to >= grid) throw histq::ValidationError("--to is outside the grid");

    std::vector<std::pair<std::size_t, double>> rows;
    if (to) {
        rows.emplace_back(*to, histq::propagation_probability(g, ts, from, *to));
    } else {
        for (std::size_t j = 0; j < grid; ++j) {
            rows.emplace_back(j, histq::propagation_probability(g, ts, from, j));
        }
    }

    if (format == "json") {
        nlohmann::ordered_json root;
        root["system"] = kind;
        root["points"] = grid;
        root["spacing"] = spacing;
        root["t"] = t;
        root["slices"] = slices;
        root["from"] = from;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [j, p] : rows) {
            arr.push_back(nlohmann::ordered_json{{"to", j}, {"value", p}});
        }
        root["probabilities"] = std::move(arr);
        std::cout << root.dump(2) << '\n';
    } else {
        std::cout << "pathint: " << kind << ", " << grid << " points, spacing " << spacing
                  << ", t " << t << ", " << slices << " slices, from q" << from << '\n';
        char buf[64];
        for (const auto& [j, p] : rows) {
            std::snprintf(buf, sizeof(buf), "%.12g", p);
            std::cout << "  p(q" << from << " -> q" << j << ") = " << buf << '\n';
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"history-operator scenarios: weights, records, collapse, sums over paths"};
    app.require_subcommand(1);

    std::string run_path, run_format = "table";
    CLI::App* run = app.add_subcommand("run", "parse a scenario file and answer its queries");
    run->add_option("file", run_path, "scenario file")->required();
    run->add_option("--format", run_format, "output format")
        ->check(CLI::IsMember({"table", "json"}));

    std::string check_path;
    CLI::App* check = app.add_subcommand("check", "parse and validate a scenario file");
    check->add_option("file", check_path, "scenario file")->required();

    std::string example_name = "list";
    CLI::App* examples = app.add_subcommand("examples", "print a built-in scenario (or list them)");
    examples->add_option("name", example_name, "example name, or 'list'");

    std::string pi_kind = "free", pi_format = "table";
    std::size_t pi_grid = 0, pi_slices = 1, pi_from = 0;
    std::optional<std::size_t> pi_to;
    double pi_t = 1.0, pi_spacing = 1.0;
    CLI::App* pathint = app.add_subcommand("pathint", "grid-particle propagation by summing paths");
    pathint->add_option("--grid", pi_grid, "number of grid points")->required();
    pathint->add_option("--slices", pi_slices, "number of time slices")->required();
    pathint->add_option("--hamiltonian", pi_kind, "free | oscillator")
        ->check(CLI::IsMember({"free", "oscillator"}));
    pathint->add_option("--t", pi_t, "total evolution time")->required();
    pathint->add_option("--from", pi_from, "starting grid point (default 0)");
    pathint->add_option("--to", pi_to, "ending grid point (default: all)");
    pathint->add_option("--spacing", pi_spacing, "grid spacing (default 1)");
    pathint->add_option("--format", pi_format, "output format")
        ->check(CLI::IsMember({"table", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_path, run_format);
        if (check->parsed()) return cmd_check(check_path);
        if (examples->parsed()) return cmd_examples(example_name);
        if (pathint->parsed()) {
            return cmd_pathint(pi_kind, pi_grid, pi_spacing, pi_t, pi_slices, pi_from, pi_to,
                               pi_format);
        }
    } catch (const histq::ParseError& e) {
        print_diagnostics(run->parsed() ? run_path : check_path, e);
        return kExitInvalid;
    } catch (const histq::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const histq::EngineError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEngine;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitEngine;
    }
    return kExitOk;
}
