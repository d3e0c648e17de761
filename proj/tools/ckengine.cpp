#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckalg/dsl.hpp"
#include "ckalg/errors.hpp"
#include "ckalg/formats.hpp"
#include "ckalg/graph_moves.hpp"
#include "ckalg/script.hpp"

using nlohmann::json;
using namespace ckalg;

namespace {

struct Options {
    std::string mode = "exact";
    std::uint64_t seed = 0;
    std::string report;
    std::size_t level = 3;
};

GraphPtr load_graph(const std::string& path) {
    try {
        return parse_graph_text(read_file(path));
    } catch (const ParseError& err) {
        throw UsageError(path + ":" + std::to_string(err.line()) + ": " + err.bare_message());
    }
}

json standing_json(const StandingAssumptionReport& r) {
    return {{"transitive", r.transitive},
            {"all_cycles_have_exits", r.all_cycles_have_exits},
            {"sinks", r.sinks},
            {"sources", r.sources}};
}

void print_standing(const StandingAssumptionReport& r) {
    std::cout << "transitive: " << (r.transitive ? "yes" : "no") << "\n"
              << "every cycle has an exit: " << (r.all_cycles_have_exits ? "yes" : "no") << "\n";
    auto list = [](const std::vector<std::string>& names) {
        std::string out;
        for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
        return out.empty() ? std::string("none") : out;
    };
    std::cout << "sinks: " << list(r.sinks) << "\n"
              << "sources: " << list(r.sources) << "\n"
              << "standing assumption: " << (r.holds() ? "holds" : "FAILS") << "\n";
}

json blocks_json(const Graph& g, const std::vector<BlockEntry>& blocks) {
    json list = json::array();
    for (const auto& b : blocks)
        list.push_back({{"from", g.vertex_name(b.from)}, {"to", g.vertex_name(b.to)}, {"multiplicity", b.multiplicity}});
    return list;
}

void finish(const Options& opt, json report) {
    if (opt.report.empty()) return;
    write_report(report, opt.report);
}

int check_graph(const Options& opt, const std::string& path) {
    const GraphPtr g = load_graph(path);
    const auto standing = g->validate_standing_assumption();
    const auto blocks = block_structure_report(*g);
    std::cout << g->vertex_count() << " vertices, " << g->edge_count() << " edges\n";
    print_standing(standing);
    std::cout << "U(B) = " << unitary_group_summary(blocks) << "\n";

    json report = report_header(opt.mode, opt.seed);
    report["command"] = "check-graph";
    report["inputs"] = json::array({{{"path", path}, {"sha256", sha256_hex(read_file(path))}}});
    report["result"] = {{"vertices", g->vertex_count()},
                        {"edges", g->edge_count()},
                        {"standing", standing_json(standing)},
                        {"blocks", blocks_json(*g, blocks)},
                        {"unitary_group", unitary_group_summary(blocks)}};
    finish(opt, std::move(report));
    return standing.holds() ? exit_ok : exit_failed;
}

template <class K>
int hyp(const Options& opt, const std::string& graph_path, const std::string& unitary_path) {
    const GraphPtr g = load_graph(graph_path);
    std::vector<NamedUnitary<K>> unitaries;
    try {
        unitaries = parse_unitary_text<K>(read_file(unitary_path), [&](const std::string&) { return g; });
    } catch (const ParseError& err) {
        throw UsageError(unitary_path + ":" + std::to_string(err.line()) + ": " + err.bare_message());
    }
    if (unitaries.empty()) throw UsageError(unitary_path + ": no unitary declared");

    json results = json::array();
    bool all_hold = true;
    for (const auto& u : unitaries) {
        const auto r = hypothesis_check(u.unitary);
        all_hold = all_hold && r.holds;
        json entry = {{"unitary", u.name}, {"holds", r.holds}};
        std::cout << u.name << ": u D^1 u* != D^1 " << (r.holds ? "holds" : "fails (every block is monomial)");
        if (r.witness) {
            json edges = json::array();
            std::string text;
            for (EdgeId e : r.witness->edges) {
                edges.push_back(g->edge_name(e));
                text += (text.empty() ? "" : " + ") + ("S(" + g->edge_name(e) + ")*adj(S(" + g->edge_name(e) + "))");
            }
            entry["witness"] = {{"vertex", g->vertex_name(r.witness->vertex)}, {"edges", edges}};
            std::cout << "; witness p = " << text;
        }
        std::cout << "\n";
        results.push_back(std::move(entry));
    }

    json report = report_header(opt.mode, opt.seed);
    report["command"] = "hyp";
    report["inputs"] = json::array({{{"path", graph_path}, {"sha256", sha256_hex(read_file(graph_path))}},
                                    {{"path", unitary_path}, {"sha256", sha256_hex(read_file(unitary_path))}}});
    report["result"] = results;
    finish(opt, std::move(report));
    return all_hold ? exit_ok : exit_failed;
}

template <class K>
int outsplit(const Options& opt, const std::string& graph_path, const std::string& partition_path) {
    const GraphPtr g = load_graph(graph_path);
    std::optional<OutSplitPartition> part;
    try {
        part = parse_partition_text(read_file(partition_path), g);
    } catch (const ParseError& err) {
        throw UsageError(partition_path + ":" + std::to_string(err.line()) + ": " + err.bare_message());
    }
    const auto split = out_split(*part);
    const GraphPtr f = split.graph;
    std::cout << f->to_text();

    auto map = induced_images<K>(g, f, *part);
    const auto hom = verify_homomorphism(map);
    json checks = json::array();
    for (const auto& c : hom.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}});
        if (!c.passed) std::cout << "relation failed: " << c.name << "\n";
    }
    std::cout << "induced map is a *-homomorphism: " << (hom.passed() ? "yes" : "NO") << "\n";
    const auto diag = verify_diagonal_carry(map, opt.level);
    std::cout << "diagonal carried up to level " << opt.level << ": " << (diag.holds ? "yes" : "NO") << "\n";
    const auto standing = f->validate_standing_assumption();
    print_standing(standing);
    const auto blocks = block_structure_report(*f);
    std::cout << "U(B) of split graph = " << unitary_group_summary(blocks) << "\n";

    json report = report_header(opt.mode, opt.seed);
    report["command"] = "outsplit";
    report["inputs"] = json::array({{{"path", graph_path}, {"sha256", sha256_hex(read_file(graph_path))}},
                                    {{"path", partition_path}, {"sha256", sha256_hex(read_file(partition_path))}}});
    report["result"] = {{"graph", f->to_text()},
                        {"homomorphism", checks},
                        {"diagonal", {{"level", opt.level}, {"holds", diag.holds}}},
                        {"standing", standing_json(standing)},
                        {"blocks", blocks_json(*f, blocks)},
                        {"unitary_group", unitary_group_summary(blocks)}};
    finish(opt, std::move(report));
    return hom.passed() && diag.holds ? exit_ok : exit_failed;
}

template <class K>
int run(const Options& opt, const std::string& script) {
    RunOptions ro;
    ro.seed = opt.seed;
    if (!opt.report.empty()) ro.report_path = opt.report;
    return run_script<K>(script, ro).exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and floating-point computations in graph algebras"};
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--mode", opt.mode, "Scalar field: exact (Q(i)) or float (complex double)")
        ->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--seed", opt.seed, "Seed for randomized checks");
    app.add_option("--report", opt.report, "Write a JSON report to this file");

    std::string script, graph_path, second;
    auto* run_cmd = app.add_subcommand("run", "Execute a script");
    run_cmd->add_option("script", script)->required();
    auto* check_cmd = app.add_subcommand("check-graph", "Check the standing assumption on a graph file");
    check_cmd->add_option("graph", graph_path)->required();
    auto* hyp_cmd = app.add_subcommand("hyp", "Decide u D^1 u* != D^1 for each unitary in a file");
    hyp_cmd->add_option("graph", graph_path)->required();
    hyp_cmd->add_option("unitary", second)->required();
    auto* split_cmd = app.add_subcommand("outsplit", "Out-split a graph and verify the induced map");
    split_cmd->add_option("graph", graph_path)->required();
    split_cmd->add_option("partition", second)->required();
    split_cmd->add_option("--level", opt.level, "Path length up to which the diagonal is checked");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    const bool exact = opt.mode == "exact";
    try {
        if (*run_cmd) return exact ? run<GaussianRational>(opt, script) : run<Complex>(opt, script);
        if (*check_cmd) return check_graph(opt, graph_path);
        if (*hyp_cmd)
            return exact ? hyp<GaussianRational>(opt, graph_path, second) : hyp<Complex>(opt, graph_path, second);
        if (*split_cmd)
            return exact ? outsplit<GaussianRational>(opt, graph_path, second)
                         : outsplit<Complex>(opt, graph_path, second);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
