#include <doctest.h>

#include <functional>
#include <set>

#include "ckalg/errors.hpp"
#include "support.hpp"

using namespace ckalg;
using namespace testing;

namespace {

using IntMatrix = std::vector<std::vector<std::uint64_t>>;

IntMatrix adjacency(const Graph& g) {
    IntMatrix a(g.vertex_count(), std::vector<std::uint64_t>(g.vertex_count(), 0));
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        ++a[index_of(g.source(edge_at(e)))][index_of(g.range(edge_at(e)))];
    return a;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.size(), std::vector<std::uint64_t>(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a.size(); ++k)
            for (std::size_t j = 0; j < a.size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

IntMatrix power(const IntMatrix& a, std::size_t k) {
    IntMatrix r(a.size(), std::vector<std::uint64_t>(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i][i] = 1;
    for (std::size_t t = 0; t < k; ++t) r = multiply(r, a);
    return r;
}

bool oracle_transitive(const Graph& g) {
    const auto a = adjacency(g);
    const std::size_t n = a.size();
    IntMatrix reach(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        const auto p = power(a, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) reach[i][j] += p[i][j] ? 1 : 0;
    }
    for (const auto& row : reach)
        for (auto x : row)
            if (!x) return false;
    return true;
}

/// Enumerates every simple cycle edge by edge and looks for one without an exit.
bool oracle_cycles_have_exits(const Graph& g) {
    bool ok = true;
    std::vector<EdgeId> cycle;
    std::vector<bool> on_path(g.vertex_count(), false);
    std::function<void(VertexId, VertexId)> walk = [&](VertexId start, VertexId at) {
        for (EdgeId e : g.out_edges(at)) {
            const VertexId next = g.range(e);
            if (next < start) continue;
            cycle.push_back(e);
            if (next == start) {
                std::set<std::size_t> edges_in, vertices_in;
                for (EdgeId c : cycle) {
                    edges_in.insert(index_of(c));
                    vertices_in.insert(index_of(g.source(c)));
                }
                bool has_exit = false;
                for (std::size_t f = 0; f < g.edge_count(); ++f)
                    if (vertices_in.count(index_of(g.source(edge_at(f)))) && !edges_in.count(f)) has_exit = true;
                ok = ok && has_exit;
            } else if (!on_path[index_of(next)]) {
                on_path[index_of(next)] = true;
                walk(start, next);
                on_path[index_of(next)] = false;
            }
            cycle.pop_back();
        }
    };
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        on_path[v] = true;
        walk(vertex_at(v), vertex_at(v));
        on_path[v] = false;
    }
    return ok;
}

}  // namespace

TEST_CASE("graph construction rejects malformed input") {
    CHECK_THROWS_AS(Graph::create({"v", "v"}, {}), UsageError);
    CHECK_THROWS_AS(Graph::create({"v"}, {{"e", "v", "w"}}), UsageError);
    CHECK_THROWS_AS(Graph::create({"v"}, {{"e", "v", "v"}, {"e", "v", "v"}}), UsageError);
    CHECK_THROWS_AS(Graph::create({}, {}), UsageError);
}

TEST_CASE("example graph has the expected adjacency") {
    const auto g = two_vertex();
    const auto a = g->adjacency_matrix();
    CHECK(a == CountMatrix{{2, 1}, {1, 1}});
    CHECK(g->edges_between(vid(g, "v1"), vid(g, "v1")).size() == 2);
    CHECK(g->paths_of_length(2).size() == 13);
    CHECK(g->count_paths_from(vid(g, "v1"), 2) == 8);
    CHECK(g->count_paths_from(vid(g, "v2"), 2) == 5);
}

TEST_CASE("path counts agree with adjacency matrix powers") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = random_graph(rng, 4, 7);
        const auto a = adjacency(*g);
        for (std::size_t k = 0; k <= 4; ++k) {
            const auto p = power(a, k);
            std::uint64_t total = 0;
            for (std::size_t v = 0; v < g->vertex_count(); ++v) {
                std::uint64_t row = 0;
                for (std::size_t w = 0; w < g->vertex_count(); ++w) {
                    row += p[v][w];
                    if (k > 0)
                        CHECK(g->paths_of_length(k, vertex_at(v), vertex_at(w)).size() == p[v][w]);
                }
                CHECK(g->count_paths_from(vertex_at(v), k) == row);
                total += row;
            }
            if (k > 0) CHECK(g->paths_of_length(k).size() == total);
        }
    }
}

TEST_CASE("paths are listed in lexicographic order and compose") {
    const auto g = two_vertex();
    const auto paths = g->paths_of_length(3);
    for (std::size_t i = 1; i < paths.size(); ++i) CHECK(paths[i - 1] < paths[i]);
    for (const auto& p : paths)
        for (std::size_t i = 1; i < p.length(); ++i) CHECK(g->range(p.edge(i - 1)) == g->source(p.edge(i)));
    const EdgeId bad[] = {eid(g, "a"), eid(g, "d")};
    CHECK_THROWS_AS(g->make_path(bad), UsageError);
}

TEST_CASE("standing assumption matches brute-force oracles") {
    std::mt19937_64 rng(5);
    int holding = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto g = random_graph(rng, 4, 8);
        const auto report = g->validate_standing_assumption();
        INFO(g->to_text());
        CHECK(report.transitive == oracle_transitive(*g));
        CHECK(report.all_cycles_have_exits == oracle_cycles_have_exits(*g));
        holding += report.holds();
    }
    CHECK(holding > 0);
}

TEST_CASE("standing assumption on the sample graphs") {
    for (const auto& g : sample_graphs()) CHECK(g->validate_standing_assumption().holds());

    const auto cycle = Graph::create({"v", "w"}, {{"e", "v", "w"}, {"f", "w", "v"}});
    const auto r = cycle->validate_standing_assumption();
    CHECK(r.transitive);
    CHECK_FALSE(r.all_cycles_have_exits);

    const auto sink = Graph::create({"v", "w"}, {{"e", "v", "w"}, {"f", "v", "v"}});
    const auto s = sink->validate_standing_assumption();
    CHECK_FALSE(s.holds());
    CHECK(s.sinks == std::vector<std::string>{"w"});
    CHECK(sink->has_sink());
}

TEST_CASE("graph text round-trips") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_graph(rng, 5, 8);
        const auto back = parse_graph_text(g->to_text());
        CHECK(back->to_text() == g->to_text());
    }
}

TEST_CASE("graph text errors carry line numbers") {
    auto line_of = [](std::string_view text) -> std::size_t {
        try {
            parse_graph_text(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("vertex v\nvertex v\n") == 2);
    CHECK(line_of("vertex v\n\nedge e : v -> w\n") == 3);
    CHECK(line_of("vertex v\nedge e : v -> v\nedge e : v -> v\n") == 3);
    CHECK(line_of("vertex v\nbogus\n") == 2);
    CHECK(line_of("# nothing\n") >= 1);
}
