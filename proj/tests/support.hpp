#pragma once

#include <random>
#include <string>
#include <vector>

#include "ckalg/element.hpp"
#include "ckalg/formats.hpp"
#include "ckalg/graph.hpp"

namespace testing {

using ckalg::Complex;
using ckalg::Element;
using ckalg::GaussianRational;
using ckalg::GraphPtr;

using Q = GaussianRational;
using EQ = Element<Q>;
using EC = Element<Complex>;

inline GraphPtr o2() { return ckalg::Graph::create({"v"}, {{"e1", "v", "v"}, {"e2", "v", "v"}}); }

/// Two vertices: loops a, b at v1, c: v1 -> v2, loop d at v2, e: v2 -> v1.
inline GraphPtr two_vertex() {
    return ckalg::Graph::create(
        {"v1", "v2"},
        {{"a", "v1", "v1"}, {"b", "v1", "v1"}, {"c", "v1", "v2"}, {"d", "v2", "v2"}, {"e", "v2", "v1"}});
}

inline GraphPtr rose2() { return ckalg::Graph::create({"v"}, {{"f1", "v", "v"}, {"f2", "v", "v"}}); }

/// The out-splitting of rose2 along {f1} | {f2}, written out by hand.
inline GraphPtr rose2_split() {
    return ckalg::Graph::create({"v^1", "v^2"}, {{"f1^1", "v^1", "v^1"},
                                                 {"f1^2", "v^1", "v^2"},
                                                 {"f2^1", "v^2", "v^1"},
                                                 {"f2^2", "v^2", "v^2"}});
}

inline std::vector<GraphPtr> sample_graphs() { return {o2(), two_vertex(), rose2_split()}; }

inline ckalg::VertexId vid(const GraphPtr& g, const std::string& name) { return *g->find_vertex(name); }
inline ckalg::EdgeId eid(const GraphPtr& g, const std::string& name) { return *g->find_edge(name); }

template <class K = Q>
Element<K> S(const GraphPtr& g, const std::string& edges) {
    std::vector<ckalg::EdgeId> path;
    std::string word;
    for (char ch : edges + " ") {
        if (ch != ' ') {
            word += ch;
        } else if (!word.empty()) {
            path.push_back(eid(g, word));
            word.clear();
        }
    }
    return Element<K>::path(g, g->make_path(path));
}

template <class K = Q>
Element<K> P(const GraphPtr& g, const std::string& v) {
    return Element<K>::vertex(g, vid(g, v));
}

/// A random multigraph on 1..max_vertices vertices; sinks and sources allowed.
inline GraphPtr random_graph(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_edges) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, max_edges)(rng);
    std::vector<std::string> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));
    std::vector<ckalg::EdgeDecl> edges;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < m; ++i)
        edges.push_back({"e" + std::to_string(i), vertices[pick(rng)], vertices[pick(rng)]});
    return ckalg::Graph::create(vertices, edges);
}

/// A random graph satisfying the standing assumption: a Hamiltonian cycle
/// plus extra edges, with at least one extra edge from every vertex.
inline GraphPtr random_standing_graph(std::mt19937_64& rng, std::size_t max_vertices) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
    std::vector<std::string> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));
    std::vector<ckalg::EdgeDecl> edges;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({"c" + std::to_string(i), vertices[i], vertices[(i + 1) % n]});
        edges.push_back({"x" + std::to_string(i), vertices[i], vertices[pick(rng)]});
    }
    return ckalg::Graph::create(vertices, edges);
}

}  // namespace testing
