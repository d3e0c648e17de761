#include <doctest.h>

#include <algorithm>

#include "ckalg/dsl.hpp"
#include "ckalg/errors.hpp"
#include "ckalg/graph_moves.hpp"
#include "ckalg/random.hpp"
#include "support.hpp"

using namespace ckalg;
using namespace testing;

namespace {

std::vector<std::size_t> multiplicities(const Graph& g) {
    std::vector<std::size_t> out;
    for (const auto& b : block_structure_report(g)) out.push_back(b.multiplicity);
    std::sort(out.begin(), out.end());
    return out;
}

const char* example_map = R"(map phi : E -> O2
P(v1) = S(t1)*adj(S(t1))
P(v2) = S(t2)*adj(S(t2))
S(a) = S(t1 t1)*adj(S(t1))
S(b) = S(t1 t2 t1)*adj(S(t1))
S(c) = S(t1 t2 t2)*adj(S(t2))
S(d) = S(t2 t2)*adj(S(t2))
S(e) = S(t2 t1)*adj(S(t1))
)";

GraphPtr o2t() { return Graph::create({"v"}, {{"t1", "v", "v"}, {"t2", "v", "v"}}); }

GeneratorMap<Q> load_example_map() {
    const auto e = two_vertex();
    const auto o = o2t();
    auto maps = parse_map_text<Q>(example_map, [&](const std::string& name) { return name == "E" ? e : o; });
    REQUIRE(maps.size() == 1);
    return std::move(maps.front().map);
}

}  // namespace

TEST_CASE("splitting the two-loop graph gives four single-edge blocks") {
    const auto g = rose2();
    const auto part = OutSplitPartition::create(g, {{vid(g, "v"), {{eid(g, "f1")}, {eid(g, "f2")}}}});
    const auto split = out_split(part);
    CHECK(split.graph->to_text() == rose2_split()->to_text());
    CHECK(multiplicities(*g) == std::vector<std::size_t>{2});
    CHECK(multiplicities(*split.graph) == std::vector<std::size_t>{1, 1, 1, 1});
    CHECK(unitary_group_summary(block_structure_report(*g)) == "U(2)");
    CHECK(unitary_group_summary(block_structure_report(*split.graph)) == "U(1) x U(1) x U(1) x U(1)");
}

TEST_CASE("the trivial partition reproduces the graph") {
    for (const auto& g : sample_graphs()) {
        const auto split = out_split(OutSplitPartition::trivial(g));
        CHECK(split.graph->to_text() == g->to_text());
    }
}

TEST_CASE("partitions are validated") {
    const auto g = two_vertex();
    const auto v1 = vid(g, "v1");
    const auto a = eid(g, "a"), b = eid(g, "b"), c = eid(g, "c"), d = eid(g, "d");
    CHECK_THROWS_AS(OutSplitPartition::create(g, {{v1, {{a, b}}}}), UsageError);
    CHECK_THROWS_AS(OutSplitPartition::create(g, {{v1, {{a, b}, {c}, {}}}}), UsageError);
    CHECK_THROWS_AS(OutSplitPartition::create(g, {{v1, {{a, b}, {c, d}}}}), UsageError);
    CHECK_THROWS_AS(OutSplitPartition::create(g, {{v1, {{a, b}, {b, c}}}}), UsageError);
    CHECK_NOTHROW(OutSplitPartition::create(g, {{v1, {{a, c}, {b}}}}));
}

TEST_CASE("random out-splittings have the expected size and induce diagonal-preserving isomorphisms") {
    std::mt19937_64 graph_rng(4);
    std::vector<GraphPtr> graphs = sample_graphs();
    for (int i = 0; i < 4; ++i) graphs.push_back(random_standing_graph(graph_rng, 3));
    Rng rng(12);
    for (const auto& g : graphs) {
        for (int t = 0; t < 5; ++t) {
            const auto part = random_partition(g, rng);
            const auto split = out_split(part);
            const auto& f = split.graph;
            std::size_t vertices = 0, edges = 0;
            for (std::size_t v = 0; v < g->vertex_count(); ++v) vertices += part.class_count(vertex_at(v));
            for (std::size_t e = 0; e < g->edge_count(); ++e) edges += part.class_count(g->range(edge_at(e)));
            CHECK(f->vertex_count() == vertices);
            CHECK(f->edge_count() == edges);

            auto map = induced_images<Q>(g, f, part);
            CHECK_FALSE(verify_diagonal_carry(map, 1).holds);
            const auto hom = verify_homomorphism(map);
            CHECK(hom.passed());
            CHECK(map.verified());
            CHECK(verify_diagonal_carry(map, 3).holds);
            CHECK(f->validate_standing_assumption().holds() == g->validate_standing_assumption().holds());
        }
    }
}

TEST_CASE("induced images refuse an unrelated graph") {
    const auto g = rose2();
    const auto part = OutSplitPartition::trivial(g);
    CHECK_THROWS_AS(induced_images<Q>(g, two_vertex(), part), UsageError);
}

TEST_CASE("the O2 identification of the example graph") {
    auto map = load_example_map();
    CHECK_FALSE(map.verified());
    const auto report = verify_homomorphism(map);
    for (const auto& c : report.checks) {
        INFO(c.name);
        CHECK(c.passed);
    }
    CHECK(verify_diagonal_carry(map, 2).holds);

    const auto& e = map.source();
    const EQ x = S(e, "a b") * S(e, "c").adjoint();
    CHECK(equals(map.apply(x), map.apply(S(e, "a")) * map.apply(S(e, "b")) * map.apply(S(e, "c")).adjoint()));

    // a corrupted image breaks the relations and clears verification
    map.set_edge_image(eid(e, "a"), map.edge_image(eid(e, "b")));
    CHECK_FALSE(map.verified());
    CHECK_FALSE(verify_homomorphism(map).passed());
    CHECK_FALSE(verify_diagonal_carry(map, 1).holds);
}

TEST_CASE("a map that leaves the diagonal") {
    const auto o = o2t();
    const EQ t1 = S(o, "t1"), t2 = S(o, "t2");
    // lambda_w for a rotation w with every entry nonzero
    const Q c(mpq_class(3, 5)), s(mpq_class(4, 5));
    const EQ w = c * (t1 * t1.adjoint()) + s * (t1 * t2.adjoint()) - s * (t2 * t1.adjoint()) + c * (t2 * t2.adjoint());
    GeneratorMap<Q> map(o, o, {EQ::identity(o)}, {w * t1, w * t2});
    CHECK(verify_homomorphism(map).passed());
    const auto carry = verify_diagonal_carry(map, 1);
    CHECK_FALSE(carry.holds);
    REQUIRE(carry.failing_path.has_value());
    CHECK(carry.failing_path->length() == 1);
}
