#include <doctest.h>

#include <cmath>

#include "ckalg/errors.hpp"
#include "ckalg/matrix_rep.hpp"
#include "ckalg/random.hpp"
#include "support.hpp"

using namespace ckalg;
using namespace testing;

namespace {

/// Spectral norm of a 2 x 2 Hermitian matrix from its closed-form eigenvalues.
double hermitian_norm(Complex a, Complex b, Complex d) {
    const double mean = (a.real() + d.real()) / 2;
    const double radius = std::sqrt(std::pow((a.real() - d.real()) / 2, 2) + std::norm(b));
    return std::max(std::abs(mean + radius), std::abs(mean - radius));
}

/// min over the four diagonal projections q of ‖m - q‖ for a 2 x 2 Hermitian m.
double delta_oracle(const Matrix<Complex>& m) {
    double best = INFINITY;
    for (int q1 = 0; q1 <= 1; ++q1)
        for (int q2 = 0; q2 <= 1; ++q2)
            best = std::min(best, hermitian_norm(m(0, 0) - double(q1), m(0, 1), m(1, 1) - double(q2)));
    return best;
}

template <class K>
Matrix<Complex> to_complex(const Matrix<K>& m) {
    Matrix<Complex> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = ScalarTraits<K>::to_complex(m(i, j));
    return out;
}

std::size_t brute_force_paths_into(const Graph& g, VertexId w, std::size_t k) {
    std::size_t count = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (k == 1) {
            count += g.range(edge_at(e)) == w;
            continue;
        }
        for (std::size_t f = 0; f < g.edge_count(); ++f)
            count += g.range(edge_at(e)) == g.source(edge_at(f)) && g.range(edge_at(f)) == w;
    }
    return count;
}

bool same(const Matrix<Q>& a, const Matrix<Q>& b) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) return false;
    return a.rows() == b.rows() && a.cols() == b.cols();
}

}  // namespace

TEST_CASE("level-two blocks of the example graph have sizes 8 and 5") {
    const auto g = two_vertex();
    const auto rep = represent(EQ::identity(g), 2);
    REQUIRE(rep.blocks.size() == 2);
    CHECK(rep.blocks[0].rows() == 8);
    CHECK(rep.blocks[1].rows() == 5);
    const auto a = g->adjacency_matrix();
    for (std::size_t w = 0; w < 2; ++w) {
        std::uint64_t column = 0;
        for (std::size_t u = 0; u < 2; ++u)
            for (std::size_t m = 0; m < 2; ++m) column += a[u][m] * a[m][w];
        CHECK(rep.blocks[w].rows() == column);
        CHECK(rep.blocks[w].rows() == brute_force_paths_into(*g, vertex_at(w), 2));
        CHECK(rep.bases[w].size() == column);
    }
}

TEST_CASE("the representation is a *-homomorphism") {
    for (const auto& g : sample_graphs()) {
        Rng rng(31);
        for (int t = 0; t < 20; ++t) {
            const auto x = random_core_element<Q>(g, rng, 2, 4);
            const auto y = random_core_element<Q>(g, rng, 1, 4);
            const auto rx = represent(x, 2), ry = represent(y, 2), rxy = represent(x * y, 2);
            const auto radj = represent(x.adjoint(), 2);
            for (std::size_t v = 0; v < rx.blocks.size(); ++v) {
                CHECK(same(rxy.blocks[v], rx.blocks[v] * ry.blocks[v]));
                CHECK(same(radj.blocks[v], rx.blocks[v].adjoint()));
            }
            CHECK(represent(x - x, 2).is_zero());
        }
    }
}

TEST_CASE("representation needs a core element of low enough level") {
    const auto g = o2();
    CHECK_THROWS_AS(represent(S(g, "e1"), 2), UsageError);
    CHECK_THROWS_AS(represent(S(g, "e1 e1") * S(g, "e1 e2").adjoint(), 1), UsageError);
}

TEST_CASE("operator norms against closed-form eigenvalues") {
    const auto g = o2();
    const EQ all = S(g, "e1") * S(g, "e1").adjoint() + S(g, "e1") * S(g, "e2").adjoint() +
                   S(g, "e2") * S(g, "e1").adjoint() + S(g, "e2") * S(g, "e2").adjoint();
    CHECK(operator_norm(all, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(operator_norm(all, 3) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(operator_norm(EQ::identity(g), 2) == doctest::Approx(1.0));
    CHECK(operator_norm(EQ(g), 2) == 0.0);

    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const auto x = random_core_element<Q>(g, rng, 1, 4);
        const auto h = x.adjoint() * x;
        const auto m = to_complex(represent(h, 1).blocks[0]);
        CHECK(operator_norm(x, 1) == doctest::Approx(std::sqrt(hermitian_norm(m(0, 0), m(0, 1), m(1, 1)))).epsilon(1e-9));
    }
}

TEST_CASE("central projections") {
    const auto g = two_vertex();
    const auto v1 = vid(g, "v1"), v2 = vid(g, "v2");
    CHECK(equals(central_projection<Q>(g, v1, v1), S(g, "a") * S(g, "a").adjoint() + S(g, "b") * S(g, "b").adjoint()));
    CHECK(equals(central_projection<Q>(g, v2, v1), S(g, "e") * S(g, "e").adjoint()));
    const auto sink_graph = Graph::create({"v", "w"}, {{"e", "v", "w"}, {"f", "w", "w"}});
    CHECK(central_projection<Q>(sink_graph, *sink_graph->find_vertex("w"), *sink_graph->find_vertex("v")).is_zero());
}

TEST_CASE("delta for the Hadamard block") {
    const auto g = o2();
    const double r = 1 / std::sqrt(2.0);
    Matrix<Complex> h(2, 2);
    h(0, 0) = r;
    h(0, 1) = r;
    h(1, 0) = r;
    h(1, 1) = -r;
    const auto u = BlockUnitary<Complex>::create(g, {{{vid(g, "v"), vid(g, "v")}, h}});
    const EC p = S<Complex>(g, "e1") * S<Complex>(g, "e1").adjoint();
    const auto result = compute_delta(u, p, vid(g, "v"));
    const EC x = u.to_element();
    const double oracle = delta_oracle(represent(x * p * x.adjoint(), 1).blocks[0]);
    CHECK(oracle == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
    CHECK(std::abs(result.value - 0.7071068) <= 1e-6);
    CHECK(result.value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK_FALSE(result.conjugate_in_diagonal);
}

TEST_CASE("delta vanishes exactly for a flip") {
    const auto g = o2();
    Matrix<Q> flip(2, 2);
    flip(0, 1) = Q(1);
    flip(1, 0) = Q(1);
    const auto u = BlockUnitary<Q>::create(g, {{{vid(g, "v"), vid(g, "v")}, flip}});
    const auto result = compute_delta(u, S(g, "e1") * S(g, "e1").adjoint(), vid(g, "v"));
    CHECK(result.value == 0.0);
    CHECK(result.conjugate_in_diagonal);
    REQUIRE(result.minimizer.size() == 1);
    CHECK(g->edge_name(result.minimizer[0]) == "e2");
}

TEST_CASE("delta agrees with exhaustive enumeration on random O2 unitaries") {
    const auto g = o2();
    Rng rng(99);
    const auto v = vid(g, "v");
    for (int t = 0; t < 40; ++t) {
        const auto u = random_block_unitary<Q>(g, rng, UnitaryShape::Mixed);
        const EQ x = u.to_element();
        for (const char* edge : {"e1", "e2"}) {
            const EQ p = S(g, edge) * S(g, edge).adjoint();
            const auto result = compute_delta(u, p, v);
            const auto m = to_complex(represent(x * p * x.adjoint(), 1).blocks[0]);
            CHECK(result.value == doctest::Approx(delta_oracle(m)).epsilon(1e-9));
            CHECK(result.conjugate_in_diagonal == is_member(x * p * x.adjoint(), Membership::diagonal(1)));
        }
    }
}

TEST_CASE("delta rejects a p outside the level-one diagonal under v") {
    const auto g = two_vertex();
    const auto u = BlockUnitary<Q>::identity(g);
    CHECK_THROWS_AS(compute_delta(u, S(g, "a") * S(g, "b").adjoint(), vid(g, "v1")), UsageError);
    CHECK_THROWS_AS(compute_delta(u, S(g, "d") * S(g, "d").adjoint(), vid(g, "v1")), UsageError);
    CHECK_THROWS_AS(compute_delta(u, Q(2) * (S(g, "a") * S(g, "a").adjoint()), vid(g, "v1")), UsageError);
}
