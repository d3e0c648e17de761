#include "ckalg/random.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace ckalg {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

mpq_class random_rational(Rng& rng) {
    const long num = std::uniform_int_distribution<long>(-3, 3)(rng);
    const long den = std::uniform_int_distribution<long>(1, 3)(rng);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

GaussianRational nonzero_coefficient(Rng& rng) {
    for (;;) {
        auto c = random_coefficient(rng);
        if (!c.is_zero()) return c;
    }
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[uniform(rng, 0, items.size() - 1)];
}

const std::array<GaussianRational, 8>& phases() {
    static const std::array<GaussianRational, 8> table = {
        GaussianRational(1),
        GaussianRational(-1),
        GaussianRational(0, 1),
        GaussianRational(0, -1),
        GaussianRational(mpq_class(3, 5), mpq_class(4, 5)),
        GaussianRational(mpq_class(3, 5), mpq_class(-4, 5)),
        GaussianRational(mpq_class(-4, 5), mpq_class(3, 5)),
        GaussianRational(mpq_class(5, 13), mpq_class(12, 13)),
    };
    return table;
}

Matrix<GaussianRational> cayley_unitary(std::size_t n, Rng& rng) {
    using M = Matrix<GaussianRational>;
    M a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const long re = std::uniform_int_distribution<long>(-2, 2)(rng);
            const long im = std::uniform_int_distribution<long>(-2, 2)(rng);
            a(r, c) = GaussianRational(re, im);
        }
    // K = A - A^* is skew-Hermitian, so I + K is invertible and (I - K)(I + K)^{-1} is unitary.
    const M k = a - a.adjoint();
    const M id = M::identity(n);
    return (id - k) * (id + k).inverse();
}

Matrix<GaussianRational> monomial_unitary(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix<GaussianRational> m(n, n);
    for (std::size_t c = 0; c < n; ++c) m(perm[c], c) = phases()[uniform(rng, 0, phases().size() - 1)];
    return m;
}

}  // namespace

GaussianRational random_coefficient(Rng& rng) {
    return {random_rational(rng), random_rational(rng)};
}

template <class K>
Element<K> random_element(const GraphPtr& g, Rng& rng, std::size_t max_terms, std::size_t max_length) {
    std::vector<std::pair<TermKey, K>> terms;
    const std::size_t count = uniform(rng, 1, max_terms);
    while (terms.size() < count) {
        const auto mus = g->paths_of_length(uniform(rng, 0, max_length));
        if (mus.empty()) continue;
        const Path& mu = pick(rng, mus);
        const auto nus = g->paths_of_length(uniform(rng, 0, max_length), std::nullopt, mu.range());
        if (nus.empty()) continue;
        terms.emplace_back(TermKey{mu, pick(rng, nus)}, ScalarTraits<K>::from_exact(nonzero_coefficient(rng)));
    }
    return Element<K>::from_terms(g, std::move(terms));
}

template <class K>
Element<K> random_core_element(const GraphPtr& g, Rng& rng, std::size_t k, std::size_t max_terms) {
    const auto paths = g->paths_of_length(k);
    std::vector<std::pair<TermKey, K>> terms;
    const std::size_t count = uniform(rng, 1, max_terms);
    for (std::size_t i = 0; i < count; ++i) {
        const Path& mu = pick(rng, paths);
        const auto nus = g->paths_of_length(k, std::nullopt, mu.range());
        terms.emplace_back(TermKey{mu, pick(rng, nus)}, ScalarTraits<K>::from_exact(nonzero_coefficient(rng)));
    }
    return Element<K>::from_terms(g, std::move(terms));
}

template <class K>
Element<K> random_diagonal_element(const GraphPtr& g, Rng& rng, std::size_t k, std::size_t max_terms) {
    const auto paths = g->paths_of_length(k);
    std::vector<std::pair<TermKey, K>> terms;
    const std::size_t count = uniform(rng, 1, max_terms);
    for (std::size_t i = 0; i < count; ++i) {
        const Path& mu = pick(rng, paths);
        terms.emplace_back(TermKey{mu, mu}, ScalarTraits<K>::from_exact(nonzero_coefficient(rng)));
    }
    return Element<K>::from_terms(g, std::move(terms));
}

template <class K>
Element<K> random_block_element(const GraphPtr& g, Rng& rng, std::size_t max_terms) {
    std::vector<std::pair<TermKey, K>> terms;
    const std::size_t count = uniform(rng, 1, max_terms);
    for (std::size_t i = 0; i < count; ++i) {
        const EdgeId e = edge_at(uniform(rng, 0, g->edge_count() - 1));
        const auto parallel = g->edges_between(g->source(e), g->range(e));
        terms.emplace_back(TermKey{g->edge_path(e), g->edge_path(pick(rng, parallel))},
                           ScalarTraits<K>::from_exact(nonzero_coefficient(rng)));
    }
    return Element<K>::from_terms(g, std::move(terms));
}

Matrix<GaussianRational> random_unitary_matrix(std::size_t n, Rng& rng, UnitaryShape shape) {
    if (shape == UnitaryShape::Mixed)
        shape = uniform(rng, 0, 1) == 0 ? UnitaryShape::General : UnitaryShape::Monomial;
    return shape == UnitaryShape::General ? cayley_unitary(n, rng) : monomial_unitary(n, rng);
}

template <class K>
BlockUnitary<K> random_block_unitary(const GraphPtr& g, Rng& rng, UnitaryShape shape) {
    std::map<VertexPair, Matrix<K>> blocks;
    for (std::size_t v = 0; v < g->vertex_count(); ++v)
        for (std::size_t w = 0; w < g->vertex_count(); ++w) {
            const auto n = g->edges_between(vertex_at(v), vertex_at(w)).size();
            if (n == 0) continue;
            blocks.emplace(VertexPair{vertex_at(v), vertex_at(w)},
                           convert_matrix<K>(random_unitary_matrix(n, rng, shape)));
        }
    return BlockUnitary<K>::create(g, std::move(blocks));
}

OutSplitPartition random_partition(const GraphPtr& g, Rng& rng) {
    std::map<VertexId, std::vector<std::vector<EdgeId>>> classes;
    for (std::size_t i = 0; i < g->vertex_count(); ++i) {
        const VertexId v = vertex_at(i);
        auto out = g->out_edges(v);
        if (out.empty()) continue;
        std::vector<EdgeId> edges(out.begin(), out.end());
        std::shuffle(edges.begin(), edges.end(), rng);
        const std::size_t m = uniform(rng, 1, edges.size());
        std::vector<std::vector<EdgeId>> list(m);
        for (std::size_t j = 0; j < edges.size(); ++j)
            list[j < m ? j : uniform(rng, 0, m - 1)].push_back(edges[j]);
        classes.emplace(v, std::move(list));
    }
    return OutSplitPartition::create(g, std::move(classes));
}

#define CKALG_INSTANTIATE(K)                                                                           \
    template Element<K> random_element(const GraphPtr&, Rng&, std::size_t, std::size_t);              \
    template Element<K> random_core_element(const GraphPtr&, Rng&, std::size_t, std::size_t);         \
    template Element<K> random_diagonal_element(const GraphPtr&, Rng&, std::size_t, std::size_t);     \
    template Element<K> random_block_element(const GraphPtr&, Rng&, std::size_t);                     \
    template BlockUnitary<K> random_block_unitary(const GraphPtr&, Rng&, UnitaryShape);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
