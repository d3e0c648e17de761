#include "ckalg/endo.hpp"

#include <string>

#include "ckalg/errors.hpp"
#include "ckalg/structure_maps.hpp"

namespace ckalg {

template <class K>
BlockUnitary<K> BlockUnitary<K>::create(GraphPtr g, std::map<VertexPair, Matrix<K>> given) {
    std::map<VertexPair, Matrix<K>> blocks;
    const auto n = g->vertex_count();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            VertexPair key{vertex_at(i), vertex_at(j)};
            const auto size = g->edges_between(key.first, key.second).size();
            auto it = given.find(key);
            if (it == given.end()) {
                if (size > 0) blocks.emplace(key, Matrix<K>::identity(size));
                continue;
            }
            const std::string where =
                "block " + g->vertex_name(key.first) + " -> " + g->vertex_name(key.second);
            if (size == 0) throw UsageError(where + ": no edges between these vertices");
            if (it->second.rows() != size || it->second.cols() != size)
                throw UsageError(where + ": expected a " + std::to_string(size) + "x" +
                                 std::to_string(size) + " matrix");
            if (!it->second.is_unitary()) throw UsageError(where + " is not unitary");
            blocks.emplace(key, std::move(it->second));
            given.erase(it);
        }
    }
    if (!given.empty()) throw UsageError("block refers to a vertex outside the graph");
    return BlockUnitary(std::move(g), std::move(blocks));
}

template <class K>
BlockUnitary<K> BlockUnitary<K>::identity(GraphPtr g) {
    return create(std::move(g), {});
}

template <class K>
const Matrix<K>& BlockUnitary<K>::block(VertexId v, VertexId w) const {
    auto it = blocks_.find({v, w});
    if (it == blocks_.end()) throw UsageError("no block between these vertices");
    return it->second;
}

template <class K>
Element<K> BlockUnitary<K>::to_element() const {
    std::vector<std::pair<TermKey, K>> raw;
    for (const auto& [key, m] : blocks_) {
        auto edges = graph_->edges_between(key.first, key.second);
        for (std::size_t r = 0; r < edges.size(); ++r)
            for (std::size_t c = 0; c < edges.size(); ++c)
                raw.emplace_back(TermKey{graph_->edge_path(edges[r]), graph_->edge_path(edges[c])},
                                 m(r, c));
    }
    return Element<K>::from_terms(graph_, std::move(raw));
}

template <class K>
BlockUnitary<K> BlockUnitary<K>::adjoint() const {
    std::map<VertexPair, Matrix<K>> blocks;
    for (const auto& [key, m] : blocks_) blocks.emplace(key, m.adjoint());
    return BlockUnitary(graph_, std::move(blocks));
}

template <class K>
BlockUnitary<K> compose_quasifree(const BlockUnitary<K>& u, const BlockUnitary<K>& w) {
    if (u.graph_ptr() != w.graph_ptr()) throw UsageError("block unitaries on different graphs");
    std::map<VertexPair, Matrix<K>> blocks;
    for (const auto& [key, m] : u.blocks()) blocks.emplace(key, m * w.block(key.first, key.second));
    return BlockUnitary<K>::create(u.graph_ptr(), std::move(blocks));
}

template <class K>
UnitaryClassification verify_unitary(const Element<K>& u) {
    UnitaryClassification result;
    result.approximate = !ScalarTraits<K>::exact;
    if (!is_member(u, Membership::vertex_commutant())) return result;
    const auto one = Element<K>::identity(u.graph_ptr());
    const auto u_star = u.adjoint();
    if (!equals(u_star * u, one) || !equals(u * u_star, one)) return result;
    result.in_vertex_commutant_unitaries = true;
    result.in_block_unitaries = is_member(u, Membership::block_algebra());
    result.in_core_unitaries = is_member(u, Membership::core());
    return result;
}

template <class K>
Element<K> cocycle_chain(const Element<K>& u, std::size_t k) {
    Element<K> chain = Element<K>::identity(u.graph_ptr());
    Element<K> shifted = u;
    for (std::size_t i = 0; i < k; ++i) {
        chain = chain * shifted;
        if (i + 1 < k) shifted = shift(shifted);
    }
    return chain;
}

template <class K>
Endomorphism<K>::Endomorphism(Element<K> u) : u_(std::move(u)) {
    if (!verify_unitary(u_).in_vertex_commutant_unitaries)
        throw UsageError("λ_u needs a unitary commuting with every vertex projection");
}

template <class K>
Element<K> Endomorphism<K>::operator()(const Element<K>& x) const {
    if (x.graph_ptr() != u_.graph_ptr()) throw UsageError("λ_u applied to an element of another graph");

    // Group the terms by (|μ|, |ν|) so each chain factor multiplies once.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<TermKey, K>>> by_lengths;
    std::size_t longest = 0;
    for (const auto& [key, c] : x.terms()) {
        by_lengths[{key.mu.length(), key.nu.length()}].emplace_back(key, c);
        longest = std::max({longest, key.mu.length(), key.nu.length()});
    }

    std::vector<Element<K>> chain;
    chain.reserve(longest + 1);
    chain.push_back(Element<K>::identity(u_.graph_ptr()));
    Element<K> shifted = u_;
    for (std::size_t k = 1; k <= longest; ++k) {
        chain.push_back(chain.back() * shifted);
        if (k < longest) shifted = shift(shifted);
    }

    Element<K> result(u_.graph_ptr());
    for (auto& [lengths, terms] : by_lengths) {
        auto part = Element<K>::from_terms(u_.graph_ptr(), std::move(terms));
        result += chain[lengths.first] * part * chain[lengths.second].adjoint();
    }
    return result;
}

template <class K>
HypothesisResult hypothesis_check(const BlockUnitary<K>& u) {
    HypothesisResult result;
    for (const auto& [key, m] : u.blocks()) {
        // A unitary block is monomial iff every column has a single non-zero entry.
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::size_t nonzero = 0;
            for (std::size_t r = 0; r < m.rows(); ++r)
                if (!ScalarTraits<K>::is_zero(m(r, c))) ++nonzero;
            if (nonzero >= 2) {
                auto edges = u.graph().edges_between(key.first, key.second);
                result.holds = true;
                result.witness = HypothesisWitness{key.first, {edges[c]}};
                return result;
            }
        }
    }
    return result;
}

template class BlockUnitary<GaussianRational>;
template class BlockUnitary<Complex>;
template class Endomorphism<GaussianRational>;
template class Endomorphism<Complex>;

#define CKALG_INSTANTIATE(K)                                                               \
    template BlockUnitary<K> compose_quasifree(const BlockUnitary<K>&, const BlockUnitary<K>&); \
    template UnitaryClassification verify_unitary(const Element<K>&);                      \
    template Element<K> cocycle_chain(const Element<K>&, std::size_t);                     \
    template HypothesisResult hypothesis_check(const BlockUnitary<K>&);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
