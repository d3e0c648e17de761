#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ckalg/dense_matrix.hpp"
#include "ckalg/element.hpp"

namespace ckalg {

using VertexPair = std::pair<VertexId, VertexId>;

/// A unitary of B = (D^0)' ∩ F^1 ≅ ⊕_{v,w} M_{A(v,w)}, stored block by block.
/// Rows and columns of block (v, w) are the edges v -> w in edge-id order, so
/// the element it stands for is Σ_{(v,w)} Σ_{e,f} U_{ef} S_e S_f^*.
template <class K>
class BlockUnitary {
public:
    /// Blocks absent from `blocks` are the identity. Throws UsageError for a
    /// block with A(v, w) = 0, a block of the wrong size, or a non-unitary block.
    static BlockUnitary create(GraphPtr g, std::map<VertexPair, Matrix<K>> blocks);
    static BlockUnitary identity(GraphPtr g);

    const Graph& graph() const noexcept { return *graph_; }
    const GraphPtr& graph_ptr() const noexcept { return graph_; }
    /// Every block with A(v, w) >= 1, in vertex order.
    const std::map<VertexPair, Matrix<K>>& blocks() const noexcept { return blocks_; }
    const Matrix<K>& block(VertexId v, VertexId w) const;

    Element<K> to_element() const;
    BlockUnitary adjoint() const;

private:
    BlockUnitary(GraphPtr g, std::map<VertexPair, Matrix<K>> blocks)
        : graph_(std::move(g)), blocks_(std::move(blocks)) {}

    GraphPtr graph_;
    std::map<VertexPair, Matrix<K>> blocks_;
};

/// Block-wise product uw; λ_{uw} = λ_u ∘ λ_w.
template <class K>
BlockUnitary<K> compose_quasifree(const BlockUnitary<K>& u, const BlockUnitary<K>& w);

struct UnitaryClassification {
    bool in_vertex_commutant_unitaries = false;  ///< u ∈ U_E
    bool in_block_unitaries = false;             ///< u ∈ U(B)
    bool in_core_unitaries = false;              ///< u ∈ U_E ∩ F
    bool approximate = false;                    ///< decided within float tolerance
};

template <class K>
UnitaryClassification verify_unitary(const Element<K>& u);

/// u_k = u φ(u) ··· φ^{k-1}(u); u_0 is the identity.
template <class K>
Element<K> cocycle_chain(const Element<K>& u, std::size_t k);

template <class K>
Element<K> cocycle_chain(const BlockUnitary<K>& u, std::size_t k) {
    return cocycle_chain(u.to_element(), k);
}

/// The endomorphism λ_u with λ_u(S_e) = u S_e and λ_u(P_v) = P_v.
template <class K>
class Endomorphism {
public:
    /// Throws UsageError unless u ∈ U_E.
    explicit Endomorphism(Element<K> u);
    explicit Endomorphism(const BlockUnitary<K>& u) : Endomorphism(u.to_element()) {}

    const Element<K>& unitary() const noexcept { return u_; }

    /// λ_u(S_μ S_ν^*) = u_{|μ|} S_μ S_ν^* u_{|ν|}^*, extended linearly.
    Element<K> operator()(const Element<K>& x) const;

private:
    Element<K> u_;
};

template <class K>
Element<K> lambda_apply(const Element<K>& u, const Element<K>& x) {
    return Endomorphism<K>(u)(x);
}

template <class K>
Element<K> lambda_apply(const BlockUnitary<K>& u, const Element<K>& x) {
    return Endomorphism<K>(u)(x);
}

struct HypothesisWitness {
    VertexId vertex;
    /// p = Σ_{e in edges} S_e S_e^* is a projection in D^1 P_v with u p u^* ∉ D^1.
    std::vector<EdgeId> edges;
};

struct HypothesisResult {
    bool holds = false;
    std::optional<HypothesisWitness> witness;
};

/// Decides u D^1 u^* != D^1: holds iff some block of u is not monomial.
template <class K>
HypothesisResult hypothesis_check(const BlockUnitary<K>& u);

extern template class BlockUnitary<GaussianRational>;
extern template class BlockUnitary<Complex>;
extern template class Endomorphism<GaussianRational>;
extern template class Endomorphism<Complex>;

}  // namespace ckalg
