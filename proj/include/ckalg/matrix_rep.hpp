#pragma once

#include <cstddef>
#include <vector>

#include "ckalg/dense_matrix.hpp"
#include "ckalg/element.hpp"
#include "ckalg/endo.hpp"

namespace ckalg {

/// Faithful representation of F^k: one square block per vertex v, indexed by
/// the length-k paths ending at v in lexicographic order. S_μ S_ν^* is the
/// (μ, ν) matrix unit in block r(μ).
template <class K>
struct BlockMatrixRep {
    std::size_t level = 0;
    std::vector<std::vector<Path>> bases;  ///< per vertex
    std::vector<Matrix<K>> blocks;         ///< per vertex

    bool is_zero() const {
        for (const auto& b : blocks)
            if (!b.is_zero()) return false;
        return true;
    }
};

/// Throws UsageError unless x ∈ F^k.
template <class K>
BlockMatrixRep<K> represent(const Element<K>& x, std::size_t k);

/// Largest singular value of a block, in double precision.
template <class K>
double spectral_norm(const Matrix<K>& m);

template <class K>
double operator_norm(const BlockMatrixRep<K>& rep);

/// C*-norm of x ∈ F^k: the maximum block spectral norm.
template <class K>
double operator_norm(const Element<K>& x, std::size_t k) {
    return operator_norm(represent(x, k));
}

/// _vQ_w = Σ_{s(e)=v, r(e)=w} S_e S_e^*; the zero element when A(v, w) = 0.
template <class K>
Element<K> central_projection(const GraphPtr& g, VertexId v, VertexId w);

struct DeltaResult {
    double value = 0.0;
    /// u p u^* ∈ D^1, decided exactly (within tolerance in float mode); value is
    /// then reported as 0.
    bool conjugate_in_diagonal = false;
    /// Edges e with S_e S_e^* in the minimizing diagonal projection q.
    std::vector<EdgeId> minimizer;
};

/// Maximum out-degree for which compute_delta enumerates all of D^1 P_v's projections.
inline constexpr std::size_t max_delta_out_degree = 20;

/// δ = min_q ‖u p u^* - q‖ over the diagonal projections q ∈ D^1 P_v.
/// Throws UsageError unless p is a projection in D^1 P_v.
template <class K>
DeltaResult compute_delta(const BlockUnitary<K>& u, const Element<K>& p, VertexId v);

}  // namespace ckalg
