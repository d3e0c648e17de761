#pragma once

#include <cstddef>
#include <random>

#include "ckalg/element.hpp"
#include "ckalg/endo.hpp"
#include "ckalg/graph_moves.hpp"

namespace ckalg {

using Rng = std::mt19937_64;

/// Small Gaussian rational: parts a/b with |a| <= 3 and b in {1, 2, 3}.
GaussianRational random_coefficient(Rng& rng);

/// Up to `max_terms` terms c·S_μ S_ν^* with |μ|, |ν| <= max_length, any degree.
template <class K>
Element<K> random_element(const GraphPtr& g, Rng& rng, std::size_t max_terms, std::size_t max_length);

/// A random element of F^k (terms with |μ| = |ν| = k).
template <class K>
Element<K> random_core_element(const GraphPtr& g, Rng& rng, std::size_t k, std::size_t max_terms);

/// A random element of D^k.
template <class K>
Element<K> random_diagonal_element(const GraphPtr& g, Rng& rng, std::size_t k, std::size_t max_terms);

/// A random element of B: terms S_e S_f^* with s(e) = s(f) and r(e) = r(f).
template <class K>
Element<K> random_block_element(const GraphPtr& g, Rng& rng, std::size_t max_terms);

enum class UnitaryShape {
    General,   ///< Cayley transforms; generically every entry nonzero
    Monomial,  ///< permutations times unimodular phases
    Mixed,     ///< each block independently general or monomial
};

/// Exact unitary n x n matrix over Q(i).
Matrix<GaussianRational> random_unitary_matrix(std::size_t n, Rng& rng, UnitaryShape shape);

template <class K>
BlockUnitary<K> random_block_unitary(const GraphPtr& g, Rng& rng, UnitaryShape shape);

/// A uniformly shaped random out-split partition: m(v) between 1 and the out-degree.
OutSplitPartition random_partition(const GraphPtr& g, Rng& rng);

template <class K>
Matrix<K> convert_matrix(const Matrix<GaussianRational>& m) {
    Matrix<K> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = ScalarTraits<K>::from_exact(m(r, c));
    return out;
}

}  // namespace ckalg
