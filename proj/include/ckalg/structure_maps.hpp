#pragma once

#include <cstddef>

#include "ckalg/element.hpp"

namespace ckalg {

/// φ(x) = Σ_e S_e x S_e^*
template <class K>
Element<K> shift(const Element<K>& x);

/// γ_z: scales each degree-m term by z^m. Throws UsageError unless |z| = 1
/// (exactly in exact mode, within tolerance in float mode).
template <class K>
Element<K> gauge(const Element<K>& x, const K& z);

/// Φ^m: the degree-m part of x. Φ^0 is the expectation onto the core.
template <class K>
Element<K> degree_component(const Element<K>& x, int m);

/// Φ_D: keeps the terms S_μ S_μ^*.
template <class K>
Element<K> expect_diagonal(const Element<K>& x);

/// Φ_F^k: Φ^0 followed by the tail-averaging expectation F -> F^k.
///
/// A degree-0 term at level l > k with μ = βα, ν = β'α' (|β| = |β'| = k) goes
/// to [α = α'] / N(r(β), l-k) · S_β S_β'^*, where N(v, j) counts the length-j
/// paths leaving v. The weights make the map unital and F^k-bimodular.
template <class K>
Element<K> expect_core_level(const Element<K>& x, std::size_t k);

}  // namespace ckalg
