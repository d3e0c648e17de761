#include "ckalg/structure_maps.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "ckalg/errors.hpp"

namespace ckalg {

template <class K>
Element<K> shift(const Element<K>& x) {
    const Graph& g = x.graph();
    std::vector<std::pair<TermKey, K>> raw;
    for (const auto& [key, c] : x.terms()) {
        // S_e S_μ S_ν^* S_e^* vanishes unless r(e) = s(μ) = s(ν)
        if (key.mu.source() != key.nu.source()) continue;
        for (EdgeId e : g.in_edges(key.mu.source())) {
            VertexId from = g.source(e);
            raw.emplace_back(TermKey{key.mu.prepend(e, from), key.nu.prepend(e, from)}, c);
        }
    }
    return Element<K>::from_terms(x.graph_ptr(), std::move(raw));
}

template <class K>
Element<K> gauge(const Element<K>& x, const K& z) {
    using Traits = ScalarTraits<K>;
    if (!Traits::is_unimodular(z)) throw UsageError("gauge parameter must have modulus 1");
    std::vector<std::pair<TermKey, K>> raw;
    for (const auto& [key, c] : x.terms()) {
        const int m = key.degree();
        const K base = m >= 0 ? z : Traits::conj(z);
        K factor = Traits::one();
        for (int i = 0; i < (m >= 0 ? m : -m); ++i) factor *= base;
        raw.emplace_back(key, c * factor);
    }
    return Element<K>::from_terms(x.graph_ptr(), std::move(raw));
}

template <class K>
Element<K> degree_component(const Element<K>& x, int m) {
    std::vector<std::pair<TermKey, K>> raw;
    for (const auto& [key, c] : x.terms())
        if (key.degree() == m) raw.emplace_back(key, c);
    return Element<K>::from_terms(x.graph_ptr(), std::move(raw));
}

template <class K>
Element<K> expect_diagonal(const Element<K>& x) {
    std::vector<std::pair<TermKey, K>> raw;
    for (const auto& [key, c] : x.terms())
        if (key.mu == key.nu) raw.emplace_back(key, c);
    return Element<K>::from_terms(x.graph_ptr(), std::move(raw));
}

template <class K>
Element<K> expect_core_level(const Element<K>& x, std::size_t k) {
    Element<K> core = degree_component(x, 0);
    const std::size_t l = core.level(0);
    if (core.is_zero() || l <= k) return core;

    const Graph& g = x.graph();
    std::vector<std::pair<TermKey, K>> raw;
    for (const auto& [key, c] : core.terms()) {
        const auto& mu = key.mu.edges();
        const auto& nu = key.nu.edges();
        if (!std::equal(mu.begin() + static_cast<std::ptrdiff_t>(k), mu.end(),
                        nu.begin() + static_cast<std::ptrdiff_t>(k)))
            continue;
        Path beta = g.truncate(key.mu, k);
        Path beta_prime = g.truncate(key.nu, k);
        const auto tails = g.count_paths_from(beta.range(), l - k);
        GaussianRational weight(mpq_class(mpz_class(1), mpz_class(std::to_string(tails))));
        raw.emplace_back(TermKey{std::move(beta), std::move(beta_prime)},
                         c * ScalarTraits<K>::from_exact(weight));
    }
    return Element<K>::from_terms(x.graph_ptr(), std::move(raw));
}

#define CKALG_INSTANTIATE(K)                                                 \
    template Element<K> shift(const Element<K>&);                            \
    template Element<K> gauge(const Element<K>&, const K&);                  \
    template Element<K> degree_component(const Element<K>&, int);            \
    template Element<K> expect_diagonal(const Element<K>&);                  \
    template Element<K> expect_core_level(const Element<K>&, std::size_t);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
