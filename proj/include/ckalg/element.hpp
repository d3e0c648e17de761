#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "ckalg/graph.hpp"
#include "ckalg/scalar.hpp"

namespace ckalg {

/// Index of the spanning element S_μ S_ν^*. Degree is |μ| - |ν|, level is |ν|.
struct TermKey {
    Path mu;
    Path nu;

    int degree() const noexcept {
        return static_cast<int>(mu.length()) - static_cast<int>(nu.length());
    }
    std::size_t level() const noexcept { return nu.length(); }

    friend bool operator==(const TermKey&, const TermKey&) = default;
};

/// Orders terms by degree, then level, then (μ, ν) lexicographically.
struct TermOrder {
    bool operator()(const TermKey& a, const TermKey& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        if (a.level() != b.level()) return a.level() < b.level();
        if (auto c = a.mu <=> b.mu; c != 0) return c < 0;
        return a.nu < b.nu;
    }
};

/// Subspaces and subalgebras that membership() can decide.
struct Membership {
    enum class Kind {
        DiagonalLevel,     ///< D^k = span{P_μ : |μ| = k}
        Diagonal,          ///< finite-support part of D
        CoreLevel,         ///< F^k
        Core,              ///< finite-support part of F (degree 0)
        BlockAlgebra,      ///< B = (D^0)' ∩ F^1
        VertexCommutant,   ///< commutes with every P_v; first test for U_E
        Degree,            ///< spectral subspace of degree m
    };

    Kind kind;
    int param = 0;

    static Membership diagonal(int k) { return {Kind::DiagonalLevel, k}; }
    static Membership diagonal() { return {Kind::Diagonal}; }
    static Membership core(int k) { return {Kind::CoreLevel, k}; }
    static Membership core() { return {Kind::Core}; }
    static Membership block_algebra() { return {Kind::BlockAlgebra}; }
    static Membership vertex_commutant() { return {Kind::VertexCommutant}; }
    static Membership degree(int m) { return {Kind::Degree, m}; }
};

/// A finite linear combination of S_μ S_ν^* in the graph algebra of one graph.
///
/// Elements are always held in canonical form: within each degree m every
/// term has the same level k_m (the largest |ν| that occurred, all shorter
/// terms expanded through P_v = Σ_{s(e)=v} S_e S_e^*), like terms merged and
/// zero coefficients dropped. Per degree and level these terms form a basis,
/// so equality is decided coefficient-wise at a common level.
template <class K>
class Element {
public:
    using Scalar = K;
    using Traits = ScalarTraits<K>;
    using TermMap = std::map<TermKey, K, TermOrder>;

    /// The zero element.
    explicit Element(GraphPtr g);

    static Element identity(GraphPtr g);
    static Element constant(GraphPtr g, const K& c);
    static Element vertex(GraphPtr g, VertexId v);
    static Element edge(GraphPtr g, EdgeId e);
    /// S_μ
    static Element path(GraphPtr g, const Path& mu);
    /// c·S_μ S_ν^*; zero when r(μ) != r(ν).
    static Element term(GraphPtr g, const Path& mu, const Path& nu, const K& c = Traits::one());
    /// Canonical form of an arbitrary finite sum of terms. Throws UnsupportedGraph
    /// when a required expansion runs into a sink.
    static Element from_terms(GraphPtr g, std::vector<std::pair<TermKey, K>> terms);

    const Graph& graph() const noexcept { return *graph_; }
    const GraphPtr& graph_ptr() const noexcept { return graph_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Degrees present, ascending.
    std::vector<int> degrees() const;
    /// Common level of the degree-m terms (0 when absent).
    std::size_t level(int degree) const;
    /// Largest |μ| or |ν| over all terms.
    std::size_t max_path_length() const;

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element& operator*=(const K& c);

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator-(Element a) { return a *= -Traits::one(); }
    friend Element operator*(const K& c, Element a) { return a *= c; }
    friend Element operator*(const Element& a, const Element& b) { return multiply(a, b); }

    Element adjoint() const;

private:
    static Element multiply(const Element& a, const Element& b);
    void require_same_graph(const Element& o, const char* op) const;

    GraphPtr graph_;
    TermMap terms_;
};

template <class K>
Element<K> adjoint(const Element<K>& x) {
    return x.adjoint();
}

template <class K>
bool equals(const Element<K>& x, const Element<K>& y);

/// Same value with every degree component written at level max(k, k_m).
template <class K>
Element<K> expand_to_level(const Element<K>& x, std::size_t k);

/// Same value at the smallest level each degree component admits.
template <class K>
Element<K> reduce(const Element<K>& x);

template <class K>
bool is_member(const Element<K>& x, Membership tag);

/// p = p^* = p^2
template <class K>
bool is_projection(const Element<K>& p);

/// Σ_{e in edges} S_e S_e^*
template <class K>
Element<K> edge_projection_sum(const GraphPtr& g, const std::vector<EdgeId>& edges);

extern template class Element<GaussianRational>;
extern template class Element<Complex>;

}  // namespace ckalg
