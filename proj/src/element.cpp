#include "ckalg/element.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "ckalg/errors.hpp"

namespace ckalg {

namespace {

/// Memoized tails of a given length out of each vertex, used for (GA2) expansion.
class TailCache {
public:
    explicit TailCache(const Graph& g) : g_(g) {}

    const std::vector<Path>& tails(VertexId v, std::size_t depth) {
        auto key = std::make_pair(index_of(v), depth);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        check_no_sink(v, depth);
        return cache_.emplace(key, g_.paths_of_length(depth, v)).first->second;
    }

private:
    // Expansion through P_w with w a sink is not a valid rewrite; refuse instead
    // of silently dropping the term.
    void check_no_sink(VertexId v, std::size_t depth) const {
        std::set<std::size_t> frontier{index_of(v)};
        for (std::size_t t = 0; t < depth; ++t) {
            std::set<std::size_t> next;
            for (auto x : frontier) {
                auto out = g_.out_edges(vertex_at(x));
                if (out.empty())
                    throw UnsupportedGraph("normal form needs (GA2) expansion at sink '" +
                                           g_.vertex_name(vertex_at(x)) + "'");
                for (EdgeId e : out) next.insert(index_of(g_.range(e)));
            }
            frontier = std::move(next);
        }
    }

    const Graph& g_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Path>> cache_;
};

template <class K>
void accumulate(typename Element<K>::TermMap& into, TermKey key, const K& c) {
    auto [it, inserted] = into.try_emplace(std::move(key), c);
    if (!inserted) it->second += c;
}

template <class K>
void drop_zeros(typename Element<K>::TermMap& terms) {
    std::erase_if(terms, [](const auto& kv) { return ScalarTraits<K>::is_zero(kv.second); });
}

}  // namespace

template <class K>
Element<K>::Element(GraphPtr g) : graph_(std::move(g)) {
    if (!graph_) throw UsageError("element needs a graph");
}

template <class K>
Element<K> Element<K>::identity(GraphPtr g) {
    return constant(std::move(g), Traits::one());
}

template <class K>
Element<K> Element<K>::constant(GraphPtr g, const K& c) {
    Element x(g);
    if (Traits::is_zero(c)) return x;
    for (std::size_t v = 0; v < g->vertex_count(); ++v) {
        Path p = g->vertex_path(vertex_at(v));
        x.terms_.emplace(TermKey{p, p}, c);
    }
    return x;
}

template <class K>
Element<K> Element<K>::vertex(GraphPtr g, VertexId v) {
    Path p = g->vertex_path(v);
    return term(std::move(g), p, p);
}

template <class K>
Element<K> Element<K>::edge(GraphPtr g, EdgeId e) {
    return path(g, g->edge_path(e));
}

template <class K>
Element<K> Element<K>::path(GraphPtr g, const Path& mu) {
    Path end = g->vertex_path(mu.range());
    return term(std::move(g), mu, end);
}

template <class K>
Element<K> Element<K>::term(GraphPtr g, const Path& mu, const Path& nu, const K& c) {
    Element x(std::move(g));
    if (mu.range() != nu.range() || Traits::is_zero(c)) return x;
    x.terms_.emplace(TermKey{mu, nu}, c);
    return x;
}

template <class K>
Element<K> Element<K>::from_terms(GraphPtr g, std::vector<std::pair<TermKey, K>> raw) {
    Element x(std::move(g));
    std::map<int, std::size_t> level_of;
    for (const auto& [key, c] : raw) {
        if (key.mu.range() != key.nu.range() || Traits::is_zero(c)) continue;
        auto& lvl = level_of[key.degree()];
        lvl = std::max(lvl, key.level());
    }

    TailCache cache(*x.graph_);
    for (auto& [key, c] : raw) {
        if (key.mu.range() != key.nu.range() || Traits::is_zero(c)) continue;
        const std::size_t target = level_of[key.degree()];
        if (key.level() == target) {
            accumulate<K>(x.terms_, std::move(key), c);
            continue;
        }
        // S_μ S_ν^* = Σ_{|α|=d, s(α)=r(μ)} S_{μα} S_{να}^*
        for (const Path& alpha : cache.tails(key.mu.range(), target - key.level()))
            accumulate<K>(x.terms_, TermKey{key.mu.concat(alpha), key.nu.concat(alpha)}, c);
    }
    drop_zeros<K>(x.terms_);
    return x;
}

template <class K>
std::vector<int> Element<K>::degrees() const {
    std::vector<int> out;
    for (const auto& [key, c] : terms_)
        if (out.empty() || out.back() != key.degree()) out.push_back(key.degree());
    return out;
}

template <class K>
std::size_t Element<K>::level(int degree) const {
    for (const auto& [key, c] : terms_)
        if (key.degree() == degree) return key.level();
    return 0;
}

template <class K>
std::size_t Element<K>::max_path_length() const {
    std::size_t n = 0;
    for (const auto& [key, c] : terms_) n = std::max({n, key.mu.length(), key.nu.length()});
    return n;
}

template <class K>
void Element<K>::require_same_graph(const Element& o, const char* op) const {
    if (graph_ != o.graph_)
        throw UsageError(std::string("operands of ") + op + " belong to different graphs");
}

template <class K>
Element<K>& Element<K>::operator+=(const Element& o) {
    require_same_graph(o, "+");
    if (o.terms_.empty()) return *this;
    std::vector<std::pair<TermKey, K>> raw(terms_.begin(), terms_.end());
    raw.insert(raw.end(), o.terms_.begin(), o.terms_.end());
    *this = from_terms(graph_, std::move(raw));
    return *this;
}

template <class K>
Element<K>& Element<K>::operator-=(const Element& o) {
    require_same_graph(o, "-");
    return *this += -o;
}

template <class K>
Element<K>& Element<K>::operator*=(const K& c) {
    if (Traits::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, coef] : terms_) coef *= c;
    drop_zeros<K>(terms_);
    return *this;
}

template <class K>
Element<K> Element<K>::adjoint() const {
    Element x(graph_);
    for (const auto& [key, c] : terms_) x.terms_.emplace(TermKey{key.nu, key.mu}, Traits::conj(c));
    return x;
}

template <class K>
Element<K> Element<K>::multiply(const Element& a, const Element& b) {
    a.require_same_graph(b, "*");
    std::vector<std::pair<TermKey, K>> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    // (S_μ S_ν^*)(S_α S_β^*) = S_{μα'} S_β^* if α = να', S_μ S_{βν'}^* if ν = αν', else 0
    for (const auto& [x, cx] : a.terms_) {
        for (const auto& [y, cy] : b.terms_) {
            if (x.nu.is_prefix_of(y.mu)) {
                Path rest = x.nu.strip_prefix_from(y.mu);
                raw.emplace_back(TermKey{x.mu.concat(rest), y.nu}, cx * cy);
            } else if (y.mu.is_prefix_of(x.nu)) {
                Path rest = y.mu.strip_prefix_from(x.nu);
                raw.emplace_back(TermKey{x.mu, y.nu.concat(rest)}, cx * cy);
            }
        }
    }
    return from_terms(a.graph_, std::move(raw));
}

template <class K>
bool equals(const Element<K>& x, const Element<K>& y) {
    return (x - y).is_zero();
}

template <class K>
Element<K> expand_to_level(const Element<K>& x, std::size_t k) {
    std::map<int, std::size_t> target;
    for (int m : x.degrees()) target[m] = std::max(k, x.level(m));

    TailCache cache(x.graph());
    typename Element<K>::TermMap expanded;
    for (const auto& [key, c] : x.terms()) {
        std::size_t depth = target[key.degree()] - key.level();
        if (depth == 0) {
            accumulate<K>(expanded, key, c);
            continue;
        }
        for (const Path& alpha : cache.tails(key.mu.range(), depth))
            accumulate<K>(expanded, TermKey{key.mu.concat(alpha), key.nu.concat(alpha)}, c);
    }
    return Element<K>::from_terms(x.graph_ptr(),
                                  std::vector<std::pair<TermKey, K>>(expanded.begin(), expanded.end()));
}

template <class K>
Element<K> reduce(const Element<K>& x) {
    const Graph& g = x.graph();
    std::vector<std::pair<TermKey, K>> out;
    for (int m : x.degrees()) {
        std::vector<std::pair<TermKey, K>> comp;
        for (const auto& [key, c] : x.terms())
            if (key.degree() == m) comp.emplace_back(key, c);

        std::size_t level = x.level(m);
        const std::size_t floor = m < 0 ? static_cast<std::size_t>(-m) : 0;
        while (level > floor) {
            // S_{μe} S_{νe}^* over all e in s^{-1}(r(μ)) with one coefficient
            // contracts to S_μ S_ν^*; any other pattern blocks contraction.
            std::map<TermKey, std::vector<std::pair<EdgeId, K>>, TermOrder> groups;
            bool ok = true;
            for (const auto& [key, c] : comp) {
                EdgeId last_mu = key.mu.edges().back();
                EdgeId last_nu = key.nu.edges().back();
                if (last_mu != last_nu) {
                    ok = false;
                    break;
                }
                TermKey parent{g.truncate(key.mu, key.mu.length() - 1),
                               g.truncate(key.nu, key.nu.length() - 1)};
                groups[parent].emplace_back(last_mu, c);
            }
            if (!ok) break;
            std::vector<std::pair<TermKey, K>> contracted;
            for (auto& [parent, children] : groups) {
                auto out_edges = g.out_edges(parent.mu.range());
                if (children.size() != out_edges.size()) {
                    ok = false;
                    break;
                }
                // children arrive in edge order because comp is sorted by μ
                for (std::size_t i = 0; i < children.size() && ok; ++i) {
                    ok = children[i].first == out_edges[i] &&
                         ScalarTraits<K>::equal(children[i].second, children[0].second);
                }
                if (!ok) break;
                contracted.emplace_back(parent, children[0].second);
            }
            if (!ok) break;
            comp = std::move(contracted);
            --level;
        }
        out.insert(out.end(), comp.begin(), comp.end());
    }
    return Element<K>::from_terms(x.graph_ptr(), std::move(out));
}

template <class K>
bool is_member(const Element<K>& x, Membership tag) {
    using Kind = Membership::Kind;
    const auto& terms = x.terms();
    auto all = [&](auto pred) {
        return std::all_of(terms.begin(), terms.end(), [&](const auto& kv) { return pred(kv.first); });
    };
    auto degree_zero = [](const TermKey& t) { return t.degree() == 0; };
    auto diagonal = [](const TermKey& t) { return t.mu == t.nu; };
    auto commutes = [](const TermKey& t) { return t.mu.source() == t.nu.source(); };

    switch (tag.kind) {
        case Kind::Degree:
            return all([&](const TermKey& t) { return t.degree() == tag.param; });
        case Kind::VertexCommutant:
            return all(commutes);
        case Kind::Core:
            return all(degree_zero);
        case Kind::Diagonal:
            return all(diagonal);
        case Kind::CoreLevel:
            if (tag.param < 0) return x.is_zero();
            return all(degree_zero) &&
                   reduce(x).level(0) <= static_cast<std::size_t>(tag.param);
        case Kind::DiagonalLevel:
            if (tag.param < 0) return x.is_zero();
            return all(diagonal) && reduce(x).level(0) <= static_cast<std::size_t>(tag.param);
        case Kind::BlockAlgebra:
            return all(degree_zero) && all(commutes) && reduce(x).level(0) <= 1;
    }
    return false;
}

template <class K>
bool is_projection(const Element<K>& p) {
    return equals(p, p.adjoint()) && equals(p * p, p);
}

template <class K>
Element<K> edge_projection_sum(const GraphPtr& g, const std::vector<EdgeId>& edges) {
    std::vector<std::pair<TermKey, K>> raw;
    for (EdgeId e : edges) {
        Path p = g->edge_path(e);
        raw.emplace_back(TermKey{p, p}, ScalarTraits<K>::one());
    }
    return Element<K>::from_terms(g, std::move(raw));
}

template class Element<GaussianRational>;
template class Element<Complex>;

#define CKALG_INSTANTIATE(K)                                                        \
    template bool equals(const Element<K>&, const Element<K>&);                     \
    template Element<K> expand_to_level(const Element<K>&, std::size_t);            \
    template Element<K> reduce(const Element<K>&);                                  \
    template bool is_member(const Element<K>&, Membership);                         \
    template bool is_projection(const Element<K>&);                                 \
    template Element<K> edge_projection_sum(const GraphPtr&, const std::vector<EdgeId>&);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
