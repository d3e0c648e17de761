#include "ckalg/matrix_rep.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ckalg/errors.hpp"

namespace ckalg {

namespace {

template <class K>
Eigen::MatrixXcd to_eigen(const Matrix<K>& m) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                ScalarTraits<K>::to_complex(m(r, c));
    return out;
}

double largest_singular_value(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

}  // namespace

template <class K>
BlockMatrixRep<K> represent(const Element<K>& x, std::size_t k) {
    if (!is_member(x, Membership::core(static_cast<int>(k))))
        throw UsageError("element is not in F^" + std::to_string(k));
    const Graph& g = x.graph();
    const Element<K> at_level = expand_to_level(reduce(x), k);

    BlockMatrixRep<K> rep;
    rep.level = k;
    std::vector<std::map<Path, std::size_t>> position(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        rep.bases.push_back(g.paths_of_length(k, std::nullopt, vertex_at(v)));
        for (std::size_t i = 0; i < rep.bases.back().size(); ++i)
            position[v].emplace(rep.bases.back()[i], i);
        rep.blocks.emplace_back(rep.bases.back().size(), rep.bases.back().size());
    }
    for (const auto& [key, c] : at_level.terms()) {
        const auto v = index_of(key.mu.range());
        rep.blocks[v](position[v].at(key.mu), position[v].at(key.nu)) += c;
    }
    return rep;
}

template <class K>
double spectral_norm(const Matrix<K>& m) {
    return largest_singular_value(to_eigen(m));
}

template <class K>
double operator_norm(const BlockMatrixRep<K>& rep) {
    double norm = 0.0;
    for (const auto& b : rep.blocks) norm = std::max(norm, spectral_norm(b));
    return norm;
}

template <class K>
Element<K> central_projection(const GraphPtr& g, VertexId v, VertexId w) {
    return edge_projection_sum<K>(g, g->edges_between(v, w));
}

template <class K>
DeltaResult compute_delta(const BlockUnitary<K>& u, const Element<K>& p, VertexId v) {
    const GraphPtr& g = u.graph_ptr();
    if (p.graph_ptr() != g) throw UsageError("projection and unitary belong to different graphs");
    const auto pv = Element<K>::vertex(g, v);
    if (!is_member(p, Membership::diagonal(1)) || !equals(pv * p, p) || !is_projection(p))
        throw UsageError("p must be a projection in D^1 P_" + g->vertex_name(v));

    auto out = g->out_edges(v);
    if (out.size() > max_delta_out_degree)
        throw UsageError("out-degree of " + g->vertex_name(v) + " exceeds the enumeration limit");

    const Element<K> u_elem = u.to_element();
    const Element<K> conjugate = u_elem * p * u_elem.adjoint();
    const auto rep = represent(conjugate, 1);

    // Where does S_e S_e^* sit in the level-1 representation?
    auto locate = [&](EdgeId e) {
        const auto w = index_of(g->range(e));
        const auto& basis = rep.bases[w];
        const auto pos = std::find(basis.begin(), basis.end(), g->edge_path(e)) - basis.begin();
        return std::make_pair(w, static_cast<Eigen::Index>(pos));
    };

    DeltaResult result;
    if (is_member(conjugate, Membership::diagonal(1))) {
        result.conjugate_in_diagonal = true;
        result.value = 0.0;
        for (EdgeId e : out) {
            auto [w, i] = locate(e);
            if (!ScalarTraits<K>::is_zero(rep.blocks[w](static_cast<std::size_t>(i), static_cast<std::size_t>(i))))
                result.minimizer.push_back(e);
        }
        return result;
    }

    std::vector<Eigen::MatrixXcd> blocks;
    for (const auto& b : rep.blocks) blocks.push_back(to_eigen(b));
    std::vector<std::pair<std::size_t, Eigen::Index>> where;
    for (EdgeId e : out) where.push_back(locate(e));

    result.value = std::numeric_limits<double>::infinity();
    const std::uint64_t subsets = std::uint64_t{1} << out.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        auto shifted = blocks;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) shifted[where[i].first](where[i].second, where[i].second) -= 1.0;
        double norm = 0.0;
        for (const auto& b : shifted) norm = std::max(norm, largest_singular_value(b));
        if (norm < result.value) {
            result.value = norm;
            result.minimizer.clear();
            for (std::size_t i = 0; i < out.size(); ++i)
                if (mask & (std::uint64_t{1} << i)) result.minimizer.push_back(out[i]);
        }
    }
    return result;
}

#define CKALG_INSTANTIATE(K)                                                          \
    template BlockMatrixRep<K> represent(const Element<K>&, std::size_t);             \
    template double spectral_norm(const Matrix<K>&);                                  \
    template double operator_norm(const BlockMatrixRep<K>&);                          \
    template Element<K> central_projection(const GraphPtr&, VertexId, VertexId);      \
    template DeltaResult compute_delta(const BlockUnitary<K>&, const Element<K>&, VertexId);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
