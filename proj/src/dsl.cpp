#include "ckalg/dsl.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include "ckalg/errors.hpp"
#include "ckalg/structure_maps.hpp"

namespace ckalg {

namespace {

constexpr std::size_t max_depth = 200;
constexpr double number_tolerance = 1e-9;

const std::set<std::string, std::less<>>& reserved_words() {
    static const std::set<std::string, std::less<>> words = {
        "P",     "S",      "Q",     "adj",    "shift",   "gauge", "comp", "expD", "expF",
        "lambda", "chain", "hyp",   "rep",    "norm",    "delta", "apply", "zero", "member",
        "unitary", "near", "not",   "sqrt",   "compose", "i",     "true",  "false"};
    return words;
}

template <class K>
GraphPtr graph_of(const Value<K>& v) {
    if (auto* x = std::get_if<Element<K>>(&v)) return x->graph_ptr();
    if (auto* u = std::get_if<BlockUnitary<K>>(&v)) return u->graph_ptr();
    return nullptr;
}

template <class K>
bool is_elementish(const Value<K>& v) {
    return std::holds_alternative<Element<K>>(v) || std::holds_alternative<BlockUnitary<K>>(v);
}

template <class K>
bool is_scalar(const Value<K>& v) {
    return std::holds_alternative<K>(v);
}

template <class K>
bool is_numeric(const Value<K>& v) {
    return std::holds_alternative<double>(v) || std::holds_alternative<DeltaValue>(v);
}

template <class K>
Element<K> to_element(const Value<K>& v, const GraphPtr& context) {
    if (auto* x = std::get_if<Element<K>>(&v)) return *x;
    if (auto* u = std::get_if<BlockUnitary<K>>(&v)) return u->to_element();
    if (auto* c = std::get_if<K>(&v)) {
        if (!context) throw UsageError("a scalar is used as an element but no graph is active");
        return Element<K>::constant(context, *c);
    }
    throw UsageError("expected an element, got " + type_name(v));
}

template <class K>
double to_number(const Value<K>& v) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* d = std::get_if<DeltaValue>(&v)) return d->result.value;
    if (auto* c = std::get_if<K>(&v)) {
        bool real = false;
        if constexpr (ScalarTraits<K>::exact)
            real = c->imag() == 0;
        else
            real = std::abs(c->imag()) <= ScalarTraits<K>::tolerance;
        if (!real) throw UsageError("expected a real number, got " + ScalarTraits<K>::to_string(*c));
        return ScalarTraits<K>::to_complex(*c).real();
    }
    throw UsageError("expected a number, got " + type_name(v));
}

template <class K>
long to_integer(const Value<K>& v) {
    if (auto* c = std::get_if<K>(&v)) {
        if constexpr (ScalarTraits<K>::exact) {
            if (c->imag() == 0 && c->real().get_den() == 1 && c->real().get_num().fits_slong_p())
                return c->real().get_num().get_si();
        } else {
            const double re = c->real();
            if (std::abs(c->imag()) <= ScalarTraits<K>::tolerance &&
                std::abs(re - std::round(re)) <= ScalarTraits<K>::tolerance && std::abs(re) < 1e15)
                return static_cast<long>(std::llround(re));
        }
    }
    throw UsageError("expected an integer, got " + type_name(v));
}

template <class K>
std::size_t to_level(const Value<K>& v) {
    const long k = to_integer(v);
    if (k < 0) throw UsageError("expected a non-negative level");
    return static_cast<std::size_t>(k);
}

template <class K>
bool to_bool(const Value<K>& v) {
    if (auto* b = std::get_if<bool>(&v)) return *b;
    if (auto* h = std::get_if<HypothesisValue>(&v)) return h->result.holds;
    throw UsageError("expected a boolean, got " + type_name(v));
}

template <class K>
const BlockUnitary<K>& to_unitary(const Value<K>& v) {
    if (auto* u = std::get_if<BlockUnitary<K>>(&v)) return *u;
    throw UsageError("expected a block unitary, got " + type_name(v));
}

template <class K>
K to_scalar(const Value<K>& v) {
    if (auto* c = std::get_if<K>(&v)) return *c;
    if constexpr (!ScalarTraits<K>::exact) {
        if (is_numeric(v)) return to_number(v);
    }
    throw UsageError("expected a scalar, got " + type_name(v));
}

template <class K>
class Evaluator {
public:
    Evaluator(Cursor& cur, Environment<K>& env) : cur_(cur), env_(env) {}

    Value<K> expression(std::optional<Comparison<K>>* comparison) {
        Value<K> lhs = sum();
        for (const char* op : {"==", "!=", "<=", ">=", "<", ">"}) {
            if (!cur_.consume(op)) continue;
            Value<K> rhs = sum();
            Value<K> result = compare(lhs, rhs, op);
            if (comparison) *comparison = Comparison<K>{std::move(lhs), std::move(rhs), op};
            return result;
        }
        return lhs;
    }

private:
    struct DepthGuard {
        explicit DepthGuard(Evaluator& e) : e_(e) {
            if (++e_.depth_ > max_depth) e_.cur_.fail("expression nested too deeply");
        }
        ~DepthGuard() { --e_.depth_; }
        Evaluator& e_;
    };

    Value<K> sum() {
        Value<K> acc = product();
        while (true) {
            const char c = cur_.peek();
            if ((c != '+' && c != '-') || cur_.peek_raw(1) == '>') return acc;
            cur_.consume(std::string_view(&c, 1));
            Value<K> rhs = product();
            acc = add(acc, rhs, c == '-');
        }
    }

    Value<K> product() {
        Value<K> acc = unary();
        while (true) {
            if (cur_.consume("*")) {
                Value<K> rhs = unary();
                acc = multiply(acc, rhs);
            } else if (cur_.consume("/")) {
                Value<K> rhs = unary();
                acc = divide(acc, rhs);
            } else {
                return acc;
            }
        }
    }

    Value<K> unary() {
        DepthGuard guard(*this);
        if (cur_.consume("-")) {
            if (cur_.peek_literal()) return literal_value<K>(cur_.scalar_literal(true));
            return negate(unary());
        }
        if (cur_.consume("+")) return unary();
        return primary();
    }

    Value<K> primary() {
        if (cur_.peek_literal()) return literal_value<K>(cur_.scalar_literal());
        if (cur_.consume("(")) {
            Value<K> v = expression(nullptr);
            cur_.expect(")");
            return v;
        }
        const char c = cur_.peek();
        if (c == '\0') cur_.fail("unexpected end of expression");
        if (!is_id_char(c) || (c >= '0' && c <= '9')) cur_.fail("unexpected '" + std::string(1, c) + "'");
        const std::string name = cur_.id("name");
        if (cur_.consume("(")) return call(name);
        if (name == "true") return true;
        if (name == "false") return false;
        if (auto it = env_.variables.find(name); it != env_.variables.end()) return it->second;
        if (env_.maps.count(name)) return MapRef{name};
        throw UsageError("unknown name '" + name + "'");
    }

    const GraphPtr& active() const {
        if (!env_.active) throw UsageError("no graph is active; add 'use graph <name>'");
        return env_.active;
    }

    VertexId vertex_arg(const GraphPtr& g) {
        const std::string id = cur_.id("vertex id");
        auto v = g->find_vertex(id);
        if (!v) throw UsageError("unknown vertex '" + id + "'");
        return *v;
    }

    Value<K> arg() { return expression(nullptr); }

    void next_arg() { cur_.expect(","); }

    void close() { cur_.expect(")"); }

    Value<K> call(const std::string& verb) {
        if (verb == "P") {
            const auto& g = active();
            const VertexId v = vertex_arg(g);
            close();
            return Element<K>::vertex(g, v);
        }
        if (verb == "S") {
            const auto& g = active();
            std::vector<EdgeId> edges;
            while (cur_.peek() != ')') {
                const std::string id = cur_.id("edge id");
                auto e = g->find_edge(id);
                if (!e) throw UsageError("unknown edge '" + id + "'");
                edges.push_back(*e);
            }
            close();
            if (edges.empty()) throw UsageError("S() needs at least one edge; use P(v) for a vertex");
            return Element<K>::path(g, g->make_path(edges));
        }
        if (verb == "Q") {
            const auto& g = active();
            const VertexId v = vertex_arg(g);
            next_arg();
            const VertexId w = vertex_arg(g);
            close();
            if (g->edges_between(v, w).empty())
                env_.warnings.push_back("Q(" + g->vertex_name(v) + ", " + g->vertex_name(w) +
                                        "): no edges, the projection is zero");
            return central_projection<K>(g, v, w);
        }
        if (verb == "member") {
            Value<K> x = arg();
            next_arg();
            const Membership tag = membership_tag();
            close();
            return is_member(to_element(x, context(x)), tag);
        }
        if (verb == "delta") {
            Value<K> u = arg();
            next_arg();
            Value<K> p = arg();
            next_arg();
            const auto& unitary = to_unitary(u);
            const VertexId v = vertex_arg(unitary.graph_ptr());
            close();
            return DeltaValue{unitary.graph_ptr(),
                              compute_delta(unitary, to_element(p, unitary.graph_ptr()), v)};
        }
        if (verb == "unitary") {
            Value<K> x = arg();
            std::string which;
            if (cur_.consume(",")) which = cur_.id("'B' or 'F'");
            close();
            const auto result = verify_unitary(to_element(x, context(x)));
            if (which.empty()) return result.in_vertex_commutant_unitaries;
            if (which == "B") return result.in_block_unitaries;
            if (which == "F") return result.in_core_unitaries;
            throw UsageError("unitary(X, " + which + "): expected B or F");
        }

        if (!reserved_words().count(verb)) throw UsageError("unknown verb '" + verb + "'");
        std::vector<Value<K>> args;
        if (cur_.peek() != ')') {
            do {
                args.push_back(arg());
            } while (cur_.consume(","));
        }
        close();
        return apply_verb(verb, args);
    }

    GraphPtr context(const Value<K>& v) const {
        if (auto g = graph_of(v)) return g;
        return env_.active;
    }

    Membership membership_tag() {
        const std::string tag = cur_.id("membership tag");
        std::optional<long> param;
        if (cur_.consume("(")) {
            const bool negative = cur_.consume("-");
            const auto lit = cur_.scalar_literal(negative);
            param = to_integer<K>(literal_value<K>(lit));
            close();
        }
        auto level = [&]() {
            if (*param < 0) throw UsageError("membership level must be non-negative");
            return static_cast<int>(*param);
        };
        if (tag == "D") return param ? Membership::diagonal(level()) : Membership::diagonal();
        if (tag == "F") return param ? Membership::core(level()) : Membership::core();
        if (tag == "B" && !param) return Membership::block_algebra();
        if (tag == "comm" && !param) return Membership::vertex_commutant();
        if (tag == "deg" && param) return Membership::degree(static_cast<int>(*param));
        throw UsageError("unknown membership tag '" + tag + "'; expected D, D(k), F, F(k), B, comm or deg(m)");
    }

    static void arity(const std::string& verb, const std::vector<Value<K>>& args, std::size_t n) {
        if (args.size() != n)
            throw UsageError(verb + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                             std::to_string(args.size()));
    }

    Element<K> element_arg(const Value<K>& v) const { return to_element(v, context(v)); }

    Value<K> apply_verb(const std::string& verb, std::vector<Value<K>>& args) {
        if (verb == "adj") {
            arity(verb, args, 1);
            if (auto* c = std::get_if<K>(&args[0])) return ScalarTraits<K>::conj(*c);
            if (auto* u = std::get_if<BlockUnitary<K>>(&args[0])) return u->adjoint();
            return element_arg(args[0]).adjoint();
        }
        if (verb == "shift") {
            arity(verb, args, 1);
            return shift(element_arg(args[0]));
        }
        if (verb == "gauge") {
            arity(verb, args, 2);
            return gauge(element_arg(args[0]), to_scalar(args[1]));
        }
        if (verb == "comp") {
            arity(verb, args, 2);
            return degree_component(element_arg(args[0]), static_cast<int>(to_integer(args[1])));
        }
        if (verb == "expD") {
            arity(verb, args, 1);
            return expect_diagonal(element_arg(args[0]));
        }
        if (verb == "expF") {
            arity(verb, args, 2);
            return expect_core_level(element_arg(args[0]), to_level(args[1]));
        }
        if (verb == "lambda") {
            arity(verb, args, 2);
            if (auto* u = std::get_if<BlockUnitary<K>>(&args[0]))
                return lambda_apply(*u, to_element(args[1], u->graph_ptr()));
            const Element<K> u = element_arg(args[0]);
            return lambda_apply(u, to_element(args[1], u.graph_ptr()));
        }
        if (verb == "chain") {
            arity(verb, args, 2);
            const std::size_t k = to_level(args[1]);
            if (k == 0) throw UsageError("chain(u, k) needs k >= 1");
            if (auto* u = std::get_if<BlockUnitary<K>>(&args[0])) return cocycle_chain(*u, k);
            const Element<K> u = element_arg(args[0]);
            if (!verify_unitary(u).in_vertex_commutant_unitaries)
                throw UsageError("chain(u, k) needs a unitary commuting with the vertex projections");
            return cocycle_chain(u, k);
        }
        if (verb == "hyp") {
            arity(verb, args, 1);
            const auto& u = to_unitary(args[0]);
            return HypothesisValue{u.graph_ptr(), hypothesis_check(u)};
        }
        if (verb == "compose") {
            arity(verb, args, 2);
            return compose_quasifree(to_unitary(args[0]), to_unitary(args[1]));
        }
        if (verb == "rep") {
            arity(verb, args, 2);
            const Element<K> x = element_arg(args[0]);
            return RepValue<K>{x.graph_ptr(), represent(x, to_level(args[1]))};
        }
        if (verb == "norm") {
            arity(verb, args, 2);
            return operator_norm(element_arg(args[0]), to_level(args[1]));
        }
        if (verb == "apply") {
            arity(verb, args, 2);
            const auto* ref = std::get_if<MapRef>(&args[0]);
            if (!ref) throw UsageError("apply(f, X) needs a generator map, got " + type_name(args[0]));
            const auto& map = env_.maps.at(ref->name);
            return map.apply(to_element(args[1], map.source()));
        }
        if (verb == "zero") {
            arity(verb, args, 1);
            if (auto* c = std::get_if<K>(&args[0])) return ScalarTraits<K>::is_zero(*c);
            if (is_numeric(args[0])) return std::abs(to_number(args[0])) <= number_tolerance;
            return element_arg(args[0]).is_zero();
        }
        if (verb == "near") {
            arity(verb, args, 3);
            return std::abs(to_number(args[0]) - to_number(args[1])) <= to_number(args[2]);
        }
        if (verb == "not") {
            arity(verb, args, 1);
            return !to_bool(args[0]);
        }
        if (verb == "sqrt") {
            arity(verb, args, 1);
            if constexpr (ScalarTraits<K>::exact) {
                const K c = to_scalar(args[0]);
                if (c.imag() == 0) {
                    if (auto r = exact_sqrt(c.real())) return K(*r);
                }
                throw UsageError("sqrt(" + c.to_string() + ") is not in Q(i); use --mode float");
            } else {
                return std::sqrt(to_scalar(args[0]));
            }
        }
        throw UsageError("'" + verb + "' cannot be called with arguments in parentheses");
    }

    Value<K> add(const Value<K>& a, const Value<K>& b, bool subtract) {
        if (is_scalar(a) && is_scalar(b)) {
            const K& x = std::get<K>(a);
            const K& y = std::get<K>(b);
            return subtract ? K(x - y) : K(x + y);
        }
        if ((is_numeric(a) || is_scalar(a)) && (is_numeric(b) || is_scalar(b))) {
            const double x = to_number(a), y = to_number(b);
            return subtract ? x - y : x + y;
        }
        if ((is_elementish(a) || is_scalar(a)) && (is_elementish(b) || is_scalar(b))) {
            GraphPtr g = graph_of(a) ? graph_of(a) : graph_of(b);
            Element<K> x = to_element(a, g);
            if (subtract)
                x -= to_element(b, g);
            else
                x += to_element(b, g);
            return x;
        }
        throw UsageError(std::string("cannot ") + (subtract ? "subtract " : "add ") + type_name(b) +
                         (subtract ? " from " : " to ") + type_name(a));
    }

    Value<K> multiply(const Value<K>& a, const Value<K>& b) {
        if (is_scalar(a) && is_scalar(b)) return K(std::get<K>(a) * std::get<K>(b));
        if ((is_numeric(a) || is_scalar(a)) && (is_numeric(b) || is_scalar(b))) return to_number(a) * to_number(b);
        if (std::holds_alternative<BlockUnitary<K>>(a) && std::holds_alternative<BlockUnitary<K>>(b))
            return compose_quasifree(std::get<BlockUnitary<K>>(a), std::get<BlockUnitary<K>>(b));
        if (is_scalar(a) && is_elementish(b)) return std::get<K>(a) * to_element(b, nullptr);
        if (is_elementish(a) && is_scalar(b)) return std::get<K>(b) * to_element(a, nullptr);
        if (is_elementish(a) && is_elementish(b)) return to_element(a, nullptr) * to_element(b, nullptr);
        throw UsageError("cannot multiply " + type_name(a) + " by " + type_name(b));
    }

    Value<K> divide(const Value<K>& a, const Value<K>& b) {
        if (is_scalar(b) && ScalarTraits<K>::is_zero(std::get<K>(b))) throw UsageError("division by zero");
        if (is_scalar(a) && is_scalar(b)) return K(std::get<K>(a) / std::get<K>(b));
        if ((is_numeric(a) || is_scalar(a)) && (is_numeric(b) || is_scalar(b))) {
            const double d = to_number(b);
            if (d == 0.0) throw UsageError("division by zero");
            return to_number(a) / d;
        }
        if (is_elementish(a) && (is_scalar(b) || is_numeric(b))) {
            const K c = to_scalar(b);
            return K(ScalarTraits<K>::one() / c) * to_element(a, nullptr);
        }
        throw UsageError("cannot divide " + type_name(a) + " by " + type_name(b));
    }

    Value<K> negate(const Value<K>& a) {
        if (auto* c = std::get_if<K>(&a)) return K(-*c);
        if (is_numeric(a)) return -to_number(a);
        if (is_elementish(a)) return -to_element(a, nullptr);
        throw UsageError("cannot negate " + type_name(a));
    }

    Value<K> compare(const Value<K>& a, const Value<K>& b, std::string_view op) {
        if (op == "==" || op == "!=") {
            const bool same = equal(a, b);
            return op == "==" ? same : !same;
        }
        const double x = to_number(a), y = to_number(b);
        if (op == "<") return x < y;
        if (op == "<=") return x <= y;
        if (op == ">") return x > y;
        return x >= y;
    }

    bool equal(const Value<K>& a, const Value<K>& b) {
        if (std::holds_alternative<bool>(a) || std::holds_alternative<HypothesisValue>(a) ||
            std::holds_alternative<bool>(b) || std::holds_alternative<HypothesisValue>(b))
            return to_bool(a) == to_bool(b);
        if ((is_numeric(a) || is_scalar(a)) && (is_numeric(b) || is_scalar(b))) {
            if (is_scalar(a) && is_scalar(b)) return ScalarTraits<K>::equal(std::get<K>(a), std::get<K>(b));
            return std::abs(to_number(a) - to_number(b)) <= number_tolerance;
        }
        if ((is_elementish(a) || is_scalar(a)) && (is_elementish(b) || is_scalar(b))) {
            GraphPtr g = graph_of(a) ? graph_of(a) : graph_of(b);
            return equals(to_element(a, g), to_element(b, g));
        }
        throw UsageError("cannot compare " + type_name(a) + " with " + type_name(b));
    }

    Cursor& cur_;
    Environment<K>& env_;
    std::size_t depth_ = 0;
};

std::string join_path(const Graph& g, const Path& p) { return g.path_to_string(p); }

nlohmann::json path_to_json(const Graph& g, const Path& p) {
    if (p.is_vertex()) return g.vertex_name(p.source());
    nlohmann::json edges = nlohmann::json::array();
    for (EdgeId e : p.edges()) edges.push_back(g.edge_name(e));
    return edges;
}

template <class K>
nlohmann::json matrix_to_json(const Matrix<K>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(ScalarTraits<K>::to_string(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class K>
std::string matrix_to_string(const Matrix<K>& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += r ? ", [" : "[";
        for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + ScalarTraits<K>::to_string(m(r, c));
        out += "]";
    }
    return out + "]";
}

std::string edge_set(const Graph& g, const std::vector<EdgeId>& edges) {
    std::string out = "{";
    for (std::size_t i = 0; i < edges.size(); ++i) out += (i ? ", " : "") + g.edge_name(edges[i]);
    return out + "}";
}

nlohmann::json edge_list(const Graph& g, const std::vector<EdgeId>& edges) {
    nlohmann::json out = nlohmann::json::array();
    for (EdgeId e : edges) out.push_back(g.edge_name(e));
    return out;
}

template <class K>
Matrix<K> parse_matrix(Cursor& cur, Environment<K>& env) {
    std::vector<std::vector<K>> rows;
    cur.expect("[");
    do {
        cur.expect("[");
        auto& row = rows.emplace_back();
        do {
            row.push_back(to_scalar(evaluate(cur, env)));
        } while (cur.consume(","));
        cur.expect("]");
    } while (cur.consume(","));
    cur.expect("]");
    Matrix<K> m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) cur.fail("matrix rows have different lengths");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

GraphPtr resolve_or_fail(Cursor& cur, const GraphResolver& resolve, const std::string& name) {
    GraphPtr g = resolve(name);
    if (!g) cur.fail("unknown graph '" + name + "'");
    return g;
}

}  // namespace

template <class K>
std::string type_name(const Value<K>& v) {
    switch (v.index()) {
        case 0: return "scalar";
        case 1: return "element";
        case 2: return "boolean";
        case 3: return "number";
        case 4: return "representation";
        case 5: return "block unitary";
        case 6: return "hypothesis verdict";
        case 7: return "delta";
        default: return "generator map";
    }
}

template <class K>
std::string Environment<K>::graph_name(const GraphPtr& g) const {
    for (const auto& [name, ptr] : graphs)
        if (ptr == g) return name;
    return "?";
}

template <class K>
void Environment<K>::check_new_name(const std::string& name) const {
    const unsigned char first = static_cast<unsigned char>(name.empty() ? '0' : name.front());
    if (!(std::isalpha(first) || first == '_'))
        throw UsageError("'" + name + "' is not a valid name; names start with a letter or '_'");
    if (reserved_words().count(name)) throw UsageError("'" + name + "' is a reserved word");
    if (variables.count(name) || maps.count(name)) throw UsageError("'" + name + "' is already defined");
}

template <class K>
Value<K> evaluate(Cursor& cur, Environment<K>& env, std::optional<Comparison<K>>* comparison) {
    return Evaluator<K>(cur, env).expression(comparison);
}

template <class K>
Value<K> evaluate_text(std::string_view text, Environment<K>& env, std::size_t line) {
    Cursor cur(text, line);
    Value<K> v = evaluate(cur, env);
    if (!cur.at_end()) cur.fail("unexpected '" + std::string(1, cur.peek()) + "' after expression");
    return v;
}

template <class K>
Element<K> parse_element(std::string_view text, const GraphPtr& g) {
    Environment<K> env;
    env.active = g;
    return to_element(evaluate_text(text, env), g);
}

template <class K>
K parse_scalar(std::string_view text) {
    Environment<K> env;
    return to_scalar(evaluate_text(text, env));
}

template <class K>
std::string format_element(const Element<K>& x) {
    if (x.is_zero()) return "0";
    const Graph& g = x.graph();
    std::string out;
    for (const auto& [key, c] : x.terms()) {
        std::string body;
        if (key.mu.is_vertex() && key.nu.is_vertex())
            body = "P(" + g.vertex_name(key.mu.source()) + ")";
        else if (key.nu.is_vertex())
            body = "S(" + join_path(g, key.mu) + ")";
        else if (key.mu.is_vertex())
            body = "adj(S(" + join_path(g, key.nu) + "))";
        else
            body = "S(" + join_path(g, key.mu) + ")*adj(S(" + join_path(g, key.nu) + "))";
        if (!out.empty()) out += " + ";
        if (c == ScalarTraits<K>::one())
            out += body;
        else
            out += "(" + ScalarTraits<K>::to_string(c) + ")*" + body;
    }
    return out;
}

template <class K>
std::string format_value(const Value<K>& v, const Environment<K>& env) {
    if (auto* c = std::get_if<K>(&v)) return ScalarTraits<K>::to_string(*c);
    if (auto* x = std::get_if<Element<K>>(&v)) return format_element(*x);
    if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (auto* d = std::get_if<double>(&v)) return format_double(*d);
    if (auto* r = std::get_if<RepValue<K>>(&v)) {
        std::string out = "level " + std::to_string(r->rep.level);
        for (std::size_t i = 0; i < r->rep.blocks.size(); ++i)
            out += "\n  " + r->graph->vertex_name(vertex_at(i)) + " (" + std::to_string(r->rep.blocks[i].rows()) +
                   "): " + matrix_to_string(r->rep.blocks[i]);
        return out;
    }
    if (auto* u = std::get_if<BlockUnitary<K>>(&v)) {
        std::string out = "unitary on " + env.graph_name(u->graph_ptr());
        for (const auto& [key, m] : u->blocks())
            out += "\n  block " + u->graph().vertex_name(key.first) + " -> " + u->graph().vertex_name(key.second) +
                   " = " + matrix_to_string(m);
        return out;
    }
    if (auto* h = std::get_if<HypothesisValue>(&v)) {
        if (!h->result.holds) return "false (every block is monomial)";
        const auto& w = *h->result.witness;
        return "true (p = sum of S_e S_e^* over " + edge_set(*h->graph, w.edges) + " at " +
               h->graph->vertex_name(w.vertex) + ")";
    }
    if (auto* d = std::get_if<DeltaValue>(&v)) {
        return format_double(d->result.value) + " (q over " + edge_set(*d->graph, d->result.minimizer) +
               (d->result.conjugate_in_diagonal ? ", u p u^* in D^1" : "") + ")";
    }
    const auto& ref = std::get<MapRef>(v);
    const auto& map = env.maps.at(ref.name);
    return "map " + ref.name + " : " + env.graph_name(map.source()) + " -> " + env.graph_name(map.target());
}

template <class K>
nlohmann::json element_to_json(const Element<K>& x) {
    nlohmann::json terms = nlohmann::json::array();
    const Graph& g = x.graph();
    for (const auto& [key, c] : x.terms())
        terms.push_back({ScalarTraits<K>::to_string(c), path_to_json(g, key.mu), path_to_json(g, key.nu)});
    return terms;
}

template <class K>
nlohmann::json value_to_json(const Value<K>& v, const Environment<K>& env) {
    nlohmann::json out;
    out["type"] = type_name(v);
    if (auto* c = std::get_if<K>(&v)) {
        out["value"] = ScalarTraits<K>::to_string(*c);
    } else if (auto* x = std::get_if<Element<K>>(&v)) {
        out["graph"] = env.graph_name(x->graph_ptr());
        out["text"] = format_element(*x);
        out["terms"] = element_to_json(*x);
    } else if (auto* b = std::get_if<bool>(&v)) {
        out["value"] = *b;
    } else if (auto* d = std::get_if<double>(&v)) {
        out["value"] = *d;
    } else if (auto* r = std::get_if<RepValue<K>>(&v)) {
        out["level"] = r->rep.level;
        out["blocks"] = nlohmann::json::array();
        for (std::size_t i = 0; i < r->rep.blocks.size(); ++i) {
            nlohmann::json basis = nlohmann::json::array();
            for (const auto& p : r->rep.bases[i]) basis.push_back(path_to_json(*r->graph, p));
            out["blocks"].push_back({{"vertex", r->graph->vertex_name(vertex_at(i))},
                                     {"basis", std::move(basis)},
                                     {"matrix", matrix_to_json(r->rep.blocks[i])}});
        }
    } else if (auto* u = std::get_if<BlockUnitary<K>>(&v)) {
        out["graph"] = env.graph_name(u->graph_ptr());
        out["blocks"] = nlohmann::json::array();
        for (const auto& [key, m] : u->blocks())
            out["blocks"].push_back({{"from", u->graph().vertex_name(key.first)},
                                     {"to", u->graph().vertex_name(key.second)},
                                     {"edges", edge_list(u->graph(), u->graph().edges_between(key.first, key.second))},
                                     {"matrix", matrix_to_json(m)}});
    } else if (auto* h = std::get_if<HypothesisValue>(&v)) {
        out["holds"] = h->result.holds;
        if (h->result.witness)
            out["witness"] = {{"vertex", h->graph->vertex_name(h->result.witness->vertex)},
                              {"edges", edge_list(*h->graph, h->result.witness->edges)}};
        else
            out["witness"] = nullptr;
    } else if (auto* d = std::get_if<DeltaValue>(&v)) {
        out["value"] = d->result.value;
        out["conjugate_in_diagonal"] = d->result.conjugate_in_diagonal;
        out["minimizer"] = edge_list(*d->graph, d->result.minimizer);
    } else {
        const auto& ref = std::get<MapRef>(v);
        const auto& map = env.maps.at(ref.name);
        out["name"] = ref.name;
        out["source"] = env.graph_name(map.source());
        out["target"] = env.graph_name(map.target());
        out["verified"] = map.verified();
    }
    return out;
}

template <class K>
std::vector<NamedUnitary<K>> parse_unitary_text(std::string_view text, const GraphResolver& resolve) {
    std::vector<NamedUnitary<K>> result;
    Cursor cur(text);
    Environment<K> scalars;
    while (!cur.at_end()) {
        cur.expect("unitary");
        std::string name = cur.id("unitary name");
        cur.expect("on");
        std::string graph = cur.id("graph name");
        const GraphPtr g = resolve_or_fail(cur, resolve, graph);
        cur.expect("{");
        std::map<VertexPair, Matrix<K>> blocks;
        while (!cur.consume("}")) {
            if (cur.consume("block")) {
                const std::size_t line = cur.line();
                const std::string from = cur.id("vertex id");
                cur.expect("->");
                const std::string to = cur.id("vertex id");
                cur.expect("=");
                const auto v = g->find_vertex(from);
                const auto w = g->find_vertex(to);
                if (!v || !w) throw ParseError("unknown vertex '" + (v ? to : from) + "'", line);
                Matrix<K> m;
                try {
                    m = parse_matrix(cur, scalars);
                } catch (const UsageError& err) {
                    throw ParseError(err.what(), cur.line());
                }
                const auto size = g->edges_between(*v, *w).size();
                const std::string where = "block " + from + " -> " + to;
                if (size == 0) throw ParseError(where + ": there are no edges " + from + " -> " + to, line);
                if (m.rows() != size || m.cols() != size)
                    throw ParseError(where + ": expected a " + std::to_string(size) + "x" + std::to_string(size) +
                                         " matrix",
                                     line);
                if (!m.is_unitary()) throw ParseError(where + " is not unitary", line);
                if (!blocks.emplace(VertexPair{*v, *w}, std::move(m)).second)
                    throw ParseError(where + " is given twice", line);
            } else if (cur.consume("default")) {
                cur.expect("identity");
            } else {
                cur.fail("expected 'block', 'default identity' or '}'");
            }
            cur.consume(";");
        }
        result.push_back({std::move(name), std::move(graph), BlockUnitary<K>::create(g, std::move(blocks))});
    }
    return result;
}

template <class K>
std::vector<NamedMap<K>> parse_map_text(std::string_view text, const GraphResolver& resolve) {
    std::vector<NamedMap<K>> result;
    Cursor cur(text);
    while (!cur.at_end()) {
        cur.expect("map");
        const std::size_t header_line = cur.line();
        std::string name = cur.id("map name");
        cur.expect(":");
        const GraphPtr source = resolve_or_fail(cur, resolve, cur.id("source graph"));
        cur.expect("->");
        const GraphPtr target = resolve_or_fail(cur, resolve, cur.id("target graph"));

        Environment<K> env;
        env.active = target;
        std::vector<std::optional<Element<K>>> vertex_images(source->vertex_count());
        std::vector<std::optional<Element<K>>> edge_images(source->edge_count());
        while (true) {
            const bool is_vertex = cur.consume("P");
            if (!is_vertex && !cur.consume("S")) break;
            const std::size_t line = cur.line();
            cur.expect("(");
            const std::string id = cur.id(is_vertex ? "vertex id" : "edge id");
            cur.expect(")");
            cur.expect("=");
            std::optional<Element<K>>* slot = nullptr;
            if (is_vertex) {
                auto v = source->find_vertex(id);
                if (!v) throw ParseError("unknown source vertex '" + id + "'", line);
                slot = &vertex_images[index_of(*v)];
            } else {
                auto e = source->find_edge(id);
                if (!e) throw ParseError("unknown source edge '" + id + "'", line);
                slot = &edge_images[index_of(*e)];
            }
            if (slot->has_value())
                throw ParseError(std::string(is_vertex ? "P(" : "S(") + id + ") is assigned twice", line);
            try {
                *slot = to_element(evaluate(cur, env), target);
            } catch (const UsageError& err) {
                throw ParseError(err.what(), line);
            } catch (const UnsupportedGraph& err) {
                throw ParseError(err.what(), line);
            }
        }

        std::vector<Element<K>> vertices, edges;
        for (std::size_t i = 0; i < vertex_images.size(); ++i) {
            if (!vertex_images[i])
                throw ParseError("map " + name + " gives no image for P(" + source->vertex_name(vertex_at(i)) + ")",
                                 header_line);
            vertices.push_back(std::move(*vertex_images[i]));
        }
        for (std::size_t i = 0; i < edge_images.size(); ++i) {
            if (!edge_images[i])
                throw ParseError("map " + name + " gives no image for S(" + source->edge_name(edge_at(i)) + ")",
                                 header_line);
            edges.push_back(std::move(*edge_images[i]));
        }
        result.push_back({std::move(name), GeneratorMap<K>(source, target, std::move(vertices), std::move(edges))});
    }
    return result;
}

#define CKALG_INSTANTIATE(K)                                                                           \
    template std::string type_name(const Value<K>&);                                                   \
    template struct Environment<K>;                                                                    \
    template Value<K> evaluate(Cursor&, Environment<K>&, std::optional<Comparison<K>>*);              \
    template Value<K> evaluate_text(std::string_view, Environment<K>&, std::size_t);                  \
    template Element<K> parse_element(std::string_view, const GraphPtr&);                             \
    template K parse_scalar(std::string_view);                                                         \
    template std::string format_element(const Element<K>&);                                            \
    template std::string format_value(const Value<K>&, const Environment<K>&);                        \
    template nlohmann::json element_to_json(const Element<K>&);                                        \
    template nlohmann::json value_to_json(const Value<K>&, const Environment<K>&);                    \
    template std::vector<NamedUnitary<K>> parse_unitary_text(std::string_view, const GraphResolver&);  \
    template std::vector<NamedMap<K>> parse_map_text(std::string_view, const GraphResolver&);

CKALG_INSTANTIATE(GaussianRational)
CKALG_INSTANTIATE(Complex)

#undef CKALG_INSTANTIATE

}  // namespace ckalg
