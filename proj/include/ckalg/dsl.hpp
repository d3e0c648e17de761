#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ckalg/element.hpp"
#include "ckalg/endo.hpp"
#include "ckalg/graph_moves.hpp"
#include "ckalg/matrix_rep.hpp"
#include "ckalg/scanner.hpp"

namespace ckalg {

/// Reference to a generator map held by the environment.
struct MapRef {
    std::string name;
};

template <class K>
struct RepValue {
    GraphPtr graph;
    BlockMatrixRep<K> rep;
};

struct HypothesisValue {
    GraphPtr graph;
    HypothesisResult result;
};

struct DeltaValue {
    GraphPtr graph;
    DeltaResult result;
};

template <class K>
using Value = std::variant<K, Element<K>, bool, double, RepValue<K>, BlockUnitary<K>, HypothesisValue,
                           DeltaValue, MapRef>;

template <class K>
std::string type_name(const Value<K>& v);

/// Everything an expression can refer to. `active` supplies the graph for
/// P(...), S(...) and bare scalars used as elements.
template <class K>
struct Environment {
    std::map<std::string, GraphPtr> graphs;
    std::map<std::string, GeneratorMap<K>> maps;
    std::map<std::string, OutSplitPartition> partitions;
    std::map<std::string, Value<K>> variables;
    GraphPtr active;
    std::vector<std::string> warnings;

    std::string graph_name(const GraphPtr& g) const;
    /// Throws UsageError when `name` is taken by a variable or map, or is reserved.
    void check_new_name(const std::string& name) const;
};

/// Both sides of a top-level comparison, kept for failure reports.
template <class K>
struct Comparison {
    Value<K> lhs;
    Value<K> rhs;
    std::string op;
};

/// Parses and evaluates one expression, stopping at the first token that
/// cannot continue it. `comparison` receives the operands of a top-level
/// `==`, `!=`, `<`, `<=`, `>`, `>=`.
template <class K>
Value<K> evaluate(Cursor& cur, Environment<K>& env, std::optional<Comparison<K>>* comparison = nullptr);

/// Evaluates the whole of `text`; trailing input is an error.
template <class K>
Value<K> evaluate_text(std::string_view text, Environment<K>& env, std::size_t line = 1);

/// Parses an element of the algebra of g.
template <class K>
Element<K> parse_element(std::string_view text, const GraphPtr& g);

template <class K>
K parse_scalar(std::string_view text);

/// Printed in the expression grammar, so parse_element reads it back exactly.
template <class K>
std::string format_element(const Element<K>& x);

template <class K>
std::string format_value(const Value<K>& v, const Environment<K>& env);

/// [[coef, mu, nu], ...]; a length-0 path is written as its vertex id.
template <class K>
nlohmann::json element_to_json(const Element<K>& x);

template <class K>
nlohmann::json value_to_json(const Value<K>& v, const Environment<K>& env);

/// Resolves the graph named in a `unitary ... on <graph>` or `map` header.
using GraphResolver = std::function<GraphPtr(const std::string& name)>;

template <class K>
struct NamedUnitary {
    std::string name;
    std::string graph;
    BlockUnitary<K> unitary;
};

/// Blocks of the form
///
///     unitary u on E {
///       block v -> w = [[3/5, 4/5], [-4/5, 3/5]];
///       default identity
///     }
///
/// Entries are scalar expressions (sqrt(...) included).
template <class K>
std::vector<NamedUnitary<K>> parse_unitary_text(std::string_view text, const GraphResolver& resolve);

template <class K>
struct NamedMap {
    std::string name;
    GeneratorMap<K> map;
};

/// Sections of the form
///
///     map phi : E -> O2
///     P(v1) = S(t1)*adj(S(t1))
///     S(a)  = S(t1 t1)*adj(S(t1))
///
/// Every source generator needs an image.
template <class K>
std::vector<NamedMap<K>> parse_map_text(std::string_view text, const GraphResolver& resolve);

}  // namespace ckalg
