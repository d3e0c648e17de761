#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ckalg/scalar.hpp"

namespace ckalg {

/// A scalar literal as written. The exact value is always available; the
/// double parts are parsed from the original digits so printed doubles read
/// back bit-for-bit.
struct ScalarLiteral {
    GaussianRational exact;
    Complex approx;
};

template <class K>
K literal_value(const ScalarLiteral& lit) {
    if constexpr (ScalarTraits<K>::exact)
        return lit.exact;
    else
        return lit.approx;
}

/// Characters allowed in vertex, edge and object ids.
bool is_id_char(char c) noexcept;

/// Hand-written scanner shared by every text format. Whitespace, newlines and
/// `#` comments are skipped between tokens; errors carry the current line.
class Cursor {
public:
    explicit Cursor(std::string_view text, std::size_t first_line = 1)
        : text_(text), line_(first_line) {}

    void skip_space();
    bool at_end();
    std::size_t line() const noexcept { return line_; }
    std::size_t position() const noexcept { return pos_; }

    /// Next non-space character, or '\0' at the end.
    char peek();
    /// Character `ahead` positions after the next non-space character.
    char peek_raw(std::size_t ahead = 0) const;
    bool consume(std::string_view token);
    void expect(std::string_view token);
    bool peek_id();
    std::string id(std::string_view what = "identifier");
    std::string quoted();
    bool peek_number();
    /// Number, fraction `a/b`, imaginary `b i`, or `i`. `a+b i` is left to the
    /// expression grammar, so `1/2 + i/2` reads as 1/2 + (i/2).
    ScalarLiteral scalar_literal(bool negative = false);
    bool peek_literal();

    [[noreturn]] void fail(const std::string& message) const;

private:
    struct Number {
        mpq_class exact;
        double approx;
    };
    Number number();

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

}  // namespace ckalg
