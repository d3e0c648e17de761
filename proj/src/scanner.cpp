#include "ckalg/scanner.hpp"

#include <cctype>
#include <cstdlib>

#include "ckalg/errors.hpp"

namespace ckalg {

namespace {

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

constexpr long max_exponent = 1000;

}  // namespace

bool is_id_char(char c) noexcept {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '.' || c == '^' || c == '\'' || u >= 0x80;
}

void Cursor::skip_space() {
    while (pos_ < text_.size()) {
        const char c = text_[pos_];
        if (c == '\n') {
            ++line_;
            ++pos_;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            ++pos_;
        } else if (c == '#') {
            while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        } else {
            break;
        }
    }
}

bool Cursor::at_end() {
    skip_space();
    return pos_ >= text_.size();
}

char Cursor::peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
}

char Cursor::peek_raw(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
}

bool Cursor::consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    const bool word = !token.empty() && is_id_char(token.back());
    if (word && is_id_char(peek_raw(token.size()))) return false;
    pos_ += token.size();
    return true;
}

void Cursor::expect(std::string_view token) {
    if (!consume(token)) {
        const char c = peek();
        fail("expected '" + std::string(token) + "'" +
             (c == '\0' ? std::string(" at end of input") : " before '" + std::string(1, c) + "'"));
    }
}

bool Cursor::peek_id() { return is_id_char(peek()); }

std::string Cursor::id(std::string_view what) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_id_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected " + std::string(what));
    return std::string(text_.substr(start, pos_ - start));
}

std::string Cursor::quoted() {
    expect("\"");
    std::string out;
    while (true) {
        if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated string");
        const char c = text_[pos_++];
        if (c == '"') break;
        if (c == '\\' && pos_ < text_.size()) {
            out += text_[pos_++];
            continue;
        }
        out += c;
    }
    return out;
}

bool Cursor::peek_number() {
    const char c = peek();
    return is_digit(c) || (c == '.' && is_digit(peek_raw(1)));
}

bool Cursor::peek_literal() {
    if (peek_number()) return true;
    return peek() == 'i' && !is_id_char(peek_raw(1));
}

Cursor::Number Cursor::number() {
    skip_space();
    const std::size_t start = pos_;
    std::string digits;
    long frac_digits = 0;
    bool decimal = false;
    while (is_digit(peek_raw())) digits += text_[pos_++];
    if (peek_raw() == '.') {
        decimal = true;
        ++pos_;
        while (is_digit(peek_raw())) {
            digits += text_[pos_++];
            ++frac_digits;
        }
    }
    if (digits.empty()) fail("malformed number");
    long exponent = 0;
    if ((peek_raw() == 'e' || peek_raw() == 'E') &&
        (is_digit(peek_raw(1)) || ((peek_raw(1) == '+' || peek_raw(1) == '-') && is_digit(peek_raw(2))))) {
        decimal = true;
        ++pos_;
        bool negative = false;
        if (peek_raw() == '+' || peek_raw() == '-') negative = text_[pos_++] == '-';
        while (is_digit(peek_raw())) {
            exponent = exponent * 10 + (text_[pos_++] - '0');
            if (exponent > max_exponent) fail("exponent out of range");
        }
        if (negative) exponent = -exponent;
    }
    const std::string literal(text_.substr(start, pos_ - start));

    mpq_class value{mpz_class(digits, 10)};
    const long scale = exponent - frac_digits;
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale < 0)
        value /= power;
    else
        value *= power;
    value.canonicalize();
    double approx = std::strtod(literal.c_str(), nullptr);

    if (!decimal && peek_raw() == '/' && is_digit(peek_raw(1))) {
        ++pos_;
        const std::size_t den_start = pos_;
        while (is_digit(peek_raw())) ++pos_;
        const std::string den(text_.substr(den_start, pos_ - den_start));
        mpz_class d(den, 10);
        if (d == 0) fail("zero denominator in '" + literal + "/" + den + "'");
        value /= d;
        value.canonicalize();
        approx /= std::strtod(den.c_str(), nullptr);
    }
    return {value, approx};
}

ScalarLiteral Cursor::scalar_literal(bool negative) {
    skip_space();
    const double sign = negative ? -1.0 : 1.0;
    if (peek_raw() == 'i' && !is_id_char(peek_raw(1))) {
        ++pos_;
        return {GaussianRational(0, negative ? -1 : 1), Complex(0.0, sign)};
    }
    Number n = number();
    if (negative) {
        n.exact = -n.exact;
        n.approx = -n.approx;
    }

    const std::size_t save_pos = pos_;
    const std::size_t save_line = line_;
    skip_space();
    if (peek_raw() == 'i' && !is_id_char(peek_raw(1))) {
        ++pos_;
        return {GaussianRational(0, n.exact), Complex(0.0, n.approx)};
    }
    pos_ = save_pos;
    line_ = save_line;
    return {GaussianRational(n.exact), Complex(n.approx, 0.0)};
}

void Cursor::fail(const std::string& message) const { throw ParseError(message, line_); }

}  // namespace ckalg
