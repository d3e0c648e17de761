#pragma once

#include <complex>
#include <concepts>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace ckalg {

/// Element of Q(i): exact real and imaginary rational parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational imaginary_unit() { return {0, 1}; }

    const mpq_class& real() const noexcept { return re_; }
    const mpq_class& imag() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    GaussianRational conj() const { return {re_, -im_}; }
    /// |z|^2
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    /// Throws UsageError on division by zero.
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// Literal form accepted back by the expression parser: "3/5-4/5 i", "-i", "2".
    std::string to_string() const;

private:
    mpq_class re_;
    mpq_class im_;
};

using Complex = std::complex<double>;

/// Square root of a non-negative rational when it is itself rational.
std::optional<mpq_class> exact_sqrt(const mpq_class& q);

/// Shortest round-trippable rendering of a double, e.g. "0.5", "-1e-12".
std::string format_double(double x);

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussianRational> {
    static constexpr bool exact = true;
    static constexpr const char* mode_name = "exact";
    static constexpr double tolerance = 0.0;

    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return 1; }
    static GaussianRational from_exact(const GaussianRational& q) { return q; }
    static bool is_zero(const GaussianRational& k) { return k.is_zero(); }
    static bool equal(const GaussianRational& a, const GaussianRational& b) { return a == b; }
    static GaussianRational conj(const GaussianRational& k) { return k.conj(); }
    static Complex to_complex(const GaussianRational& k) { return k.to_complex(); }
    static bool is_unimodular(const GaussianRational& k) { return k.norm() == 1; }
    static std::string to_string(const GaussianRational& k) { return k.to_string(); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* mode_name = "float";
    /// Comparison tolerance for every float-mode decision.
    static constexpr double tolerance = 1e-9;

    static Complex zero() { return {}; }
    static Complex one() { return 1.0; }
    static Complex from_exact(const GaussianRational& q) { return q.to_complex(); }
    static bool is_zero(const Complex& k) { return std::abs(k) <= tolerance; }
    static bool equal(const Complex& a, const Complex& b) { return std::abs(a - b) <= tolerance; }
    static Complex conj(const Complex& k) { return std::conj(k); }
    static Complex to_complex(const Complex& k) { return k; }
    static bool is_unimodular(const Complex& k) { return std::abs(std::abs(k) - 1.0) <= tolerance; }
    static std::string to_string(const Complex& k);
};

/// Coefficient fields the engine is instantiated for.
template <class K>
concept Scalar = requires(const K& a, const K& b) {
    { a + b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { ScalarTraits<K>::is_zero(a) } -> std::same_as<bool>;
    { ScalarTraits<K>::conj(a) } -> std::convertible_to<K>;
};

}  // namespace ckalg
