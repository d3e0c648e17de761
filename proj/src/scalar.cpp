#include "ckalg/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ckalg/errors.hpp"

namespace ckalg {

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw UsageError("division by zero");
    mpq_class d = o.norm();
    *this *= o.conj();
    re_ /= d;
    im_ /= d;
    return *this;
}

std::string GaussianRational::to_string() const {
    const bool has_re = sgn(re_) != 0;
    const bool has_im = sgn(im_) != 0;
    if (!has_im) return re_.get_str();

    std::string im;
    mpq_class mag = abs(im_);
    if (mag == 1)
        im = "i";
    else
        im = mag.get_str() + " i";

    if (!has_re) return (sgn(im_) < 0 ? "-" : "") + im;
    return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + im;
}

std::optional<mpq_class> exact_sqrt(const mpq_class& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class rn = sqrt(num), rd = sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return mpq_class(rn, rd);
}

std::string format_double(double x) {
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string ScalarTraits<Complex>::to_string(const Complex& k) {
    const double re = k.real(), im = k.imag();
    if (im == 0.0) return format_double(re);
    std::string mag = std::abs(im) == 1.0 ? "i" : format_double(std::abs(im)) + " i";
    if (re == 0.0) return (im < 0 ? "-" : "") + mag;
    return format_double(re) + (im < 0 ? "-" : "+") + mag;
}

}  // namespace ckalg
