// Copyright 2026 The holoflux authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "holoflux/common.hpp"

namespace holoflux {

/// Exact rational over int64. Finite-group scenarios in "exact" mode run the
/// whole kernel algebra over these, so zero residuals are literal zeros.
class Rat {
  public:
    Rat() = default;
    Rat(std::int64_t n) : num_(n), den_(1) {} // NOLINT(google-explicit-constructor)
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rat operator+(const Rat &a, const Rat &b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat &a, const Rat &b) {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat &a, const Rat &b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat &a, const Rat &b) {
        if (b.num_ == 0) throw DomainError("rational division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rat operator-() const { return Rat(-num_, den_); }
    Rat &operator+=(const Rat &b) { return *this = *this + b; }
    Rat &operator-=(const Rat &b) { return *this = *this - b; }
    Rat &operator*=(const Rat &b) { return *this = *this * b; }
    Rat &operator/=(const Rat &b) { return *this = *this / b; }

    friend bool operator==(const Rat &a, const Rat &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat &a, const Rat &b) { return !(a == b); }

    bool is_zero() const { return num_ == 0; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend std::ostream &operator<<(std::ostream &os, const Rat &r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

  private:
    void normalize() {
        if (den_ == 0) throw DomainError("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Complex number with exact rational parts.
class RatCx {
  public:
    RatCx() = default;
    RatCx(Rat re) : re_(re) {} // NOLINT(google-explicit-constructor)
    RatCx(std::int64_t re) : re_(re) {} // NOLINT(google-explicit-constructor)
    RatCx(Rat re, Rat im) : re_(re), im_(im) {}

    const Rat &real() const { return re_; }
    const Rat &imag() const { return im_; }

    friend RatCx operator+(const RatCx &a, const RatCx &b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend RatCx operator-(const RatCx &a, const RatCx &b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend RatCx operator*(const RatCx &a, const RatCx &b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    RatCx operator-() const { return {-re_, -im_}; }
    RatCx &operator+=(const RatCx &b) { return *this = *this + b; }
    RatCx &operator-=(const RatCx &b) { return *this = *this - b; }
    RatCx &operator*=(const RatCx &b) { return *this = *this * b; }

    friend bool operator==(const RatCx &a, const RatCx &b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const RatCx &a, const RatCx &b) { return !(a == b); }

    RatCx conj() const { return {re_, -im_}; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    Rat abs2() const { return re_ * re_ + im_ * im_; }
    cx to_complex() const { return {re_.to_double(), im_.to_double()}; }

    friend std::ostream &operator<<(std::ostream &os, const RatCx &z) {
        return os << '(' << z.re_ << ',' << z.im_ << ')';
    }

  private:
    Rat re_;
    Rat im_;
};

inline RatCx conj_of(const RatCx &z) { return z.conj(); }
inline cx conj_of(const cx &z) { return std::conj(z); }
inline bool is_zero_of(const RatCx &z) { return z.is_zero(); }
inline bool is_zero_of(const cx &z) { return z == cx(0.0, 0.0); }
inline double abs2_of(const RatCx &z) { return z.abs2().to_double(); }
inline double abs2_of(const cx &z) { return std::norm(z); }

} // namespace holoflux
