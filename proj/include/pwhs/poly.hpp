#pragma once

// Dense polynomials with coefficients in ascending degree.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

namespace pwhs {

template <class K>
struct Poly {
    std::vector<K> c;  // c[k] multiplies x^k

    Poly() = default;
    Poly(std::initializer_list<K> l) : c(l) {}
    explicit Poly(std::vector<K> v) : c(std::move(v)) {}

    static Poly constant(K v) { return Poly(std::vector<K>{v}); }

    int degree() const {
        for (std::size_t k = c.size(); k-- > 0;)
            if (c[k] != K(0)) return static_cast<int>(k);
        return -1;
    }
    bool is_zero() const { return degree() < 0; }

    template <class X>
    X operator()(const X& x) const {
        X r = X(0);
        for (std::size_t k = c.size(); k-- > 0;) r = r * x + X(c[k]);
        return r;
    }

    Poly derivative() const {
        Poly d;
        for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * K(static_cast<double>(k)));
        return d;
    }

    // antiderivative with zero constant term
    Poly antiderivative() const {
        Poly a;
        a.c.push_back(K(0));
        for (std::size_t k = 0; k < c.size(); ++k) a.c.push_back(c[k] / K(static_cast<double>(k + 1)));
        return a;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.c.assign(std::max(a.c.size(), b.c.size()), K(0));
        for (std::size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
        for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + b * K(-1); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c.empty() || b.c.empty()) return Poly();
        Poly r;
        r.c.assign(a.c.size() + b.c.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Poly operator*(Poly a, K s) {
        for (auto& v : a.c) v *= s;
        return a;
    }

    Poly pow(unsigned n) const {
        Poly r = constant(K(1));
        for (unsigned i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    // sum_k c[k] * u^k * v^(n-k) for polynomials u, v and n >= degree
    Poly homogenize(const Poly& u, const Poly& v, unsigned n) const {
        Poly r;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] == K(0)) continue;
            r = r + u.pow(static_cast<unsigned>(k)) * v.pow(n - static_cast<unsigned>(k)) * c[k];
        }
        return r;
    }

    template <class K2>
    Poly<K2> cast() const {
        Poly<K2> r;
        for (const auto& v : c) r.c.push_back(K2(v));
        return r;
    }
};

template <class R>
using CPoly = Poly<std::complex<R>>;

// Real and imaginary parts of q(x + i*y0) as real polynomials in x.
template <class R>
std::pair<Poly<R>, Poly<R>> restrict_to_line(const CPoly<R>& q, R y0) {
    using C = std::complex<R>;
    CPoly<R> shifted = q.homogenize(CPoly<R>{C(0, y0), C(1)}, CPoly<R>{C(1)},
                                    static_cast<unsigned>(std::max(q.degree(), 0)));
    Poly<R> re, im;
    for (const auto& v : shifted.c) {
        re.c.push_back(v.real());
        im.c.push_back(v.imag());
    }
    return {re, im};
}

}  // namespace pwhs
