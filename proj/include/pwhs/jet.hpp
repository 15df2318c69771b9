#pragma once

// Truncated Taylor series arithmetic. A Jet<T, N> holds c[k] = f^(k)(x0) / k!
// for k = 0..N and propagates exactly through the elementary functions below.

#include <array>
#include <cmath>
#include <cstddef>

namespace pwhs {

template <class T, std::size_t N>
struct Jet {
    std::array<T, N + 1> c{};

    Jet() = default;
    Jet(T v) { c[0] = v; }  // NOLINT: implicit constants are intended

    static Jet variable(T x0) {
        Jet j(x0);
        if constexpr (N >= 1) j.c[1] = T(1);
        return j;
    }

    T value() const { return c[0]; }

    // k-th derivative at the expansion point
    T derivative(std::size_t k) const {
        T f = T(1);
        for (std::size_t i = 2; i <= k; ++i) f *= T(i);
        return c[k] * f;
    }

    Jet& operator+=(const Jet& o) { for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k]; return *this; }
    Jet& operator-=(const Jet& o) { for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k]; return *this; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend Jet operator-(const Jet& a) {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) r.c[k] = -a.c[k];
        return r;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) {
            T s = T(0);
            for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
            r.c[k] = s;
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet q;
        for (std::size_t k = 0; k <= N; ++k) {
            T s = a.c[k];
            for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
            q.c[k] = s / b.c[0];
        }
        return q;
    }
};

namespace detail {
// d/dt of a series, as c'[k] = (k+1) c[k+1]
template <class T, std::size_t N>
Jet<T, N> deriv(const Jet<T, N>& a) {
    Jet<T, N> r;
    for (std::size_t k = 0; k < N; ++k) r.c[k] = T(k + 1) * a.c[k + 1];
    return r;
}
template <class T, std::size_t N>
Jet<T, N> integrate(const Jet<T, N>& d, T c0) {
    Jet<T, N> r(c0);
    for (std::size_t k = 1; k <= N; ++k) r.c[k] = d.c[k - 1] / T(k);
    return r;
}
}  // namespace detail

template <class T, std::size_t N>
Jet<T, N> sqrt(const Jet<T, N>& a) {
    using std::sqrt;
    Jet<T, N> y;
    y.c[0] = sqrt(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        T s = a.c[k];
        for (std::size_t j = 1; j < k; ++j) s -= y.c[j] * y.c[k - j];
        y.c[k] = s / (T(2) * y.c[0]);
    }
    return y;
}

template <class T, std::size_t N>
void sincos(const Jet<T, N>& a, Jet<T, N>& s, Jet<T, N>& co) {
    using std::cos;
    using std::sin;
    s = Jet<T, N>(sin(a.c[0]));
    co = Jet<T, N>(cos(a.c[0]));
    for (std::size_t k = 1; k <= N; ++k) {
        T ss = T(0), cc = T(0);
        for (std::size_t j = 1; j <= k; ++j) {
            ss += T(j) * a.c[j] * co.c[k - j];
            cc -= T(j) * a.c[j] * s.c[k - j];
        }
        s.c[k] = ss / T(k);
        co.c[k] = cc / T(k);
    }
}

template <class T, std::size_t N>
Jet<T, N> sin(const Jet<T, N>& a) {
    Jet<T, N> s, c;
    sincos(a, s, c);
    return s;
}

template <class T, std::size_t N>
Jet<T, N> cos(const Jet<T, N>& a) {
    Jet<T, N> s, c;
    sincos(a, s, c);
    return c;
}

template <class T, std::size_t N>
Jet<T, N> asin(const Jet<T, N>& a) {
    using std::asin;
    Jet<T, N> g = Jet<T, N>(T(1)) / sqrt(Jet<T, N>(T(1)) - a * a);
    return detail::integrate(detail::deriv(a) * g, asin(a.c[0]));
}

}  // namespace pwhs
