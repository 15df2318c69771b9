#pragma once

#include <cmath>
#include <functional>

namespace pwhs {

namespace detail {

struct GK15 {
    static constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    template <class F>
    static void eval(const F& f, double a, double b, double& kr, double& err) {
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double fc = f(c);
        kr = wk[7] * fc;
        double g = wg[3] * fc;
        for (int j = 0; j < 7; ++j) {
            double dx = h * xk[j];
            double s = f(c - dx) + f(c + dx);
            kr += wk[j] * s;
            if (j % 2 == 1) g += wg[j / 2] * s;
        }
        kr *= h;
        g *= h;
        err = std::abs(kr - g);
    }
};

template <class F>
double adaptive(const F& f, double a, double b, double tol, int depth) {
    double kr, err;
    GK15::eval(f, a, b, kr, err);
    if (err <= tol || depth <= 0) return kr;
    double m = 0.5 * (a + b);
    return adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) integration with an absolute error target.
inline double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12) {
    if (a == b) return 0.0;
    return detail::adaptive(f, a, b, abs_tol, 40);
}

}  // namespace pwhs
