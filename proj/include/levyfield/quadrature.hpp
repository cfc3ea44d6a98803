#ifndef LEVYFIELD_QUADRATURE_HPP
#define LEVYFIELD_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levyfield::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 15;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(double value, double achieved, const Options& opts)
        : std::runtime_error(message(value, achieved, opts)),
          value_(value),
          achieved_(achieved) {}

    double value() const { return value_; }
    double achieved_error() const { return achieved_; }

  private:
    static std::string message(double value, double achieved, const Options& opts) {
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "quadrature did not converge: value=%.17g achieved_error=%.3g "
                      "(requested abs=%.3g rel=%.3g)",
                      value, achieved, opts.abs_tol, opts.rel_tol);
        return buf;
    }

    double value_;
    double achieved_;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a, b]. Throws QuadratureError with the
/// achieved error estimate when neither tolerance is met.
template <class F>
double integrate(F&& f, double a, double b, const Options& opts = {}) {
    if (a == b) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, static_cast<unsigned>(opts.max_depth),
        0.1 * opts.rel_tol, &err, &l1);
    if (!(err <= opts.abs_tol || err <= opts.rel_tol * std::abs(v)))
        throw QuadratureError(v, err, opts);
    return v;
}

/// Full 64 Gauss-Legendre nodes/weights mapped from the boost half-arrays.
struct Gauss64 {
    std::array<double, 64> node;   // on (-1, 1)
    std::array<double, 64> weight;
};

inline const Gauss64& gauss64() {
    static const Gauss64 table = [] {
        Gauss64 g{};
        using rule = boost::math::quadrature::gauss<double, 64>;
        const auto& x = rule::abscissa(); // 32 non-negative nodes
        const auto& w = rule::weights();
        for (std::size_t i = 0; i < 32; ++i) {
            g.node[i] = -x[31 - i];
            g.weight[i] = w[31 - i];
            g.node[32 + i] = x[i];
            g.weight[32 + i] = w[i];
        }
        return g;
    }();
    return table;
}

/// Fixed 64x64 tensor Gauss-Legendre over [ax,bx] x [ay,by].
template <class F>
double gauss64_rect(F&& f, double ax, double bx, double ay, double by) {
    if (ax == bx || ay == by) return 0.0;
    const auto& g = gauss64();
    const double cx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    const double cy = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    double total = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double x = cx + hx * g.node[i];
        double row = 0.0;
        for (int j = 0; j < 64; ++j) {
            const double y = cy + hy * g.node[j];
            row += g.weight[j] * f(x, y);
        }
        total += g.weight[i] * row;
    }
    return total * hx * hy;
}

/// 64x64 tensor rule on the triangle {a <= x <= b, lo(x) <= y <= hi(x)} via the
/// collapsed parametrisation y = lo + v (hi - lo), v in [0,1].
template <class F, class Lo, class Hi>
double gauss64_xstrip(F&& f, double a, double b, Lo&& lo, Hi&& hi) {
    if (a == b) return 0.0;
    const auto& g = gauss64();
    const double cx = 0.5 * (a + b), hx = 0.5 * (b - a);
    double total = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double x = cx + hx * g.node[i];
        const double y0 = lo(x), y1 = hi(x);
        const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
        double row = 0.0;
        for (int j = 0; j < 64; ++j) {
            const double y = cy + hy * g.node[j];
            row += g.weight[j] * f(x, y);
        }
        total += g.weight[i] * row * hy;
    }
    return total * hx;
}

} // namespace levyfield::quad

#endif
