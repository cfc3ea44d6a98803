#include "levyfield/drift.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace levyfield {

InitialCurve InitialCurve::constant(double value) {
    InitialCurve c;
    c.kind_ = Kind::Constant;
    c.a_ = value;
    return c;
}

InitialCurve InitialCurve::affine(double intercept, double slope) {
    InitialCurve c;
    c.kind_ = Kind::Affine;
    c.a_ = intercept;
    c.b_ = slope;
    return c;
}

InitialCurve InitialCurve::table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw std::invalid_argument("table curve: need at least two knots");
    InitialCurve c;
    c.kind_ = Kind::Table;
    c.warned_ = std::make_shared<std::atomic<bool>>(false);
    c.knot_t_.reserve(knots.size());
    c.knot_v_.reserve(knots.size());
    for (const auto& [t, v] : knots) {
        if (!c.knot_t_.empty() && !(t > c.knot_t_.back()))
            throw std::invalid_argument("table curve: knots must be strictly increasing in t");
        if (!std::isfinite(t) || !std::isfinite(v) || t < 0.0)
            throw std::invalid_argument("table curve: knots must be finite with t >= 0");
        c.knot_t_.push_back(t);
        c.knot_v_.push_back(v);
    }
    c.knot_int_.resize(c.knot_t_.size(), 0.0);
    for (std::size_t i = 1; i < c.knot_t_.size(); ++i)
        c.knot_int_[i] = c.knot_int_[i - 1] +
                         0.5 * (c.knot_v_[i] + c.knot_v_[i - 1]) *
                             (c.knot_t_[i] - c.knot_t_[i - 1]);
    return c;
}

InitialCurve InitialCurve::positivity_floor(double base) {
    if (!(base >= 0.0))
        throw std::invalid_argument("positivity floor curve: base must be >= 0");
    InitialCurve c;
    c.kind_ = Kind::PositivityFloor;
    c.base_ = base;
    return c;
}

void InitialCurve::warn_extrapolation(double t) const {
    if (warned_ && !warned_->exchange(true))
        std::cerr << "[levyfield] warning: initial-curve table extrapolated flat at t="
                  << t << "\n";
}

double InitialCurve::value(double t) const {
    switch (kind_) {
        case Kind::Constant: return a_;
        case Kind::Affine: return a_ + b_ * t;
        case Kind::Table: {
            if (t <= knot_t_.front()) {
                if (t < knot_t_.front()) warn_extrapolation(t);
                return knot_v_.front();
            }
            if (t >= knot_t_.back()) {
                if (t > knot_t_.back()) warn_extrapolation(t);
                return knot_v_.back();
            }
            const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - knot_t_.begin()) - 1;
            const double w = (t - knot_t_[i]) / (knot_t_[i + 1] - knot_t_[i]);
            return (1.0 - w) * knot_v_[i] + w * knot_v_[i + 1];
        }
        case Kind::PositivityFloor:
            throw std::logic_error(
                "positivity-floor curve needs model context; use drift::mu0_value");
    }
    return 0.0;
}

double InitialCurve::integral(double t) const {
    switch (kind_) {
        case Kind::Constant: return a_ * t;
        case Kind::Affine: return a_ * t + 0.5 * b_ * t * t;
        case Kind::Table: {
            if (t <= knot_t_.front()) return knot_v_.front() * t;
            // flat head before the first knot
            double total = knot_v_.front() * knot_t_.front();
            if (t >= knot_t_.back())
                return total + knot_int_.back() + knot_v_.back() * (t - knot_t_.back());
            const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - knot_t_.begin()) - 1;
            const double v_t = value(t);
            return total + knot_int_[i] + 0.5 * (knot_v_[i] + v_t) * (t - knot_t_[i]);
        }
        case Kind::PositivityFloor:
            throw std::logic_error(
                "positivity-floor curve needs model context; use drift::mu0_integral");
    }
    return 0.0;
}

namespace drift {

double increment_quadrature(const LevyMeasure& measure, const ScalingFunction& kappa,
                            double s, double t, const quad::Options& inner,
                            const quad::Options& outer) {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("drift increment: needs 0 <= s <= t");
    if (s == 0.0) return 0.0;
    const bool kconst = kappa.is_constant();
    const double kc = kconst ? kappa.constant_value() : 0.0;
    auto column = [&](double x) {
        // below the diagonal (y <= x) the time-to-maturity factor is t - x
        double low;
        if (kconst) {
            low = x * kc * measure.phi(kc * (t - x));
        } else {
            low = quad::integrate(
                [&](double y) {
                    const double k = kappa(x, y);
                    return k * measure.phi(k * (t - x));
                },
                0.0, x, inner);
        }
        const double high = quad::integrate(
            [&](double y) {
                const double k = kconst ? kc : kappa(x, y);
                return k * measure.phi(k * (t - y));
            },
            x, t, inner);
        return low + high;
    };
    return quad::integrate(column, 0.0, s, outer);
}

double poisson_closed(double z, double s, double t) {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("poisson drift: needs 0 <= s <= t");
    return z * ((2.0 - s) * std::exp(s - t) - 2.0 * std::exp(-t) - s + s * t);
}

double gamma_closed(double z, double s, double t) {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("gamma drift: needs 0 <= s <= t");
    const double v = 1.0 + t - s;
    const double w = 1.0 + t;
    return z * (s * t + 2.0 * s + 2.0 * w * (std::log(v) - std::log(w)) -
                s * std::log(v));
}

double poisson_closed_antiderivative_t(double z, double s, double t) {
    return z * (-(2.0 - s) * std::exp(s - t) + 2.0 * std::exp(-t) - s * t +
                0.5 * s * t * t);
}

double gamma_closed_antiderivative_t(double z, double s, double t) {
    const double v = 1.0 + t - s;
    const double w = 1.0 + t;
    const double lv = std::log(v);
    const double lw = std::log(w);
    return z * (0.5 * s * t * t + 2.0 * s * t + v * v * lv - 0.5 * v * v +
                s * v * lv - s * v - w * w * lw + 0.5 * w * w);
}

double poisson_diag_integral(double z, double s) {
    return z * (2.0 * s - s * s + s * s * s / 3.0 + 2.0 * std::exp(-s) - 2.0);
}

double gamma_diag_integral(double z, double s) {
    const double w = 1.0 + s;
    return z * (s * s * s / 3.0 + s * s - w * w * std::log(w) + 0.5 * w * w - 0.5);
}

double gaussian_correction(const GaussianCovariance& cov, double s, double t) {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("gaussian correction: needs 0 <= s <= t");
    switch (cov.kind()) {
        case GaussianCovariance::Kind::None: return 0.0;
        case GaussianCovariance::Kind::BrownianSheet:
            return 0.5 * s * t * t - s * s * s / 6.0;
        case GaussianCovariance::Kind::UserGrid:
            return gaussian_correction_quadrature(cov, s, t);
    }
    return 0.0;
}

double gaussian_correction_quadrature(const GaussianCovariance& cov, double s,
                                      double t, const quad::Options& opts) {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("gaussian correction: needs 0 <= s <= t");
    if (cov.is_none() || t == 0.0) return 0.0;
    double total = 0.0;
    if (s > 0.0)
        total += quad::integrate([&](double u) { return cov(u, u, t); }, 0.0, s, opts);
    if (s < t)
        total += quad::integrate([&](double u) { return cov(s, u, t); }, s, t, opts);
    return total;
}

double positivity_floor(const LevyMeasure& measure, const ScalingFunction& kappa,
                        double t) {
    return measure.first_moment() * kappa.square_integral(t);
}

double mu0_value(const InitialCurve& curve, const LevyMeasure& measure,
                 const ScalingFunction& kappa, double t) {
    if (curve.kind() != InitialCurve::Kind::PositivityFloor) return curve.value(t);
    return curve.floor_base() + positivity_floor(measure, kappa, t);
}

double mu0_integral(const InitialCurve& curve, const LevyMeasure& measure,
                    const ScalingFunction& kappa, double t) {
    if (curve.kind() != InitialCurve::Kind::PositivityFloor) return curve.integral(t);
    const double base = curve.floor_base() * t;
    if (kappa.is_constant()) {
        const double c = kappa.constant_value();
        return base + measure.first_moment() * c * t * t * t / 3.0;
    }
    return base + measure.first_moment() *
                      quad::integrate(
                          [&](double u) { return kappa.square_integral(u); }, 0.0, t,
                          quad::Options{1e-10, 1e-9, 15});
}

} // namespace drift

} // namespace levyfield
