#include "levyfield/term_structure.hpp"

#include <cmath>
#include <cstdio>

namespace levyfield {

namespace {

enum CacheKind : int {
    kIncrement = 0,
    kForwardIntegral = 1,
    kDiagIntegral = 2,
    kMu0Integral = 3,
};

const quad::Options kMuQuad{1e-9, 1e-9, 15};

void check_crosscheck(const char* what, double closed, double numeric, double tol_abs,
                      double tol_rel) {
    const double diff = std::abs(closed - numeric);
    if (diff <= tol_abs || diff <= tol_rel * std::max(std::abs(closed), 1.0)) return;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "cross-check failed for %s: closed=%.17g quadrature=%.17g diff=%.3g",
                  what, closed, numeric, diff);
    throw ModelError(buf);
}

} // namespace

TermStructure::TermStructure(ModelSpec spec) : spec_(std::move(spec)) {
    if (!(spec_.horizon.s_max > 0.0 && spec_.horizon.t_max > 0.0))
        throw ModelError("model horizon must be positive");
    if (spec_.horizon.s_max > spec_.horizon.t_max)
        throw ModelError("model horizon needs s_max <= t_max");

    const auto kind = spec_.measure.kind();
    measure_is_gamma_ = kind == LevyMeasure::Kind::GammaDensity;
    closed_available_ =
        (measure_is_gamma_ ||
         (kind == LevyMeasure::Kind::PointMass && spec_.measure.location() == 1.0)) &&
        spec_.kappa.is_constant() && spec_.kappa.constant_value() == 1.0;
    if ((spec_.drift_mode == DriftMode::ClosedForm ||
         spec_.drift_mode == DriftMode::CrossCheck) &&
        !closed_available_)
        throw ModelError(
            "closed-form drift requires a unit point mass or gamma measure with "
            "constant kappa = 1");

    if (spec_.trunc_eps) {
        if (!(*spec_.trunc_eps >= 0.0))
            throw ModelError("truncation level must be >= 0");
        eps_ = *spec_.trunc_eps;
    } else {
        eps_ = spec_.measure.auto_epsilon(spec_.horizon.s_max * spec_.horizon.t_max,
                                          spec_.kappa.sup_bound());
    }

    if (spec_.gaussian.kind() == GaussianCovariance::Kind::UserGrid &&
        spec_.gaussian.lattice().back() < spec_.horizon.t_max)
        throw ModelError("gaussian covariance lattice does not cover the horizon");
}

void TermStructure::require_domain(double s, double t) const {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("term structure: needs 0 <= s <= t");
    if (s > spec_.horizon.s_max || t > spec_.horizon.t_max)
        throw std::out_of_range("term structure: (s,t) outside the model horizon");
}

double TermStructure::cached(int kind, double a, double b,
                             double (*fn)(const TermStructure&, double, double)) const {
    const std::tuple<int, double, double> key{kind, a, b};
    {
        std::shared_lock lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const double v = fn(*this, a, b);
    std::unique_lock lock(cache_mutex_);
    cache_.emplace(key, v);
    return v;
}

double TermStructure::mu0(double t) const {
    return drift::mu0_value(spec_.initial_curve, spec_.measure, spec_.kappa, t);
}

double TermStructure::mu0_integral(double t) const {
    return cached(kMu0Integral, t, 0.0, [](const TermStructure& ts, double t_, double) {
        return drift::mu0_integral(ts.spec_.initial_curve, ts.spec_.measure,
                                   ts.spec_.kappa, t_);
    });
}

double TermStructure::drift_increment(double s, double t) const {
    if (!(0.0 <= s && s <= t))
        throw std::invalid_argument("drift_increment: needs 0 <= s <= t");
    if (spec_.zero_drift || s == 0.0) return 0.0;
    return cached(kIncrement, s, t, [](const TermStructure& ts, double s_, double t_) {
        const double z = ts.spec_.measure.mass();
        switch (ts.spec_.drift_mode) {
            case DriftMode::ClosedForm:
                return ts.measure_is_gamma_ ? drift::gamma_closed(z, s_, t_)
                                            : drift::poisson_closed(z, s_, t_);
            case DriftMode::Quadrature:
                return drift::increment_quadrature(ts.spec_.measure, ts.spec_.kappa,
                                                   s_, t_);
            case DriftMode::CrossCheck: {
                const double closed = ts.measure_is_gamma_
                                          ? drift::gamma_closed(z, s_, t_)
                                          : drift::poisson_closed(z, s_, t_);
                const double numeric = drift::increment_quadrature(
                    ts.spec_.measure, ts.spec_.kappa, s_, t_);
                check_crosscheck("drift increment", closed, numeric, 1e-7, 0.0);
                return closed;
            }
        }
        return 0.0;
    });
}

double TermStructure::gaussian_correction(double s, double t) const {
    if (spec_.zero_drift) return 0.0;
    return drift::gaussian_correction(spec_.gaussian, s, t);
}

double TermStructure::mu(double s, double t) const {
    require_domain(s, t);
    return mu0(t) + drift_increment(s, t) + gaussian_correction(s, t);
}

double TermStructure::jump_forward_integral(double s, double t) const {
    if (spec_.zero_drift || s == 0.0) return 0.0;
    const double z = spec_.measure.mass();
    auto closed = [&] {
        return measure_is_gamma_
                   ? drift::gamma_closed_antiderivative_t(z, s, t) -
                         drift::gamma_closed_antiderivative_t(z, s, s)
                   : drift::poisson_closed_antiderivative_t(z, s, t) -
                         drift::poisson_closed_antiderivative_t(z, s, s);
    };
    auto numeric = [&] {
        return quad::integrate(
            [&](double u) {
                return drift::increment_quadrature(spec_.measure, spec_.kappa, s, u);
            },
            s, t, kMuQuad);
    };
    switch (spec_.drift_mode) {
        case DriftMode::ClosedForm: return closed();
        case DriftMode::Quadrature: return numeric();
        case DriftMode::CrossCheck: {
            const double c = closed(), n = numeric();
            check_crosscheck("forward drift integral", c, n, 1e-7, 1e-6);
            return c;
        }
    }
    return 0.0;
}

double TermStructure::jump_diag_integral(double s) const {
    if (spec_.zero_drift || s == 0.0) return 0.0;
    const double z = spec_.measure.mass();
    auto closed = [&] {
        return measure_is_gamma_ ? drift::gamma_diag_integral(z, s)
                                 : drift::poisson_diag_integral(z, s);
    };
    auto numeric = [&] {
        return quad::integrate(
            [&](double u) {
                return drift::increment_quadrature(spec_.measure, spec_.kappa, u, u);
            },
            0.0, s, kMuQuad);
    };
    switch (spec_.drift_mode) {
        case DriftMode::ClosedForm: return closed();
        case DriftMode::Quadrature: return numeric();
        case DriftMode::CrossCheck: {
            const double c = closed(), n = numeric();
            check_crosscheck("diagonal drift integral", c, n, 1e-7, 1e-6);
            return c;
        }
    }
    return 0.0;
}

double TermStructure::gaussian_forward_integral(double s, double t) const {
    if (spec_.zero_drift) return 0.0;
    switch (spec_.gaussian.kind()) {
        case GaussianCovariance::Kind::None: return 0.0;
        case GaussianCovariance::Kind::BrownianSheet: {
            // integral_s^t (s u^2/2 - s^3/6) du
            return s * (t * t * t - s * s * s) / 6.0 -
                   s * s * s * (t - s) / 6.0;
        }
        case GaussianCovariance::Kind::UserGrid:
            return quad::integrate(
                [&](double u) { return drift::gaussian_correction(spec_.gaussian, s, u); },
                s, t, kMuQuad);
    }
    return 0.0;
}

double TermStructure::gaussian_diag_integral(double s) const {
    if (spec_.zero_drift) return 0.0;
    switch (spec_.gaussian.kind()) {
        case GaussianCovariance::Kind::None: return 0.0;
        case GaussianCovariance::Kind::BrownianSheet:
            return s * s * s * s / 12.0; // integral of u^3/3
        case GaussianCovariance::Kind::UserGrid:
            return quad::integrate(
                [&](double u) { return drift::gaussian_correction(spec_.gaussian, u, u); },
                0.0, s, kMuQuad);
    }
    return 0.0;
}

double TermStructure::mu_forward_integral(double s, double t) const {
    require_domain(s, t);
    return cached(kForwardIntegral, s, t, [](const TermStructure& ts, double s_, double t_) {
        return ts.mu0_integral(t_) - ts.mu0_integral(s_) +
               ts.jump_forward_integral(s_, t_) + ts.gaussian_forward_integral(s_, t_);
    });
}

double TermStructure::mu_diag_integral(double s) const {
    if (s > spec_.horizon.s_max || s > spec_.horizon.t_max)
        throw std::out_of_range("mu_diag_integral: s outside the model horizon");
    return cached(kDiagIntegral, s, 0.0, [](const TermStructure& ts, double s_, double) {
        return ts.mu0_integral(s_) + ts.jump_diag_integral(s_) +
               ts.gaussian_diag_integral(s_);
    });
}

double TermStructure::p0(double t) const { return std::exp(-mu0_integral(t)); }

double TermStructure::forward_rate(const SheetRealization& path, double s,
                                   double t) const {
    return mu(s, t) + path.eval(s, t);
}

double TermStructure::forward_rate(const SheetRealization& path,
                                   const GaussianRealization& g, double s,
                                   double t) const {
    return mu(s, t) + path.eval(s, t) + g.eval(s, t);
}

double TermStructure::spot_rate(const SheetRealization& path, double s) const {
    return forward_rate(path, s, s);
}

double TermStructure::spot_rate(const SheetRealization& path,
                                const GaussianRealization& g, double s) const {
    return forward_rate(path, g, s, s);
}

double TermStructure::bond_price(const SheetRealization& path, double s,
                                 double t) const {
    require_domain(s, t);
    return std::exp(-(mu_forward_integral(s, t) + path.integral_forward(s, t)));
}

double TermStructure::bond_price(const SheetRealization& path,
                                 const GaussianRealization& g, double s,
                                 double t) const {
    require_domain(s, t);
    return std::exp(-(mu_forward_integral(s, t) + path.integral_forward(s, t) +
                      g.integral_forward(s, t)));
}

double TermStructure::discounted_price(const SheetRealization& path, double s,
                                       double t) const {
    return bond_price(path, s, t) *
           std::exp(-(mu_diag_integral(s) + path.integral_spot(s)));
}

double TermStructure::discounted_price(const SheetRealization& path,
                                       const GaussianRealization& g, double s,
                                       double t) const {
    return bond_price(path, g, s, t) *
           std::exp(-(mu_diag_integral(s) + path.integral_spot(s) + g.integral_spot(s)));
}

SheetSimulator TermStructure::make_sheet_simulator() const {
    SheetSimulator sim(spec_.measure, spec_.kappa, spec_.horizon.s_max,
                       spec_.horizon.t_max, eps_);
    // Truncation keeps the simulated compensator below the full mean, which is
    // what preserves pathwise positivity under the floor curve.
    if (spec_.measure.has_first_moment() &&
        sim.comp_mean() > spec_.measure.first_moment() * (1.0 + 1e-12))
        throw ModelError("truncated compensator mean exceeds the full first moment");
    return sim;
}

GaussianSheetSimulator TermStructure::make_gaussian_simulator() const {
    if (spec_.gaussian.is_none())
        throw ModelError("model has no gaussian component");
    return GaussianSheetSimulator(
        spec_.gaussian,
        GaussianGrid::uniform(spec_.horizon.s_max, spec_.horizon.t_max,
                              spec_.gaussian_s_steps, spec_.gaussian_t_steps));
}

} // namespace levyfield
