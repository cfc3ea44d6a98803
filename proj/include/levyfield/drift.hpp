#ifndef LEVYFIELD_DRIFT_HPP
#define LEVYFIELD_DRIFT_HPP

#include <atomic>
#include <memory>
#include <utility>
#include <vector>

#include "levyfield/gaussian_field.hpp"
#include "levyfield/levy_measure.hpp"
#include "levyfield/quadrature.hpp"
#include "levyfield/scaling.hpp"

namespace levyfield {

/// The initial term structure mu_{0,t}. The PositivityFloor variant evaluates
/// to base + <tau>_sigma * integral of kappa over [0,t]^2, the smallest curve
/// under which all simulated rates stay nonnegative.
class InitialCurve {
  public:
    enum class Kind { Constant, Affine, Table, PositivityFloor };

    static InitialCurve constant(double value);
    static InitialCurve affine(double intercept, double slope);
    /// Knots (t, mu_{0,t}) with strictly increasing t; linear interpolation,
    /// flat extrapolation beyond the ends (logged once per curve).
    static InitialCurve table(std::vector<std::pair<double, double>> knots);
    static InitialCurve positivity_floor(double base = 0.0);

    Kind kind() const { return kind_; }
    double floor_base() const { return base_; }

    /// mu_{0,t} for the self-contained variants; throws for PositivityFloor
    /// (which needs the measure and kappa - see drift::mu0_value).
    double value(double t) const;
    /// integral_0^t mu_{0,u} du, closed form per variant.
    double integral(double t) const;

  private:
    InitialCurve() = default;
    void warn_extrapolation(double t) const;

    Kind kind_ = Kind::Constant;
    double a_ = 0.0, b_ = 0.0, base_ = 0.0;
    std::vector<double> knot_t_, knot_v_, knot_int_; // prefix integrals
    std::shared_ptr<std::atomic<bool>> warned_;
};

namespace drift {

/// mu_{s,t} - mu_{0,t} by 2-D adaptive quadrature of kappa * Phi(kappa *
/// (t - max(x,y))) over [0,s] x [0,t], split along the diagonal kink.
double increment_quadrature(const LevyMeasure& measure, const ScalingFunction& kappa,
                            double s, double t,
                            const quad::Options& inner = {1e-11, 1e-10, 15},
                            const quad::Options& outer = {1e-10, 1e-9, 15});

/// Closed forms of the same increment for the two built-in sheets, kappa == 1.
double poisson_closed(double z, double s, double t);
double gamma_closed(double z, double s, double t);

/// Antiderivatives in the maturity argument: d/dt A(z,s,t) = *_closed(z,s,t).
/// They make bond pricing quadrature-free in closed-form mode.
double poisson_closed_antiderivative_t(double z, double s, double t);
double gamma_closed_antiderivative_t(double z, double s, double t);

/// integral_0^s of the diagonal increment u -> *_closed(z, u, u) du.
double poisson_diag_integral(double z, double s);
double gamma_diag_integral(double z, double s);

/// integral_0^t c(min(s,u), u, t) du: closed form for the Brownian sheet,
/// adaptive quadrature split at u = s otherwise.
double gaussian_correction(const GaussianCovariance& cov, double s, double t);
double gaussian_correction_quadrature(const GaussianCovariance& cov, double s,
                                      double t, const quad::Options& opts = {});

/// The nonnegativity floor <tau>_sigma * integral of kappa over [0,t]^2.
double positivity_floor(const LevyMeasure& measure, const ScalingFunction& kappa,
                        double t);

/// mu_{0,t} and its running integral with the floor variant resolved against
/// (measure, kappa).
double mu0_value(const InitialCurve& curve, const LevyMeasure& measure,
                 const ScalingFunction& kappa, double t);
double mu0_integral(const InitialCurve& curve, const LevyMeasure& measure,
                    const ScalingFunction& kappa, double t);

} // namespace drift

} // namespace levyfield

#endif
