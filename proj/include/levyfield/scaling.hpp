#ifndef LEVYFIELD_SCALING_HPP
#define LEVYFIELD_SCALING_HPP

#include <functional>
#include <memory>

namespace levyfield {

/// The volatility-scaling surface kappa(x, y) >= 0: either a constant (closed
/// form compensators) or an arbitrary continuous function with a certified
/// upper bound. Copies share one immutable implementation, so realizations can
/// keep a cheap handle and the integral cache is shared process-wide.
class ScalingFunction {
  public:
    static ScalingFunction constant(double value);
    static ScalingFunction callable(std::function<double(double, double)> f,
                                    double upper_bound);

    bool is_constant() const;
    double constant_value() const; // throws unless is_constant()
    double sup_bound() const;
    double operator()(double x, double y) const;

    /// integral of kappa over [0,s] x [0,t].
    double rect_integral(double s, double t) const;
    /// integral of kappa^2 over [0,s] x [0,t] (variance references).
    double rect_integral_sq(double s, double t) const;
    /// integral of kappa(x,y) (t - max(s,y)) over [0,s] x [0,t], s <= t.
    double forward_weighted_integral(double s, double t) const;
    /// integral of kappa(x,y) (s - max(x,y)) over [0,s]^2.
    double spot_weighted_integral(double s) const;
    /// integral of kappa(x,y) (t - max(x,y)) over [s2,s1] x [0,t], s2<=s1<=t.
    double strip_weighted_integral(double s2, double s1, double t) const;
    /// integral of kappa over [0, t]^2 (the positivity-floor factor).
    double square_integral(double t) const { return rect_integral(t, t); }

  private:
    struct Impl;
    ScalingFunction() = default;
    std::shared_ptr<const Impl> impl_;
};

} // namespace levyfield

#endif
