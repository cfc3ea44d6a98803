#ifndef LEVYFIELD_LEVY_MEASURE_HPP
#define LEVYFIELD_LEVY_MEASURE_HPP

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "levyfield/rng.hpp"

namespace levyfield {

class MeasureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integration hints for user-supplied jump densities.
struct SupportHints {
    /// Right end of the numeric support. Infinite means "scan for a cutoff
    /// where the tau^2-weighted tail drops below 1e-16 of the running total".
    double upper_bound = std::numeric_limits<double>::infinity();
    /// p such that d(tau) ~ C tau^p as tau -> 0 (gamma-style density: p = -1).
    double singularity_power = 0.0;
};

class JumpSampler;

/// Jump-size intensity measure sigma on (0, inf) with finite second moment.
/// Immutable after construction; shareable across threads.
class LevyMeasure {
  public:
    enum class Kind { PointMass, GammaDensity, UserDensity };

    /// sigma = mass * delta_{location}.
    static LevyMeasure point_mass(double mass, double location = 1.0);
    /// sigma(dtau) = intensity * exp(-tau)/tau dtau.
    static LevyMeasure gamma(double intensity);
    /// sigma(dtau) = d(tau) dtau. The second moment is checked by quadrature
    /// at construction time and a failure there is a construction error.
    static LevyMeasure user_density(std::function<double(double)> density,
                                    SupportHints hints = {});

    Kind kind() const { return kind_; }
    double mass() const { return z_; }       // PointMass / GammaDensity intensity
    double location() const { return a_; }   // PointMass only

    /// integral tau^2 sigma(dtau); finite by construction.
    double second_moment() const;
    /// integral tau sigma(dtau). Throws MeasureError when divergent; use
    /// has_first_moment() to probe (positivity machinery is then unavailable).
    double first_moment() const;
    bool has_first_moment() const;

    /// Phi(lambda) = integral tau (1 - e^{-lambda tau}) sigma(dtau), lambda >= 0.
    double phi(double lambda) const;
    /// psi(lambda) = integral (e^{-lambda tau} - 1 + lambda tau) sigma(dtau).
    double psi(double lambda) const;
    /// integral (e^{i tau lambda} - 1 - i tau lambda) sigma(dtau).
    std::complex<double> char_exponent(double lambda) const;

    /// sigma((eps, inf)). Throws MeasureError for eps = 0 when sigma has
    /// infinite total mass.
    double truncated_intensity(double eps) const;
    /// integral_{(eps, inf)} tau sigma(dtau).
    double truncated_mean(double eps) const;
    /// integral_{(0, eps]} tau^2 sigma(dtau); the L2 size of dropped jumps.
    double small_jump_l2(double eps) const;

    /// Largest eps with small_jump_l2(eps) * domain_area * kappa_sup^2 <= 1e-6;
    /// zero for finite-activity measures (exact simulation).
    double auto_epsilon(double domain_area, double kappa_sup) const;

    /// Sampler for sigma restricted to (eps, inf), normalized. Building one is
    /// the expensive step (inverse-CDF tabulation); sampling is cheap.
    JumpSampler make_sampler(double eps) const;

  private:
    LevyMeasure() = default;

    double user_integral(const std::function<double(double)>& weight,
                         double lo, double small_tau_power,
                         bool* diverged = nullptr) const;

    Kind kind_ = Kind::PointMass;
    double z_ = 0.0;
    double a_ = 1.0;
    std::function<double(double)> density_;
    SupportHints hints_{};
    double cutoff_ = 0.0;          // resolved UserDensity upper integration end
    double second_moment_ = 0.0;
    std::optional<double> first_moment_;
};

/// Draws jump sizes tau > eps with distribution proportional to sigma.
class JumpSampler {
  public:
    JumpSampler() = default;
    double sample(PathRng& rng) const;

  private:
    friend class LevyMeasure;

    // Inverse CDF tabulated at knots uniform in probability; cubic Hermite
    // within cells, exact-envelope rejection for the last (tail) cell.
    enum class Mode { Constant, Table } mode_ = Mode::Constant;
    double constant_ = 0.0;
    std::vector<double> tau_;    // knot values
    std::vector<double> slope_;  // d tau / d u at knots (monotonicity-clamped)
    double du_ = 0.0;            // knot spacing in probability space
    double u_hi_ = 1.0;          // table covers [0, u_hi); tail sampled exactly
    std::function<double(double, PathRng&)> tail_; // (tau_hi, rng) -> tau
};

} // namespace levyfield

#endif
