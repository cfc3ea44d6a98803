#ifndef LEVYFIELD_TERM_STRUCTURE_HPP
#define LEVYFIELD_TERM_STRUCTURE_HPP

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

#include "levyfield/drift.hpp"
#include "levyfield/gaussian_field.hpp"
#include "levyfield/levy_measure.hpp"
#include "levyfield/random_fields.hpp"
#include "levyfield/scaling.hpp"

namespace levyfield {

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class DriftMode { ClosedForm, Quadrature, CrossCheck };

struct Horizon {
    double s_max = 0.0;
    double t_max = 0.0;
};

/// Full model description. ClosedForm (and CrossCheck) drift requires one of
/// the two built-in measures - a unit point mass or the gamma density - with
/// kappa identically 1.
struct ModelSpec {
    LevyMeasure measure = LevyMeasure::point_mass(1.0);
    ScalingFunction kappa = ScalingFunction::constant(1.0);
    InitialCurve initial_curve = InitialCurve::positivity_floor();
    GaussianCovariance gaussian = GaussianCovariance::none();
    Horizon horizon{};
    std::optional<double> trunc_eps; // empty = auto (variance-budget rule)
    DriftMode drift_mode = DriftMode::Quadrature;
    std::size_t gaussian_s_steps = 100; // simulation grid for the Y component
    std::size_t gaussian_t_steps = 100;
    /// Diagnostic control: forces mu_{s,t} = mu_{0,t}. Statistical validation
    /// must then fail; never enable for pricing.
    bool zero_drift = false;
};

/// Immutable pricing surface bound to one ModelSpec. Deterministic quantities
/// (drift, mu-integrals) are memoized; all methods are safe to call from
/// concurrent Monte Carlo workers.
class TermStructure {
  public:
    explicit TermStructure(ModelSpec spec);

    const ModelSpec& spec() const { return spec_; }
    double resolved_eps() const { return eps_; }

    double mu0(double t) const;
    double mu0_integral(double t) const;
    /// mu_{s,t} - mu_{0,t}, per the configured drift mode.
    double drift_increment(double s, double t) const;
    double gaussian_correction(double s, double t) const;
    double mu(double s, double t) const;

    /// integral_s^t mu(s,u) du (bond-price exponent, deterministic part).
    double mu_forward_integral(double s, double t) const;
    /// integral_0^s mu(u,u) du (money-market exponent, deterministic part).
    double mu_diag_integral(double s) const;
    /// P_{0,t} = exp(-integral_0^t mu_{0,u} du); path independent.
    double p0(double t) const;

    double forward_rate(const SheetRealization& path, double s, double t) const;
    double forward_rate(const SheetRealization& path, const GaussianRealization& g,
                        double s, double t) const;
    double spot_rate(const SheetRealization& path, double s) const;
    double spot_rate(const SheetRealization& path, const GaussianRealization& g,
                     double s) const;
    double bond_price(const SheetRealization& path, double s, double t) const;
    double bond_price(const SheetRealization& path, const GaussianRealization& g,
                      double s, double t) const;
    double discounted_price(const SheetRealization& path, double s, double t) const;
    double discounted_price(const SheetRealization& path, const GaussianRealization& g,
                            double s, double t) const;

    SheetSimulator make_sheet_simulator() const;
    GaussianSheetSimulator make_gaussian_simulator() const;

  private:
    void require_domain(double s, double t) const;
    double jump_forward_integral(double s, double t) const;  // deterministic part
    double jump_diag_integral(double s) const;
    double gaussian_forward_integral(double s, double t) const;
    double gaussian_diag_integral(double s) const;
    double cached(int kind, double a, double b, double (*fn)(const TermStructure&,
                                                             double, double)) const;

    ModelSpec spec_;
    double eps_ = 0.0;
    bool closed_available_ = false;
    bool measure_is_gamma_ = false;

    mutable std::shared_mutex cache_mutex_;
    mutable std::map<std::tuple<int, double, double>, double> cache_;
};

} // namespace levyfield

#endif
