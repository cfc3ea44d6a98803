#ifndef LEVYFIELD_RANDOM_FIELDS_HPP
#define LEVYFIELD_RANDOM_FIELDS_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "levyfield/levy_measure.hpp"
#include "levyfield/rng.hpp"
#include "levyfield/scaling.hpp"

namespace levyfield {

struct SheetAtom {
    double x;   // calendar-time coordinate
    double y;   // maturity coordinate
    double tau; // jump size (kappa NOT applied)
};

/// One sample path of the compensated jump field: a finite atom list plus the
/// truncated compensator mean. Immutable after simulation; all time integrals
/// are exact per path (no time stepping).
class SheetRealization {
  public:
    SheetRealization(std::vector<SheetAtom> atoms, double s_max, double t_max,
                     double trunc_eps, double comp_mean, ScalingFunction kappa);

    const std::vector<SheetAtom>& atoms() const { return atoms_; }
    double s_max() const { return s_max_; }
    double t_max() const { return t_max_; }
    double trunc_eps() const { return trunc_eps_; }
    double comp_mean() const { return comp_mean_; }
    const ScalingFunction& kappa() const { return kappa_; }

    /// X_{s,t}: atom sum over [0,s] x [0,t] minus the compensator.
    double eval(double s, double t) const;
    /// integral_s^t X_{s,u} du, exact: weights (t - max(s, y_n)).
    double integral_forward(double s, double t) const;
    /// integral_0^s X_{u,u}-part of the money-market exponent: weights
    /// (s - max(x_n, y_n)) over [0,s]^2.
    double integral_spot(double s) const;
    /// <w, 1_{[s2,s1]}(x) 1_{[0,t]}(y) kappa (t - max(x,y))>: the exact jump
    /// part of the two-sided martingale-identity exponent.
    double strip_integral(double s2, double s1, double t) const;

  private:
    std::vector<SheetAtom> atoms_;
    double s_max_, t_max_, trunc_eps_, comp_mean_;
    ScalingFunction kappa_;
};

/// Builds realizations of the truncated compensated sheet. Construction does
/// the expensive work (sampler tables, intensity); simulate() is cheap and
/// takes the caller's rng stream so any path layout is reproducible.
class SheetSimulator {
  public:
    SheetSimulator(const LevyMeasure& measure, ScalingFunction kappa, double s_max,
                   double t_max, double eps);

    SheetRealization simulate(PathRng& rng) const;

    double intensity() const { return intensity_; }
    double comp_mean() const { return comp_mean_; }
    double eps() const { return eps_; }

  private:
    ScalingFunction kappa_;
    double s_max_, t_max_, eps_;
    double intensity_;  // sigma((eps, inf))
    double comp_mean_;  // truncated mean m_eps
    JumpSampler sampler_;
};

/// Writes one CSV record per atom: path_id,x,y,tau (LF line endings).
void write_atoms_csv(std::ostream& os, std::uint64_t path_id,
                     const SheetRealization& r);

} // namespace levyfield

#endif
