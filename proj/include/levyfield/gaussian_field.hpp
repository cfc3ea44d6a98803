#ifndef LEVYFIELD_GAUSSIAN_FIELD_HPP
#define LEVYFIELD_GAUSSIAN_FIELD_HPP

#include <cstddef>
#include <vector>

#include "levyfield/rng.hpp"

namespace levyfield {

/// Covariance structure c(s, t1, t2) of the centered Gaussian field Y with
/// independent increments in s: Cov(Y_{s1,t1}, Y_{s2,t2}) = c(s1 ^ s2, t1, t2)
/// and c(0,.,.) = 0.
///   None          - no Gaussian component.
///   BrownianSheet - c(s, t1, t2) = s * min(t1, t2).
///   UserGrid      - c(s, t1, t2) = s * M(t1, t2) with M a symmetric positive
///                   semidefinite matrix declared on a maturity lattice and
///                   interpolated bilinearly; queries outside the lattice fail.
class GaussianCovariance {
  public:
    enum class Kind { None, BrownianSheet, UserGrid };

    static GaussianCovariance none();
    static GaussianCovariance brownian_sheet();
    /// matrix is row-major lattice.size() x lattice.size(); the PSD check is
    /// factorization-based and failing it is a construction error.
    static GaussianCovariance user_grid(std::vector<double> lattice,
                                        std::vector<double> matrix);

    Kind kind() const { return kind_; }
    bool is_none() const { return kind_ == Kind::None; }
    double operator()(double s, double t1, double t2) const;

    const std::vector<double>& lattice() const { return lattice_; }
    /// M(t1, t2) for UserGrid (the s-slope of the covariance).
    double maturity_cov(double t1, double t2) const;

  private:
    Kind kind_ = Kind::None;
    std::vector<double> lattice_;
    std::vector<double> matrix_;
};

struct GaussianGrid {
    std::vector<double> s_nodes; // strictly increasing, starting at 0
    std::vector<double> t_nodes; // strictly increasing, starting at 0

    static GaussianGrid uniform(double s_max, double t_max, std::size_t s_steps,
                                std::size_t t_steps);
};

/// Grid-sampled path of the Gaussian field. Values are exact in distribution
/// at the nodes; evaluation between nodes interpolates bilinearly and the time
/// integrals use the trapezoid rule, so both carry an O(grid step^2) bias
/// (documented; the jump engine has no such error).
class GaussianRealization {
  public:
    GaussianRealization(GaussianGrid grid, std::vector<double> values,
                        GaussianCovariance::Kind covariance_id);

    const GaussianGrid& grid() const { return grid_; }
    GaussianCovariance::Kind covariance_id() const { return covariance_id_; }
    double node(std::size_t i, std::size_t j) const;

    double eval(double s, double t) const;
    /// trapezoid approximation of integral_s^t Y_{s,u} du.
    double integral_forward(double s, double t) const;
    /// trapezoid approximation of integral_0^s Y_{u,u} du.
    double integral_spot(double s) const;

  private:
    GaussianGrid grid_;
    std::vector<double> values_; // row-major, s major
    GaussianCovariance::Kind covariance_id_;
};

class GaussianSheetSimulator {
  public:
    GaussianSheetSimulator(const GaussianCovariance& cov, GaussianGrid grid);

    GaussianRealization simulate(PathRng& rng) const;

  private:
    GaussianCovariance::Kind kind_;
    GaussianGrid grid_;
    std::vector<double> chol_; // UserGrid: factor of M at the grid t-nodes
};

} // namespace levyfield

#endif
