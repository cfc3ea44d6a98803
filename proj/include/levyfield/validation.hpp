#ifndef LEVYFIELD_VALIDATION_HPP
#define LEVYFIELD_VALIDATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levyfield/term_structure.hpp"

namespace levyfield {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultMasterSeed = 424242;

/// One statistical certificate. For "main" rows pass means |z| <= z_crit (or
/// exact equality when the sampling variance is zero). For "control" rows the
/// underlying perturbed test is REQUIRED to fail, and pass records that it did.
struct ValidationReport {
    std::string test_name;
    std::string kind = "main"; // main | control
    std::int64_t n_paths = 0;
    double estimate = 0.0;
    double reference = 0.0;
    double standard_error = 0.0;
    double z_score = 0.0;
    double trimmed_estimate = 0.0; // 0.01% trimmed from each tail, diagnostic only
    bool pass = false;
    double z_crit = 4.0;
    double wall_time_s = 0.0; // excluded from CSV output (not reproducible)
};

struct McOptions {
    std::int64_t n_paths = 200000;
    std::uint64_t seed = kDefaultMasterSeed;
    int workers = 0; // 0 = hardware concurrency
    double z_crit = 4.0;
};

/// Tests E[Z_{s,t}] = P_{0,t} for each s in s_list (one report per s).
std::vector<ValidationReport> mc_martingale_test(const TermStructure& ts, double t,
                                                 std::span<const double> s_list,
                                                 const McOptions& opts);

/// Tests the two-sided increment identity: the mean of
/// exp(-int_{s1}^t (F_{s1,u}-F_{s2,u}) du - int_{s2}^{s1} (F_{u,u}-F_{s2,u}) du)
/// against 1, with the jump part of the exponent evaluated exactly.
ValidationReport mc_identity6_test(const TermStructure& ts, double s2, double s1,
                                   double t, const McOptions& opts);

/// Empirical characteristic function of X_{s,t} against the exact one; two
/// reports (real and imaginary component) per lambda.
std::vector<ValidationReport> cf_test(const TermStructure& ts, double s, double t,
                                      std::span<const double> lambdas,
                                      const McOptions& opts);

/// Exact (non-statistical) count of negative forward or spot rates over all
/// paths x grid nodes. The initial curve is checked against the nonnegativity
/// floor first; a violation there is a ConfigError naming the offending t.
ValidationReport positivity_scan(const TermStructure& ts, std::size_t grid_s,
                                 std::size_t grid_t, const McOptions& opts);

/// Sample variance of X_{s,t} against the truncated second-moment reference.
std::vector<ValidationReport> variance_check(
    const TermStructure& ts, std::span<const std::pair<double, double>> points,
    const McOptions& opts);

/// |LHS - RHS| of the deterministic drift identity on the strip
/// [s2,s1] x [0,t]: psi-quadrature on the left, mu-integrals on the right.
double ige_identity_gap(const TermStructure& ts, double s2, double s1, double t);

/// Zero-drift twin of a model, used as the negative control.
TermStructure zero_drift_control(const TermStructure& ts);

/// Deterministic fixed-shape helpers shared with the report layer.
struct SampleStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double se_mean = 0.0;
    double variance = 0.0;   // n-1 denominator
    double fourth_central = 0.0;
};
SampleStats summarize(std::span<const double> v);
double trimmed_mean(std::span<const double> v, double trim_fraction_each_side);

ValidationReport make_report(std::string name, std::span<const double> samples,
                             double reference, const McOptions& opts);

} // namespace levyfield

#endif
