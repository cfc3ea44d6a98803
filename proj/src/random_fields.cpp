#include "levyfield/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "levyfield/csv.hpp"

namespace levyfield {

SheetRealization::SheetRealization(std::vector<SheetAtom> atoms, double s_max,
                                   double t_max, double trunc_eps, double comp_mean,
                                   ScalingFunction kappa)
    : atoms_(std::move(atoms)),
      s_max_(s_max),
      t_max_(t_max),
      trunc_eps_(trunc_eps),
      comp_mean_(comp_mean),
      kappa_(std::move(kappa)) {
    std::sort(atoms_.begin(), atoms_.end(), [](const SheetAtom& a, const SheetAtom& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.tau < b.tau;
    });
    for (const auto& a : atoms_) {
        if (!(a.x >= 0.0 && a.x <= s_max_ && a.y >= 0.0 && a.y <= t_max_))
            throw std::invalid_argument("sheet atom outside the domain rectangle");
        if (!(a.tau > trunc_eps_))
            throw std::invalid_argument("sheet atom at or below the truncation level");
    }
}

double SheetRealization::eval(double s, double t) const {
    if (!(s >= 0.0 && s <= s_max_ && t >= 0.0 && t <= t_max_))
        throw std::out_of_range("eval: (s,t) outside the simulated domain");
    double sum = 0.0;
    for (const auto& a : atoms_) {
        if (a.x > s) break; // atoms sorted by x
        if (a.y <= t) sum += a.tau * kappa_(a.x, a.y);
    }
    return sum - comp_mean_ * kappa_.rect_integral(s, t);
}

double SheetRealization::integral_forward(double s, double t) const {
    if (s > t) throw std::invalid_argument("integral_forward: needs s <= t");
    if (!(s >= 0.0 && s <= s_max_ && t <= t_max_))
        throw std::out_of_range("integral_forward: outside the simulated domain");
    double sum = 0.0;
    for (const auto& a : atoms_) {
        if (a.x > s) break;
        if (a.y <= t) sum += a.tau * kappa_(a.x, a.y) * (t - std::max(s, a.y));
    }
    return sum - comp_mean_ * kappa_.forward_weighted_integral(s, t);
}

double SheetRealization::integral_spot(double s) const {
    if (!(s >= 0.0 && s <= s_max_ && s <= t_max_))
        throw std::out_of_range("integral_spot: outside the simulated domain");
    double sum = 0.0;
    for (const auto& a : atoms_) {
        if (a.x > s) break;
        if (a.y <= s) sum += a.tau * kappa_(a.x, a.y) * (s - std::max(a.x, a.y));
    }
    return sum - comp_mean_ * kappa_.spot_weighted_integral(s);
}

double SheetRealization::strip_integral(double s2, double s1, double t) const {
    if (!(0.0 <= s2 && s2 <= s1 && s1 <= t))
        throw std::invalid_argument("strip_integral: needs 0 <= s2 <= s1 <= t");
    if (!(s1 <= s_max_ && t <= t_max_))
        throw std::out_of_range("strip_integral: outside the simulated domain");
    double sum = 0.0;
    for (const auto& a : atoms_) {
        if (a.x > s1) break;
        if (a.x > s2 && a.y <= t)
            sum += a.tau * kappa_(a.x, a.y) * (t - std::max(a.x, a.y));
    }
    return sum - comp_mean_ * kappa_.strip_weighted_integral(s2, s1, t);
}

SheetSimulator::SheetSimulator(const LevyMeasure& measure, ScalingFunction kappa,
                               double s_max, double t_max, double eps)
    : kappa_(std::move(kappa)), s_max_(s_max), t_max_(t_max), eps_(eps) {
    if (!(s_max > 0.0 && t_max > 0.0))
        throw std::invalid_argument("sheet simulator: domain must be positive");
    intensity_ = measure.truncated_intensity(eps);
    comp_mean_ = measure.truncated_mean(eps);
    const double expected_atoms = intensity_ * s_max * t_max;
    if (expected_atoms > 1e8)
        throw std::invalid_argument(
            "sheet simulator: more than 1e8 expected atoms; raise the truncation "
            "level eps");
    sampler_ = measure.make_sampler(eps);
}

SheetRealization SheetSimulator::simulate(PathRng& rng) const {
    const long long n = rng.poisson(intensity_ * s_max_ * t_max_);
    std::vector<SheetAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        SheetAtom a;
        a.x = rng.uniform() * s_max_;
        a.y = rng.uniform() * t_max_;
        a.tau = sampler_.sample(rng);
        atoms.push_back(a);
    }
    return SheetRealization(std::move(atoms), s_max_, t_max_, eps_, comp_mean_, kappa_);
}

void write_atoms_csv(std::ostream& os, std::uint64_t path_id,
                     const SheetRealization& r) {
    for (const auto& a : r.atoms()) {
        os << path_id << ',' << csv::full(a.x) << ',' << csv::full(a.y) << ','
           << csv::full(a.tau) << '\n';
    }
}

} // namespace levyfield
