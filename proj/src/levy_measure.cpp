#include "levyfield/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/expint.hpp>

#include "levyfield/quadrature.hpp"

namespace levyfield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Module tolerance for all sigma-integrals (declared contract is 1e-10 abs /
// 1e-9 rel; we run slightly tighter so downstream sums stay inside it).
const quad::Options kSigmaQuad{5e-12, 1e-10, 15};

double expint_e1(double x) { return boost::math::expint(1, x); }

// integral_0^eps tau e^{-tau} dtau, stable for small eps.
double gamma_l2_unit(double eps) {
    if (eps <= 0.0) return 0.0;
    if (eps < 1e-2) {
        // series of 1 - e^{-eps}(1+eps)
        const double e2 = eps * eps;
        return e2 * (0.5 - eps / 3.0 + e2 / 8.0 - e2 * eps / 30.0 + e2 * e2 / 144.0);
    }
    return 1.0 - std::exp(-eps) * (1.0 + eps);
}

} // namespace

LevyMeasure LevyMeasure::point_mass(double mass, double location) {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw MeasureError("point mass: intensity must be positive");
    if (!(location > 0.0) || !std::isfinite(location))
        throw MeasureError("point mass: jump location must be positive");
    LevyMeasure m;
    m.kind_ = Kind::PointMass;
    m.z_ = mass;
    m.a_ = location;
    m.second_moment_ = mass * location * location;
    m.first_moment_ = mass * location;
    return m;
}

LevyMeasure LevyMeasure::gamma(double intensity) {
    if (!(intensity > 0.0) || !std::isfinite(intensity))
        throw MeasureError("gamma measure: intensity must be positive");
    LevyMeasure m;
    m.kind_ = Kind::GammaDensity;
    m.z_ = intensity;
    m.second_moment_ = intensity;
    m.first_moment_ = intensity;
    return m;
}

LevyMeasure LevyMeasure::user_density(std::function<double(double)> density,
                                      SupportHints hints) {
    if (!density) throw MeasureError("user density: null density function");
    LevyMeasure m;
    m.kind_ = Kind::UserDensity;
    m.density_ = std::move(density);
    m.hints_ = hints;

    // Resolve the upper integration end.
    if (std::isfinite(hints.upper_bound)) {
        if (!(hints.upper_bound > 0.0))
            throw MeasureError("user density: upper bound must be positive");
        m.cutoff_ = hints.upper_bound;
    } else {
        double hi = 1.0;
        m.cutoff_ = hi;
        double running = m.user_integral([](double t) { return t * t; }, 0.0, 2.0);
        while (hi < 1e6) {
            const double tail_probe = m.density_(hi) * hi * hi;
            if (tail_probe < 1e-16 * std::max(running, 1e-300)) break;
            const double next = 2.0 * hi;
            m.cutoff_ = next;
            running += quad::integrate(
                [&](double t) { return t * t * m.density_(t); }, hi, next, kSigmaQuad);
            hi = next;
        }
        if (hi >= 1e6)
            throw MeasureError(
                "user density: tail does not decay; declare an upper bound hint");
    }

    // Light sanity probe: the density must be nonnegative on its support.
    {
        const double lo = std::max(1e-12, m.cutoff_ * 1e-12);
        const double ratio = std::pow(m.cutoff_ / lo, 1.0 / 63.0);
        double t = lo;
        for (int i = 0; i < 64; ++i, t *= ratio)
            if (m.density_(std::min(t, m.cutoff_)) < 0.0)
                throw MeasureError("user density: negative density value");
    }

    // Eq.-style admissibility: finite second moment, checked by quadrature.
    bool diverged = false;
    m.second_moment_ =
        m.user_integral([](double t) { return t * t; }, 0.0, 2.0, &diverged);
    if (diverged || !std::isfinite(m.second_moment_))
        throw MeasureError("user density: second moment integral did not converge");

    // First moment may legitimately diverge; record availability only.
    diverged = false;
    try {
        const double fm = m.user_integral([](double t) { return t; }, 0.0, 1.0, &diverged);
        if (!diverged && std::isfinite(fm)) m.first_moment_ = fm;
    } catch (const quad::QuadratureError&) {
        // leave unset: positivity machinery unavailable for this measure
    }
    return m;
}

double LevyMeasure::user_integral(const std::function<double(double)>& weight,
                                  double lo, double small_tau_power,
                                  bool* diverged) const {
    if (diverged) *diverged = false;
    if (lo >= cutoff_) return 0.0;
    double lo0 = lo;
    if (lo0 <= 0.0) {
        const double r = small_tau_power + hints_.singularity_power + 1.0;
        if (r <= 1e-12) {
            if (diverged) {
                *diverged = true;
                return kInf;
            }
            throw MeasureError("user density: integral diverges at tau -> 0");
        }
        lo0 = std::min(std::exp(-37.0 / r), 0.5 * std::min(1.0, cutoff_));
    }
    const double split = std::min(1.0, cutoff_);
    double total = 0.0;
    if (lo0 < split) {
        // log substitution tau = e^u tames the tau -> 0 behaviour
        total += quad::integrate(
            [&](double u) {
                const double t = std::exp(u);
                return weight(t) * density_(t) * t;
            },
            std::log(lo0), std::log(split), kSigmaQuad);
    }
    const double mid = std::max(lo0, split);
    if (mid < cutoff_)
        total += quad::integrate([&](double t) { return weight(t) * density_(t); },
                                 mid, cutoff_, kSigmaQuad);
    return total;
}

double LevyMeasure::second_moment() const { return second_moment_; }

bool LevyMeasure::has_first_moment() const { return first_moment_.has_value(); }

double LevyMeasure::first_moment() const {
    if (!first_moment_)
        throw MeasureError("first moment diverges: positivity machinery unavailable");
    return *first_moment_;
}

double LevyMeasure::phi(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("phi: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    switch (kind_) {
        case Kind::PointMass:
            return z_ * a_ * (-std::expm1(-lambda * a_));
        case Kind::GammaDensity:
            return z_ * lambda / (1.0 + lambda);
        case Kind::UserDensity:
            return user_integral(
                [lambda](double t) { return t * (-std::expm1(-lambda * t)); }, 0.0, 2.0);
    }
    return 0.0;
}

double LevyMeasure::psi(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("psi: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    switch (kind_) {
        case Kind::PointMass: {
            const double x = lambda * a_;
            return z_ * (std::expm1(-x) + x);
        }
        case Kind::GammaDensity:
            return z_ * (lambda - std::log1p(lambda));
        case Kind::UserDensity:
            return user_integral(
                [lambda](double t) { return std::expm1(-lambda * t) + lambda * t; },
                0.0, 2.0);
    }
    return 0.0;
}

std::complex<double> LevyMeasure::char_exponent(double lambda) const {
    if (lambda == 0.0) return {0.0, 0.0};
    switch (kind_) {
        case Kind::PointMass: {
            const double x = lambda * a_;
            const double s = std::sin(0.5 * x);
            return {z_ * (-2.0 * s * s), z_ * (std::sin(x) - x)};
        }
        case Kind::GammaDensity: {
            // -z (log(1 - i*lambda) + i*lambda)
            const double re = -0.5 * z_ * std::log1p(lambda * lambda);
            const double im = z_ * (std::atan(lambda) - lambda);
            return {re, im};
        }
        case Kind::UserDensity: {
            const double re = user_integral(
                [lambda](double t) {
                    const double s = std::sin(0.5 * lambda * t);
                    return -2.0 * s * s;
                },
                0.0, 2.0);
            const double im = user_integral(
                [lambda](double t) { return std::sin(lambda * t) - lambda * t; }, 0.0,
                2.0);
            return {re, im};
        }
    }
    return {0.0, 0.0};
}

double LevyMeasure::truncated_intensity(double eps) const {
    if (eps < 0.0) throw std::invalid_argument("truncated_intensity: eps must be >= 0");
    switch (kind_) {
        case Kind::PointMass:
            return eps < a_ ? z_ : 0.0;
        case Kind::GammaDensity:
            if (eps == 0.0)
                throw MeasureError(
                    "gamma measure has infinite activity: intensity diverges at eps = 0");
            return z_ * expint_e1(eps);
        case Kind::UserDensity:
            return user_integral([](double) { return 1.0; }, eps, 0.0);
    }
    return 0.0;
}

double LevyMeasure::truncated_mean(double eps) const {
    if (eps < 0.0) throw std::invalid_argument("truncated_mean: eps must be >= 0");
    switch (kind_) {
        case Kind::PointMass:
            return eps < a_ ? z_ * a_ : 0.0;
        case Kind::GammaDensity:
            return z_ * std::exp(-eps);
        case Kind::UserDensity: {
            bool diverged = false;
            const double v = user_integral([](double t) { return t; }, eps, 1.0, &diverged);
            if (diverged)
                throw MeasureError("truncated mean diverges for this density");
            return v;
        }
    }
    return 0.0;
}

double LevyMeasure::small_jump_l2(double eps) const {
    if (eps < 0.0) throw std::invalid_argument("small_jump_l2: eps must be >= 0");
    if (eps == 0.0) return 0.0;
    switch (kind_) {
        case Kind::PointMass:
            return eps < a_ ? 0.0 : z_ * a_ * a_;
        case Kind::GammaDensity:
            return z_ * gamma_l2_unit(eps);
        case Kind::UserDensity: {
            if (eps >= cutoff_) return second_moment_;
            // integral over (0, eps]: full second moment minus the tail part
            const double tail = user_integral([](double t) { return t * t; }, eps, 2.0);
            return std::max(0.0, second_moment_ - tail);
        }
    }
    return 0.0;
}

double LevyMeasure::auto_epsilon(double domain_area, double kappa_sup) const {
    if (!(domain_area > 0.0))
        throw std::invalid_argument("auto_epsilon: domain area must be positive");
    const bool finite_activity = [&] {
        switch (kind_) {
            case Kind::PointMass: return true;
            case Kind::GammaDensity: return false;
            case Kind::UserDensity:
                return hints_.singularity_power > -1.0 + 1e-12;
        }
        return true;
    }();
    if (finite_activity) return 0.0;

    const double scale = domain_area * std::max(kappa_sup, 0.0) * std::max(kappa_sup, 0.0);
    const double budget = 1e-6;
    if (scale == 0.0) return 1.0;
    const double target = budget / scale;
    double lo = 0.0, hi = 1.0; // never truncate above 1
    if (small_jump_l2(hi) <= target) return hi;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (small_jump_l2(mid) <= target)
            lo = mid;
        else
            hi = mid;
    }
    if (lo == 0.0)
        throw MeasureError("auto_epsilon: no admissible truncation level found");
    return lo;
}

// ---------------------------------------------------------------------------
// Jump sampling
// ---------------------------------------------------------------------------

namespace {

constexpr int kTableKnots = 4096;

// Fritsch-Carlson style clamp: keeps cubic Hermite interpolation monotone.
void clamp_monotone(std::vector<double>& tau, std::vector<double>& slope, double du) {
    const std::size_t n = tau.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k > 0 ? (tau[k] - tau[k - 1]) / du : kInf;
        const double right = k + 1 < n ? (tau[k + 1] - tau[k]) / du : kInf;
        const double cap = 3.0 * std::min(left, right);
        slope[k] = std::clamp(slope[k], 0.0, std::max(cap, 0.0));
    }
}

double hermite(double x0, double m0, double x1, double m1, double h, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * x0 + (t3 - 2 * t2 + t) * h * m0 +
           (-2 * t3 + 3 * t2) * x1 + (t3 - t2) * h * m1;
}

// Solve E1(tau) = target for tau, with an increasing initial guess.
double invert_e1(double target, double guess) {
    double lo = guess, hi = guess;
    while (expint_e1(hi) > target) hi = hi * 2.0 + 1.0;
    while (expint_e1(lo) < target) lo *= 0.5;
    double t = std::clamp(guess, lo, hi);
    for (int i = 0; i < 100; ++i) {
        const double f = expint_e1(t) - target;
        if (f > 0.0)
            lo = t;
        else
            hi = t;
        const double step = f * t * std::exp(t); // f / E1'(t), E1' = -e^-t / t
        double next = t + step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * t) return next;
        t = next;
    }
    return t;
}

} // namespace

JumpSampler LevyMeasure::make_sampler(double eps) const {
    const double intensity = truncated_intensity(eps);
    if (!(intensity > 0.0) || !std::isfinite(intensity))
        throw MeasureError("make_sampler: sigma((eps,inf)) must be finite and positive");

    JumpSampler s;
    switch (kind_) {
        case Kind::PointMass:
            s.mode_ = JumpSampler::Mode::Constant;
            s.constant_ = a_;
            return s;

        case Kind::GammaDensity: {
            s.mode_ = JumpSampler::Mode::Table;
            const double e1_eps = expint_e1(std::max(eps, 1e-300));
            s.u_hi_ = 1.0 - 1.0 / kTableKnots;
            s.du_ = s.u_hi_ / (kTableKnots - 1);
            s.tau_.resize(kTableKnots);
            s.slope_.resize(kTableKnots);
            double guess = std::max(eps, 1e-300);
            for (int k = 0; k < kTableKnots; ++k) {
                const double u = k * s.du_;
                const double target = (1.0 - u) * e1_eps;
                const double t = k == 0 ? std::max(eps, 1e-300) : invert_e1(target, guess);
                guess = t;
                s.tau_[k] = t;
                s.slope_[k] = e1_eps * t * std::exp(t); // d tau / d u
            }
            clamp_monotone(s.tau_, s.slope_, s.du_);
            // conditional tail beyond the last knot: density ~ e^-tau / tau,
            // exact via an exponential envelope (accept with prob tau_hi/tau)
            s.tail_ = [](double tau_hi, PathRng& rng) {
                for (int i = 0; i < 10000; ++i) {
                    const double t = tau_hi + rng.exponential();
                    if (rng.uniform() * t <= tau_hi) return t;
                }
                throw MeasureError("jump sampler: tail rejection loop exceeded cap");
            };
            return s;
        }

        case Kind::UserDensity: {
            s.mode_ = JumpSampler::Mode::Table;
            // forward CDF on a geometric grid, then invert onto uniform-in-u knots
            double lo = eps;
            if (lo <= 0.0) {
                const double r = hints_.singularity_power + 1.0;
                lo = std::min(std::exp(-37.0 / std::max(r, 1e-12)), 0.5 * cutoff_);
            }
            const int fine = 4 * kTableKnots;
            std::vector<double> ft(fine + 1), fc(fine + 1);
            const double ratio = std::pow(cutoff_ / lo, 1.0 / fine);
            ft[0] = lo;
            fc[0] = 0.0;
            for (int j = 1; j <= fine; ++j) {
                ft[j] = j == fine ? cutoff_ : ft[j - 1] * ratio;
                fc[j] = fc[j - 1] +
                        quad::integrate([&](double t) { return density_(t); }, ft[j - 1],
                                        ft[j], quad::Options{1e-13, 1e-9, 12});
            }
            const double total = fc[fine];
            if (!(total > 0.0))
                throw MeasureError("make_sampler: density has no mass beyond eps");
            s.u_hi_ = 1.0;
            s.du_ = 1.0 / (kTableKnots - 1);
            s.tau_.resize(kTableKnots);
            s.slope_.resize(kTableKnots);
            std::size_t j = 0;
            for (int k = 0; k < kTableKnots; ++k) {
                const double target = (k * s.du_) * total;
                while (j + 1 < fc.size() && fc[j + 1] < target) ++j;
                double t;
                if (k == 0)
                    t = lo;
                else if (k == kTableKnots - 1)
                    t = cutoff_;
                else {
                    const double seg = fc[j + 1] - fc[j];
                    const double w = seg > 0.0 ? (target - fc[j]) / seg : 0.0;
                    t = ft[j] + w * (ft[j + 1] - ft[j]);
                }
                s.tau_[k] = t;
                const double d = density_(t);
                s.slope_[k] = d > 1e-300 ? total / d : 0.0;
            }
            clamp_monotone(s.tau_, s.slope_, s.du_);
            return s;
        }
    }
    throw MeasureError("make_sampler: unknown measure kind");
}

double JumpSampler::sample(PathRng& rng) const {
    if (mode_ == Mode::Constant) return constant_;
    const double u = rng.uniform();
    if (u >= u_hi_) return tail_(tau_.back(), rng);
    const double cell = u / du_;
    std::size_t j = std::min(static_cast<std::size_t>(cell), tau_.size() - 2);
    const double t = cell - static_cast<double>(j);
    return hermite(tau_[j], slope_[j], tau_[j + 1], slope_[j + 1], du_, t);
}

} // namespace levyfield
