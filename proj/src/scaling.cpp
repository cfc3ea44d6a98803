#include "levyfield/scaling.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include "levyfield/quadrature.hpp"

namespace levyfield {

namespace {
enum class IntKind : int { Rect, RectSq, Forward, Spot, Strip };

struct CacheKey {
    IntKind kind;
    double a, b, c;
    bool operator<(const CacheKey& o) const {
        return std::tie(kind, a, b, c) < std::tie(o.kind, o.a, o.b, o.c);
    }
};
} // namespace

struct ScalingFunction::Impl {
    bool constant = true;
    double value = 0.0;
    std::function<double(double, double)> fn;
    double sup = 0.0;

    mutable std::shared_mutex mutex;
    mutable std::map<CacheKey, double> cache;

    double eval(double x, double y) const { return constant ? value : fn(x, y); }

    double cached(IntKind kind, double a, double b, double c,
                  double (*compute)(const Impl&, double, double, double)) const {
        const CacheKey key{kind, a, b, c};
        {
            std::shared_lock lock(mutex);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
        }
        const double v = compute(*this, a, b, c);
        std::unique_lock lock(mutex);
        cache.emplace(key, v);
        return v;
    }
};

ScalingFunction ScalingFunction::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("scaling function must be nonnegative and finite");
    auto impl = std::make_shared<Impl>();
    impl->constant = true;
    impl->value = value;
    impl->sup = value;
    ScalingFunction k;
    k.impl_ = std::move(impl);
    return k;
}

ScalingFunction ScalingFunction::callable(std::function<double(double, double)> f,
                                          double upper_bound) {
    if (!f) throw std::invalid_argument("scaling function: null callable");
    if (!(upper_bound >= 0.0) || !std::isfinite(upper_bound))
        throw std::invalid_argument("scaling function: invalid upper bound");
    auto impl = std::make_shared<Impl>();
    impl->constant = false;
    impl->fn = std::move(f);
    impl->sup = upper_bound;
    ScalingFunction k;
    k.impl_ = std::move(impl);
    return k;
}

bool ScalingFunction::is_constant() const { return impl_->constant; }

double ScalingFunction::constant_value() const {
    if (!impl_->constant)
        throw std::logic_error("constant_value() on a non-constant scaling function");
    return impl_->value;
}

double ScalingFunction::sup_bound() const { return impl_->sup; }

double ScalingFunction::operator()(double x, double y) const {
    return impl_->eval(x, y);
}

double ScalingFunction::rect_integral(double s, double t) const {
    if (impl_->constant) return impl_->value * s * t;
    return impl_->cached(IntKind::Rect, s, t, 0.0,
                         [](const Impl& im, double s_, double t_, double) {
                             return quad::gauss64_rect(
                                 [&](double x, double y) { return im.fn(x, y); }, 0.0,
                                 s_, 0.0, t_);
                         });
}

double ScalingFunction::rect_integral_sq(double s, double t) const {
    if (impl_->constant) return impl_->value * impl_->value * s * t;
    return impl_->cached(IntKind::RectSq, s, t, 0.0,
                         [](const Impl& im, double s_, double t_, double) {
                             return quad::gauss64_rect(
                                 [&](double x, double y) {
                                     const double k = im.fn(x, y);
                                     return k * k;
                                 },
                                 0.0, s_, 0.0, t_);
                         });
}

double ScalingFunction::forward_weighted_integral(double s, double t) const {
    if (s > t) throw std::invalid_argument("forward_weighted_integral: needs s <= t");
    if (impl_->constant) {
        const double d = t - s;
        return impl_->value * s * (s * d + 0.5 * d * d);
    }
    // weight (t - max(s,y)) has a kink at y = s: split the y-range there
    return impl_->cached(
        IntKind::Forward, s, t, 0.0, [](const Impl& im, double s_, double t_, double) {
            const double low = quad::gauss64_rect(
                [&](double x, double y) { return im.fn(x, y) * (t_ - s_); }, 0.0, s_,
                0.0, s_);
            const double high = quad::gauss64_rect(
                [&](double x, double y) { return im.fn(x, y) * (t_ - y); }, 0.0, s_,
                s_, t_);
            return low + high;
        });
}

double ScalingFunction::spot_weighted_integral(double s) const {
    if (impl_->constant) return impl_->value * s * s * s / 3.0;
    // kink along the diagonal x = y: two smooth triangles
    return impl_->cached(
        IntKind::Spot, s, 0.0, 0.0, [](const Impl& im, double s_, double, double) {
            const double lower = quad::gauss64_xstrip(
                [&](double x, double y) { return im.fn(x, y) * (s_ - x); }, 0.0, s_,
                [](double) { return 0.0; }, [](double x) { return x; });
            const double upper = quad::gauss64_xstrip(
                [&](double x, double y) { return im.fn(x, y) * (s_ - y); }, 0.0, s_,
                [](double x) { return x; }, [s_](double) { return s_; });
            return lower + upper;
        });
}

double ScalingFunction::strip_weighted_integral(double s2, double s1, double t) const {
    if (!(0.0 <= s2 && s2 <= s1 && s1 <= t))
        throw std::invalid_argument("strip_weighted_integral: needs 0 <= s2 <= s1 <= t");
    if (impl_->constant) {
        const auto anti = [t](double x) { return 0.5 * t * t * x - x * x * x / 6.0; };
        return impl_->value * (anti(s1) - anti(s2));
    }
    return impl_->cached(
        IntKind::Strip, s2, s1, t, [](const Impl& im, double a, double b, double t_) {
            const double below = quad::gauss64_xstrip(
                [&](double x, double y) { return im.fn(x, y) * (t_ - x); }, a, b,
                [](double) { return 0.0; }, [](double x) { return x; });
            const double above = quad::gauss64_xstrip(
                [&](double x, double y) { return im.fn(x, y) * (t_ - y); }, a, b,
                [](double x) { return x; }, [t_](double) { return t_; });
            return below + above;
        });
}

} // namespace levyfield
