#include "sweeplab/stream_spec.hpp"

#include <cmath>
#include <stdexcept>

#include "sweeplab/pinned.hpp"

namespace sweeplab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double wrap_unit(double v) {
    double w = v - std::floor(v);
    // floor can leave w == 1.0 when v is a tiny negative number.
    if (w >= 1.0) w -= 1.0;
    return w;
}

inline Vec2 wrap_point(Vec2 x) { return {wrap_unit(x.x), wrap_unit(x.y)}; }

}  // namespace

void StreamSpec::validate_modes(const std::vector<FourierMode>& modes, bool allow_empty) {
    if (!allow_empty && modes.empty())
        throw std::invalid_argument("stream component needs at least one mode");
    if (modes.size() > kMaxModesPerComponent)
        throw std::invalid_argument("stream component exceeds mode cap");
    for (const FourierMode& m : modes) {
        if (m.n1 == 0 && m.n2 == 0)
            throw std::invalid_argument("zero wavevector mode (would break zero torus mean)");
    }
}

void StreamSpec::add_component(std::vector<FourierMode> modes) {
    validate_modes(modes, false);
    if (components_.size() >= kMaxComponents)
        throw std::invalid_argument("too many stream components");
    components_.push_back(std::move(modes));
}

void StreamSpec::set_drift(std::vector<FourierMode> modes) {
    validate_modes(modes, true);
    drift_ = std::move(modes);
}

const std::vector<FourierMode>& StreamSpec::component(std::size_t k) const {
    if (k >= components_.size()) throw std::out_of_range("stream component index");
    return components_[k];
}

double StreamSpec::stream(std::size_t k, Vec2 x) const {
    const auto& modes = component(k);
    x = wrap_point(x);
    double h = 0.0;
    for (const FourierMode& m : modes)
        h += m.amplitude * std::cos(kTwoPi * (m.n1 * x.x + m.n2 * x.y) + m.phase);
    return h;
}

namespace {

inline Vec2 velocity_of(const std::vector<FourierMode>& modes, Vec2 x) {
    x = wrap_point(x);
    Vec2 v{0.0, 0.0};
    for (const FourierMode& m : modes) {
        const double s = std::sin(kTwoPi * (m.n1 * x.x + m.n2 * x.y) + m.phase);
        const double f = kTwoPi * m.amplitude * s;
        v.x += f * m.n2;
        v.y -= f * m.n1;
    }
    return v;
}

inline Mat2 jacobian_of(const std::vector<FourierMode>& modes, Vec2 x) {
    x = wrap_point(x);
    Mat2 j;
    for (const FourierMode& m : modes) {
        const double c = std::cos(kTwoPi * (m.n1 * x.x + m.n2 * x.y) + m.phase);
        const double f = kTwoPi * kTwoPi * m.amplitude * c;
        j.a += f * m.n2 * m.n1;
        j.b += f * m.n2 * m.n2;
        j.c -= f * m.n1 * m.n1;
        j.d -= f * m.n1 * m.n2;
    }
    return j;
}

}  // namespace

Vec2 StreamSpec::velocity(std::size_t k, Vec2 x) const { return velocity_of(component(k), x); }

Mat2 StreamSpec::jacobian(std::size_t k, Vec2 x) const { return jacobian_of(component(k), x); }

Mat2 StreamSpec::stream_hessian(std::size_t k, Vec2 x) const {
    const auto& modes = component(k);
    x = wrap_point(x);
    Mat2 h;
    for (const FourierMode& m : modes) {
        const double c = std::cos(kTwoPi * (m.n1 * x.x + m.n2 * x.y) + m.phase);
        const double f = -kTwoPi * kTwoPi * m.amplitude * c;
        h.a += f * m.n1 * m.n1;
        h.b += f * m.n1 * m.n2;
        h.c += f * m.n1 * m.n2;
        h.d += f * m.n2 * m.n2;
    }
    return h;
}

Vec2 StreamSpec::stream_gradient(std::size_t k, Vec2 x) const {
    const Vec2 v = velocity(k, x);  // X = (-H_y, H_x)
    return {v.y, -v.x};
}

Vec2 StreamSpec::drift_velocity(Vec2 x) const {
    if (drift_.empty()) return {0.0, 0.0};
    return velocity_of(drift_, x);
}

Mat2 StreamSpec::drift_jacobian(Vec2 x) const {
    if (drift_.empty()) return {};
    return jacobian_of(drift_, x);
}

Vec2 StreamSpec::ito_drift(Vec2 x) const {
    Vec2 d = drift_velocity(x);
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const Mat2 j = jacobian(k, x);
        const Vec2 v = velocity(k, x);
        d += j * v;
    }
    return d;
}

double StreamSpec::velocity_sup_bound(std::size_t k) const {
    double s = 0.0;
    for (const FourierMode& m : component(k))
        s += kTwoPi * std::abs(m.amplitude) * std::hypot(m.n1, m.n2);
    return s;
}

double StreamSpec::drift_sup_bound() const {
    double s = 0.0;
    for (const FourierMode& m : drift_)
        s += kTwoPi * std::abs(m.amplitude) * std::hypot(m.n1, m.n2);
    return s;
}

double StreamSpec::jacobian_sup_bound(std::size_t k) const {
    double s = 0.0;
    for (const FourierMode& m : component(k)) {
        const double n2 = m.n1 * m.n1 + m.n2 * m.n2;
        s += kTwoPi * kTwoPi * std::abs(m.amplitude) * n2;
    }
    return s;
}

int StreamSpec::max_wavenumber() const {
    int w = 0;
    auto scan = [&w](const std::vector<FourierMode>& modes) {
        for (const FourierMode& m : modes) {
            w = std::max(w, std::abs(m.n1));
            w = std::max(w, std::abs(m.n2));
        }
    };
    for (const auto& c : components_) scan(c);
    scan(drift_);
    return w;
}

StreamSpec default_field_family_scaled(double amplitude) {
    // H1 =  a (  cos u + b cos v) + a e (cos(u+v) + cos(u-v))
    // H2 =  a (b sin u -   sin v) - a e (cos(u-v) - cos(u+v))
    // H3 =  a ( -cos u + b cos v) - a e (cos(u+v) + cos(u-v))
    // H4 =  a (b sin u +   sin v) - a e (cos(u+v) - cos(u-v))
    // One orbit of the quarter-turn about (1/4, 0): H_{k+1} = H_k o g^{-1}.
    const double a = amplitude;
    const double b = pinned::kFamilyCrossRatio;
    const double e = pinned::kFamilyDiagonalRatio;
    const double kHalfPi = 1.5707963267948966;

    StreamSpec spec;
    spec.add_component({
        {a, 1, 0, 0.0},
        {a * b, 0, 1, 0.0},
        {a * e, 1, 1, 0.0},
        {a * e, 1, -1, 0.0},
    });
    spec.add_component({
        {a * b, 1, 0, -kHalfPi},
        {-a, 0, 1, -kHalfPi},
        {a * e, 1, 1, 0.0},
        {-a * e, 1, -1, 0.0},
    });
    spec.add_component({
        {-a, 1, 0, 0.0},
        {a * b, 0, 1, 0.0},
        {-a * e, 1, 1, 0.0},
        {-a * e, 1, -1, 0.0},
    });
    spec.add_component({
        {a * b, 1, 0, -kHalfPi},
        {a, 0, 1, -kHalfPi},
        {-a * e, 1, 1, 0.0},
        {a * e, 1, -1, 0.0},
    });
    return spec;
}

StreamSpec default_field_family() {
    return default_field_family_scaled(pinned::kFamilyAmplitude);
}

}  // namespace sweeplab
