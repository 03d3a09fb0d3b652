#pragma once

#include <cstddef>
#include <vector>

#include "sweeplab/vec2.hpp"

namespace sweeplab {

// One Fourier mode of a stream function: amplitude * cos(2*pi*(n . x) + phase).
// Wavevectors are integer and nonzero, so every component has zero torus mean
// by construction. Amplitudes may be negative (equivalent to a phase shift of pi).
struct FourierMode {
    double amplitude = 0.0;
    int n1 = 0;
    int n2 = 0;
    double phase = 0.0;
};

// Fourier description of the stream functions H_1..H_d driving the flow and of
// the stream function of the deterministic drift field X_0 (may be empty).
// The velocity field of component k is the rotated gradient of H_k,
//   X_k = (-dH_k/dx2, dH_k/dx1),
// which is divergence free as a trigonometric identity.
class StreamSpec {
public:
    static constexpr std::size_t kMaxComponents = 8;
    static constexpr std::size_t kMaxModesPerComponent = 64;

    StreamSpec() = default;

    // Throws std::invalid_argument on a zero wavevector, an empty component,
    // or a violated cap.
    void add_component(std::vector<FourierMode> modes);
    void set_drift(std::vector<FourierMode> modes);  // empty allowed

    std::size_t num_components() const { return components_.size(); }
    bool has_drift() const { return !drift_.empty(); }
    const std::vector<FourierMode>& component(std::size_t k) const;
    const std::vector<FourierMode>& drift_modes() const { return drift_; }

    // H_k(x); 1-periodic in both coordinates (coordinates are wrapped first).
    double stream(std::size_t k, Vec2 x) const;
    // X_k(x) = (-dH_k/dx2, dH_k/dx1).
    Vec2 velocity(std::size_t k, Vec2 x) const;
    // Jacobian DX_k(x); trace is identically zero.
    Mat2 jacobian(std::size_t k, Vec2 x) const;
    // Hessian of H_k at x.
    Mat2 stream_hessian(std::size_t k, Vec2 x) const;
    // Gradient of H_k at x.
    Vec2 stream_gradient(std::size_t k, Vec2 x) const;

    // X_0(x) (zero vector if no drift modes).
    Vec2 drift_velocity(Vec2 x) const;
    Mat2 drift_jacobian(Vec2 x) const;

    // Deterministic Ito-form drift sum_k DX_k(x) X_k(x) + X_0(x).
    Vec2 ito_drift(Vec2 x) const;

    // Upper bound on sup_x |X_k(x)| (sum of 2*pi*|a|*|n| over modes).
    double velocity_sup_bound(std::size_t k) const;
    double drift_sup_bound() const;
    // Upper bound on sup_x |DX_k(x)| (sum of (2*pi)^2*|a|*|n|^2).
    double jacobian_sup_bound(std::size_t k) const;
    // Largest |n| coordinate over all modes of all components.
    int max_wavenumber() const;

private:
    static void validate_modes(const std::vector<FourierMode>& modes, bool allow_empty);

    std::vector<std::vector<FourierMode>> components_;
    std::vector<FourierMode> drift_;
};

// The shipped default family: four stream functions forming one orbit of the
// 90-degree rotation about (1/4, 0), so the law of the flow is invariant under
// the full dihedral symmetry group of the lattice (rotations by 90 degrees and
// axis reflections, acting on directions). Components 1 and 3 have their
// critical points on the half-integer lattice, components 2 and 4 on the
// quarter lattice, so no point is critical for all stream functions at once.
//
// Constants (amplitude scale, shape parameters) are frozen from measured runs;
// see pinned.hpp. check_conditions() passes on this family.
StreamSpec default_field_family();

// Same family at unit amplitude scale (used by calibration and tests).
StreamSpec default_field_family_scaled(double amplitude);

}  // namespace sweeplab
