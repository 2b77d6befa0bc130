#pragma once

#include "vacfric/materials.hpp"
#include "vacfric/quadrature.hpp"
#include "vacfric/scenario.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <vector>

namespace vacfric {

using Matrix3c = Eigen::Matrix3cd;
using Vector6c = Eigen::Matrix<cplx, 6, 1>;
using Matrix6c = Eigen::Matrix<cplx, 6, 6>;

// Reflection of a plane wave with in-plane wavevector k0 kappa (cos phi, sin phi) off the half-space z < 0.
// First index: reflected polarization, second: incident polarization.
// Basis: s = (sin phi, -cos phi, 0); incident p = (p cos phi, p sin phi, kappa); reflected p = (-p cos phi, -p sin phi, kappa).
struct ReflectionMatrix {
    cplx ss;
    cplx sp;
    cplx ps;
    cplx pp;

    ReflectionMatrix conj() const { return {std::conj(ss), std::conj(sp), std::conj(ps), std::conj(pp)}; }
};

class SingularBoundaryMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RootFinderFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vacuum normal wavenumber: sqrt(1 - kappa^2), equal to i sqrt(kappa^2 - 1) above kappa = 1.
cplx vacuum_normal(double kappa);

// Isotropic half-space with relative permittivity eps and permeability mu.
ReflectionMatrix fresnel_local(double kappa, cplx eps, cplx mu = 1.0);

// Semi-classical infinite-barrier metal at omega > 0.
ReflectionMatrix fresnel_nonlocal_scib(double omega, double kappa, const MetalParams& metal,
                                       const QuadratureOptions& options = {});

// Surface impedances of the infinite-barrier metal in units of the vacuum impedance (s, p).
std::array<cplx, 2> scib_impedances(double omega, double kappa, const MetalParams& metal,
                                    const QuadratureOptions& options = {});

// Relative permeability tensor of a medium magnetized along bias_axis.
Matrix3c oriented_permeability(const GyrotropicPermeability& mu, Axis bias_axis);

struct SlabMode {
    cplx normal;     // k_z / k0
    Vector6c field;  // (E, eta0 H), unit norm
};

struct SlabModeSet {
    std::array<cplx, 4> roots;          // every root of the dispersion quartic
    std::array<SlabMode, 2> selected;   // the two modes decaying into z < 0
    bool degenerate = false;            // selected roots closer than the degeneracy threshold
    double max_residual = 0.0;          // max |det M(root)| / ||M(root)||^6 over selected roots
};

// Material matrix acting on (E, eta0 H) for in-plane direction phi and normal wavenumber kz (units of k0).
Matrix6c slab_matrix(double kappa, double phi, cplx kz, cplx eps, const Matrix3c& mu);

SlabModeSet slab_modes_gyromagnetic(double kappa, double phi, cplx eps, const Matrix3c& mu);

ReflectionMatrix fresnel_gyromagnetic(double kappa, double phi, cplx eps, const Matrix3c& mu);

// Reflection provider shared read-only across threads.
class ReflectionModel {
public:
    virtual ~ReflectionModel() = default;

    // Signed omega; negative frequencies return the complex conjugate of the |omega| value.
    ReflectionMatrix evaluate(double omega, double kappa, double phi) const;

    virtual bool phi_independent() const = 0;
    virtual bool vanishing() const { return false; }

protected:
    virtual ReflectionMatrix at_positive(double omega, double kappa, double phi) const = 0;
};

class NoInterface final : public ReflectionModel {
public:
    bool phi_independent() const override { return true; }
    bool vanishing() const override { return true; }

protected:
    ReflectionMatrix at_positive(double, double, double) const override { return {}; }
};

// Frequency-independent isotropic half-space.
class IsotropicHalfSpace final : public ReflectionModel {
public:
    IsotropicHalfSpace(cplx eps, cplx mu) : eps_(eps), mu_(mu) {}
    bool phi_independent() const override { return true; }

protected:
    ReflectionMatrix at_positive(double, double kappa, double) const override { return fresnel_local(kappa, eps_, mu_); }

private:
    cplx eps_;
    cplx mu_;
};

class LocalMetal final : public ReflectionModel {
public:
    explicit LocalMetal(const MetalParams& metal) : metal_(metal) {}
    bool phi_independent() const override { return true; }

protected:
    ReflectionMatrix at_positive(double omega, double kappa, double) const override;

private:
    MetalParams metal_;
};

class NonlocalMetal final : public ReflectionModel {
public:
    NonlocalMetal(const MetalParams& metal, const QuadratureOptions& options) : metal_(metal), options_(options) {}
    bool phi_independent() const override { return true; }

protected:
    ReflectionMatrix at_positive(double omega, double kappa, double) const override {
        return fresnel_nonlocal_scib(omega, kappa, metal_, options_);
    }

private:
    MetalParams metal_;
    QuadratureOptions options_;
};

// Magnetized ferrite half-space; bias_axis is expressed in the slab frame (z is the surface normal).
class GyromagneticHalfSpace final : public ReflectionModel {
public:
    GyromagneticHalfSpace(cplx eps, double larmor, double magnetization_frequency, double damping, Axis bias_axis)
        : eps_(eps), larmor_(larmor), magnetization_frequency_(magnetization_frequency), damping_(damping),
          bias_axis_(bias_axis) {}
    bool phi_independent() const override { return bias_axis_ == Axis::z; }

protected:
    ReflectionMatrix at_positive(double omega, double kappa, double phi) const override;

private:
    cplx eps_;
    double larmor_;
    double magnetization_frequency_;
    double damping_;
    Axis bias_axis_;
};

// Slab-frame axis of a lab-frame axis for the given interface orientation.
Axis slab_axis_of(Axis lab_axis, Orientation orientation);

std::unique_ptr<ReflectionModel> make_reflection_model(const Scenario& scenario);

}  // namespace vacfric
