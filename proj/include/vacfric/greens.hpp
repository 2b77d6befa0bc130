#pragma once

#include "vacfric/materials.hpp"
#include "vacfric/reflection.hpp"
#include "vacfric/scenario.hpp"

namespace vacfric {

struct GreensOptions {
    double kappa_tol = 1e-7;
    double phi_tol = 1e-6;
    double cutoff_decades = 20.0;
    long max_evaluations = 1000000;

    static GreensOptions from(const Numerics& numerics);
};

// Dimensionless tensor N with G = (i k0^3 / 8 pi) N at the dipole position, in the slab frame.
// Re N carries the full imaginary part of G; Im N carries only the reflected real part.
struct NormalizedTensor {
    Matrix3c value = Matrix3c::Zero();
    bool converged = false;
    long evaluations = 0;
};

// Weights normalized by pi w rho0 / 8, always in the slab frame (z is the surface normal).
struct GreensWeights {
    double perp1 = 0.0;   // xx
    double perp2 = 0.0;   // yy
    double par = 0.0;     // zz / 2
    double gyro1 = 0.0;   // (Re G_xy - Re G_yx) / 2
    double gyro2 = 0.0;   // (Re G_yz - Re G_zy) / 2
    Orientation orientation = Orientation::xy_plane;
    Channel channel = Channel::magnetic;
    bool converged = false;
};

struct Ldos {
    double electric = 0.0;
    double magnetic = 0.0;
    double total = 0.0;
};

// Vacuum density of states w^2 / (pi^2 c^3).
double vacuum_dos(double omega);

// omega > 0, distance > 0.
NormalizedTensor normalized_tensor(double omega, double distance, const ReflectionModel& reflection, Channel channel,
                                   const GreensOptions& options = {});

GreensWeights weights_from_tensor(const Matrix3c& slab_tensor, Orientation orientation, Channel channel);

GreensWeights greens_weights(double omega, double distance, Orientation orientation,
                             const ReflectionModel& reflection, Channel channel, const GreensOptions& options = {});

// Slab-frame tensor expressed in lab axes (rotation axis z).
Matrix3c lab_from_slab(const Matrix3c& slab_tensor, Orientation orientation);

// Lab-frame Green tensor in 1/m^3 at signed omega, with G(-w) = conj G(w).
// The divergent vacuum self-term is excluded from Re G.
Matrix3c green_tensor_from_normalized(double omega, const Matrix3c& slab_tensor, Orientation orientation);

Ldos ldos(double omega, double distance, Orientation orientation, const ReflectionModel& reflection,
          const GreensOptions& options = {});

}  // namespace vacfric
