#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relkac/fields.hpp"
#include "relkac/sampler.hpp"

namespace relkac {

/// Which spin value enters the jump weight 1/2 (b1 - i theta b2) at a
/// Poisson jump: the value held before the jump or the one after it.
enum class JumpConvention { PreJump, PostJump };

std::string to_string(JumpConvention convention);
JumpConvention jump_convention_from_string(const std::string& name);

/// Uniform points k * step in [0, horizon], the horizon itself and every
/// time in `extra` that lies in [0, horizon], sorted and deduplicated.
/// step <= 0 adds no uniform points.
std::vector<double> merge_time_grid(double horizon, double step,
                                    std::initializer_list<std::span<const double>> extra);

/// Position at a grid knot. ContractError if `time` is not on the grid.
const Vec3& position_at(const BrownianPath& path, double time);

/// Midpoint sum sum_k a((x_k + x_{k+1}) / 2) . (x_{k+1} - x_k), the
/// Stratonovich integral of a along the whole path.
double stratonovich_integral(const VectorPotential& a, const BrownianPath& path);

/// Left-endpoint sum sum_j V(B(T(s_j))) (s_{j+1} - s_j).
double outer_potential_integral(const ScalarPotential& V, const BrownianPath& bpath,
                                const SubordinatorPath& spath);

/// Left-endpoint sum of V(B_s) ds over the inner grid up to `horizon`.
double inner_potential_integral(const ScalarPotential& V, const BrownianPath& bpath,
                                double horizon);

/// Riemann sum of (1/2) theta_s b3(B_s) ds on [0, horizon]; spin is
/// piecewise constant between jumps, which must be grid knots.
double spin_b3_integral(const MagneticField& b, const BrownianPath& bpath,
                        const SpinPath& spin, double horizon);

/// prod over jumps tau <= horizon of (1/2)(b1(B_tau) - i theta b2(B_tau)).
std::complex<double> jump_weight_product(const MagneticField& b, const BrownianPath& bpath,
                                         const SpinPath& spin, double horizon,
                                         JumpConvention convention);

/// exp(-i phase) exp(-outer V integral), with the phase over [0, T(t)].
std::complex<double> assemble_weight_spinless(const FieldConfig& fields,
                                              const BrownianPath& bpath,
                                              const SubordinatorPath& spath);

/// exp(Z) for the Pauli path weight. With `outer`, V is integrated in outer
/// time along the subordinator; otherwise in ordinary time up to `horizon`.
std::complex<double> assemble_weight_pauli(const FieldConfig& fields, const BrownianPath& bpath,
                                           const SpinPath& spin, double horizon,
                                           JumpConvention convention,
                                           const SubordinatorPath* outer = nullptr);

}  // namespace relkac
