#include "relkac/paths.hpp"

#include <algorithm>
#include <cmath>

#include "relkac/errors.hpp"

namespace relkac {

std::string to_string(JumpConvention convention) {
  return convention == JumpConvention::PreJump ? "pre_jump" : "post_jump";
}

JumpConvention jump_convention_from_string(const std::string& name) {
  if (name == "pre_jump") return JumpConvention::PreJump;
  if (name == "post_jump") return JumpConvention::PostJump;
  throw ConfigError("unknown jump convention '" + name + "' (expected pre_jump or post_jump)");
}

std::vector<double> merge_time_grid(double horizon, double step,
                                    std::initializer_list<std::span<const double>> extra) {
  if (!(horizon >= 0.0)) throw DomainError("time grid horizon must be nonnegative");
  std::vector<double> grid{0.0};
  if (step > 0.0 && horizon > 0.0) {
    const auto count = static_cast<std::size_t>(std::floor(horizon / step));
    grid.reserve(count + 2);
    for (std::size_t k = 1; k <= count; ++k) {
      const double s = static_cast<double>(k) * step;
      if (s < horizon) grid.push_back(s);
    }
  }
  for (const auto& times : extra) {
    for (const double s : times) {
      if (s > 0.0 && s <= horizon) grid.push_back(s);
    }
  }
  if (horizon > 0.0) grid.push_back(horizon);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

const Vec3& position_at(const BrownianPath& path, double time) {
  const auto it = std::lower_bound(path.inner_times.begin(), path.inner_times.end(), time);
  if (it == path.inner_times.end() || *it != time) {
    throw ContractError("time " + std::to_string(time) + " is not a knot of the inner grid");
  }
  return path.positions[static_cast<std::size_t>(it - path.inner_times.begin())];
}

double stratonovich_integral(const VectorPotential& a, const BrownianPath& path) {
  if (a.is_zero()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.positions.size(); ++k) {
    const Vec3& x0 = path.positions[k];
    const Vec3& x1 = path.positions[k + 1];
    const Vec3 mid{0.5 * (x0[0] + x1[0]), 0.5 * (x0[1] + x1[1]), 0.5 * (x0[2] + x1[2])};
    const Vec3 field = a(mid);
    for (std::size_t i = 0; i < 3; ++i) sum += field[i] * (x1[i] - x0[i]);
  }
  return sum;
}

double outer_potential_integral(const ScalarPotential& V, const BrownianPath& bpath,
                                const SubordinatorPath& spath) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < spath.outer_times.size(); ++j) {
    const double ds = spath.outer_times[j + 1] - spath.outer_times[j];
    sum += V(position_at(bpath, spath.cumulative[j])) * ds;
  }
  return sum;
}

double inner_potential_integral(const ScalarPotential& V, const BrownianPath& bpath,
                                double horizon) {
  if (horizon > bpath.inner_times.back()) {
    throw ContractError("potential integral horizon exceeds the inner grid");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < bpath.inner_times.size(); ++k) {
    const double t0 = bpath.inner_times[k];
    if (t0 >= horizon) break;
    const double t1 = std::min(bpath.inner_times[k + 1], horizon);
    sum += V(bpath.positions[k]) * (t1 - t0);
  }
  return sum;
}

double spin_b3_integral(const MagneticField& b, const BrownianPath& bpath,
                        const SpinPath& spin, double horizon) {
  if (horizon > bpath.inner_times.back()) {
    throw ContractError("spin integral horizon exceeds the inner grid");
  }
  for (const double tau : spin.jump_times) {
    if (tau <= horizon) position_at(bpath, tau);
  }
  double sum = 0.0;
  std::size_t jumps_seen = 0;
  for (std::size_t k = 0; k + 1 < bpath.inner_times.size(); ++k) {
    const double t0 = bpath.inner_times[k];
    if (t0 >= horizon) break;
    while (jumps_seen < spin.jump_times.size() && spin.jump_times[jumps_seen] <= t0) ++jumps_seen;
    const int theta = (jumps_seen % 2 == 0) ? spin.initial_spin : -spin.initial_spin;
    const double t1 = std::min(bpath.inner_times[k + 1], horizon);
    sum += 0.5 * theta * b(bpath.positions[k])[2] * (t1 - t0);
  }
  return sum;
}

std::complex<double> jump_weight_product(const MagneticField& b, const BrownianPath& bpath,
                                         const SpinPath& spin, double horizon,
                                         JumpConvention convention) {
  if (horizon > bpath.inner_times.back()) {
    throw ContractError("jump weight horizon exceeds the inner grid");
  }
  std::complex<double> product{1.0, 0.0};
  int theta_before = spin.initial_spin;
  for (const double tau : spin.jump_times) {
    if (tau > horizon) break;
    const int theta = (convention == JumpConvention::PreJump) ? theta_before : -theta_before;
    const Vec3 field = b(position_at(bpath, tau));
    product *= std::complex<double>(0.5 * field[0], -0.5 * theta * field[1]);
    theta_before = -theta_before;
  }
  return product;
}

std::complex<double> assemble_weight_spinless(const FieldConfig& fields,
                                              const BrownianPath& bpath,
                                              const SubordinatorPath& spath) {
  const double phase = stratonovich_integral(fields.a, bpath);
  const double potential = outer_potential_integral(fields.V, bpath, spath);
  return std::polar(std::exp(-potential), -phase);
}

std::complex<double> assemble_weight_pauli(const FieldConfig& fields, const BrownianPath& bpath,
                                           const SpinPath& spin, double horizon,
                                           JumpConvention convention,
                                           const SubordinatorPath* outer) {
  const double phase = stratonovich_integral(fields.a, bpath);
  const double potential = (outer != nullptr)
                               ? outer_potential_integral(fields.V, bpath, *outer)
                               : inner_potential_integral(fields.V, bpath, horizon);
  const double zeeman = spin_b3_integral(fields.b, bpath, spin, horizon);
  const auto jumps = jump_weight_product(fields.b, bpath, spin, horizon, convention);
  return std::polar(std::exp(zeeman - potential), -phase) * jumps;
}

}  // namespace relkac
