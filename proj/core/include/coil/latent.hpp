#pragma once

#include <span>

#include "coil/domain.hpp"
#include "coil/optimize.hpp"
#include "coil/vae.hpp"

namespace coil {

inline constexpr double kLatentMin = -2.0;
inline constexpr double kLatentMax = 2.0;

/// Latent genome to corrected schedule: decode, clamp to [0, 1], scale by
/// 66, round half away from zero, clamp to [0, 66], correct. Throws
/// ShapeError when z does not match the model's latent width and
/// BoundsError for components outside [-2, 2].
FleetSchedule express(std::span<const double> z, const VaeModel& model);

/// Latent-space optimizer: the same GA as the baseline over real genomes of
/// length latent_dim, decoded through express().
OptimizeResult run_coil(const RequestSet& requests, const ProblemConfig& config,
                        const VaeModel& model, GaConfig ga, Rng& rng,
                        ConstraintMeasure measure = ConstraintMeasure::kViolatingSlots);

}  // namespace coil
