#include "coil/latent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coil/errors.hpp"

namespace coil {

FleetSchedule express(std::span<const double> z, const VaeModel& model) {
  if (static_cast<int>(z.size()) != model.arch.latent_dim)
    throw ShapeError("express: latent genome has " + std::to_string(z.size()) +
                     " components, model expects " + std::to_string(model.arch.latent_dim));
  for (double v : z)
    if (!(v >= kLatentMin && v <= kLatentMax))
      throw BoundsError("express: latent component outside [-2, 2]");
  if (model.arch.input_dim % 2 != 0) throw ShapeError("express: model output width is odd");

  const Eigen::VectorXd xhat = decode(model, z);
  FleetSchedule raw;
  raw.entries.reserve(static_cast<std::size_t>(xhat.size() / 2));
  auto to_slot = [](double v) {
    const double scaled = std::round(std::clamp(v, 0.0, 1.0) * kSlotMax);
    return static_cast<int>(std::clamp(scaled, 0.0, double{kSlotMax}));
  };
  for (Eigen::Index i = 0; i < xhat.size(); i += 2)
    raw.entries.push_back({to_slot(xhat(i)), to_slot(xhat(i + 1))});
  return correct_schedule(raw);
}

OptimizeResult run_coil(const RequestSet& requests, const ProblemConfig& config,
                        const VaeModel& model, GaConfig ga, Rng& rng,
                        ConstraintMeasure measure) {
  if (model.arch.input_dim != 2 * config.rb)
    throw PreconditionError("run_coil: model trained for " +
                            std::to_string(model.arch.input_dim / 2) + " robots, config has " +
                            std::to_string(config.rb));
  ga.genome_kind = GenomeKind::kReal;
  ga.selection = SelectionScheme::kTournamentFitness;
  const ScheduleDecoder decoder = [&model](std::span<const double> z) {
    return express(z, model);
  };
  return optimize_schedule(requests, config, decoder,
                           static_cast<std::size_t>(model.arch.latent_dim), ga, measure, rng);
}

}  // namespace coil
