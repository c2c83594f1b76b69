#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpmc/grid.hpp"
#include "dpmc/gridded_density.hpp"

namespace dpmc {

enum class EstimatorKind { gaussian_kde, reflected_kde, logspline_like };
enum class BandwidthRule { silverman, scott, fixed };

/// Optional support bounds for boundary-corrected estimation and for
/// clamping the estimation range (e.g. [0, 1] for probabilities).
struct Support {
  std::optional<double> lower;
  std::optional<double> upper;
};

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::reflected_kde;
  BandwidthRule bandwidth_rule = BandwidthRule::silverman;
  double fixed_bandwidth = 0.0;  // used when bandwidth_rule == fixed
  Support support;
};

/// One parameter's draws from one shard.
struct MarginalSamples {
  std::vector<double> values;
  int shard_id = 0;
  int parameter_index = 0;
};

/// Shared estimation range over all shards' marginals: the global sample
/// range padded by padding_fraction * span on each side, then intersected
/// with the declared support bounds. Throws DegenerateRangeError when the
/// global span is zero.
std::pair<double, double> select_range(const std::vector<MarginalSamples>& marginals,
                                       double padding_fraction,
                                       const Support& support = {});

/// Kernel bandwidth for the given rule. Throws BandwidthZeroError when the
/// rule yields h <= 0 (all samples identical).
double select_bandwidth(const EstimatorSpec& spec, std::span<const double> samples);

/// Evaluates the density estimate at every grid node. The result is
/// unnormalized (normalized == false); all values are non-negative and
/// finite. Deterministic in its inputs.
GriddedDensity estimate_density(const MarginalSamples& samples,
                                const EstimatorSpec& spec, const Grid& grid);

}  // namespace dpmc
