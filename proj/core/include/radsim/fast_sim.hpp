#pragma once

#include <span>

#include "radsim/config.hpp"
#include "radsim/grid.hpp"
#include "radsim/psf.hpp"
#include "radsim/tensor.hpp"

namespace radsim {

enum class Placement { Nearest, Splat };

struct FastSimOptions {
  bool add_noise = false;
  Placement placement = Placement::Nearest;
  /// Worker threads; the output is bit-identical for every value.
  unsigned workers = 1;
};

/// acc[(cell + o - psf.center) mod dims] += scale * psf[o] for every window offset o.
void superpose_shifted_psf(RadarTensor& acc, const CellIndex& cell, Complex scale,
                           const Psf& psf);

/// Sparse circular convolution of the scatterers with `psf`, then tensor-domain noise.
RadarTensor simulate_fast(std::span<const ReflectionPoint> points, const Psf& psf,
                          const RadarConfig& cfg, const FastSimOptions& options = {});

struct EquivalenceReport {
  double full_error = 0.0;       // relative Frobenius, full PSF
  double truncated_error = 0.0;  // relative Frobenius, truncated PSF
  double max_deviation_truncated = 0.0;
  double noise_sigma = 0.0;
  double retained_energy_fraction = 1.0;
  Dims truncated_window{};
  std::size_t n_points = 0;
};

/// Noiseless comparison of both pipelines on grid-snapped copies of `points`.
EquivalenceReport equivalence_report(std::span<const ReflectionPoint> points,
                                     const RadarConfig& cfg, double energy_fraction);

}  // namespace radsim
