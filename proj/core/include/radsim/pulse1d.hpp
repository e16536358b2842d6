#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radsim/types.hpp"

/// Single-pulse, single-axis harness of the match-filter / PSF-convolution identity.
namespace radsim::pulse1d {

struct Echo {
  std::size_t delay = 0;  // samples
  Complex amplitude{1.0, 0.0};
};

/// Unit-magnitude linear FM pulse of `length` samples sweeping `bandwidth_fraction`
/// of the sample rate.
std::vector<Complex> lfm_pulse(std::size_t length, double bandwidth_fraction);

/// r(n) = sum_i a_i s(n - tau_i) over a buffer of `n_samples`.
std::vector<Complex> receive(std::span<const Complex> pulse, std::size_t n_samples,
                             std::span<const Echo> echoes);

/// Correlation output over lags -(L-1) .. N-1; element i holds lag i - (L-1).
/// y(lag) = sum_k r(lag + k) conj(s(k)). Computed with zero-padded FFTs.
std::vector<Complex> match_filter(std::span<const Complex> received,
                                  std::span<const Complex> pulse);

/// Autocorrelation x(lag) = sum_k s(lag + k) conj(s(k)), lags -(L-1) .. L-1.
std::vector<Complex> autocorrelation(std::span<const Complex> pulse);

/// sum_i a_i x(lag - tau_i) on the match_filter lag axis.
std::vector<Complex> superpose_psf(std::span<const Complex> psf, std::size_t pulse_length,
                                   std::size_t n_samples, std::span<const Echo> echoes);

}  // namespace radsim::pulse1d
