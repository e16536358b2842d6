#include "radsim/pulse1d.hpp"

#include <cmath>
#include <numbers>

#include "radsim/errors.hpp"
#include "radsim/fft.hpp"

namespace radsim::pulse1d {

std::vector<Complex> lfm_pulse(std::size_t length, double bandwidth_fraction) {
  if (length == 0) throw ValidationError("length", "pulse must be non-empty");
  std::vector<Complex> s(length);
  for (std::size_t t = 0; t < length; ++t) {
    const double tt = double(t);
    s[t] = std::polar(1.0, std::numbers::pi * bandwidth_fraction * (tt * tt / double(length) - tt));
  }
  return s;
}

std::vector<Complex> receive(std::span<const Complex> pulse, std::size_t n_samples,
                             std::span<const Echo> echoes) {
  std::vector<Complex> r(n_samples, Complex{});
  for (const auto& e : echoes) {
    if (e.delay + pulse.size() > n_samples)
      throw ValidationError("delay", "echo extends past the receive window");
    for (std::size_t k = 0; k < pulse.size(); ++k) r[e.delay + k] += e.amplitude * pulse[k];
  }
  return r;
}

std::vector<Complex> match_filter(std::span<const Complex> received,
                                  std::span<const Complex> pulse) {
  const std::size_t n = received.size();
  const std::size_t l = pulse.size();
  if (l == 0 || n == 0) throw ValidationError("pulse", "empty input");
  std::size_t m = 1;
  while (m < n + l - 1) m <<= 1;

  std::vector<Complex> rf(m, Complex{}), sf(m, Complex{});
  std::copy(received.begin(), received.end(), rf.begin());
  std::copy(pulse.begin(), pulse.end(), sf.begin());
  dft_1d(rf, FftSign::Negative, false);
  dft_1d(sf, FftSign::Negative, false);
  for (std::size_t k = 0; k < m; ++k) rf[k] *= std::conj(sf[k]);
  dft_1d(rf, FftSign::Positive, false);

  // Circular lag c maps to linear lag c (c < n) or c - m (negative lags).
  std::vector<Complex> y(n + l - 1);
  const double inv = 1.0 / double(m);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const long lag = long(i) - long(l - 1);
    const std::size_t c = lag >= 0 ? std::size_t(lag) : std::size_t(long(m) + lag);
    y[i] = rf[c] * inv;
  }
  return y;
}

std::vector<Complex> autocorrelation(std::span<const Complex> pulse) {
  return match_filter(pulse, pulse);
}

std::vector<Complex> superpose_psf(std::span<const Complex> psf, std::size_t pulse_length,
                                   std::size_t n_samples, std::span<const Echo> echoes) {
  if (psf.size() != 2 * pulse_length - 1)
    throw ValidationError("psf", "expected 2L-1 autocorrelation lags");
  std::vector<Complex> y(n_samples + pulse_length - 1, Complex{});
  for (const auto& e : echoes) {
    if (e.delay + pulse_length > n_samples)
      throw ValidationError("delay", "echo extends past the receive window");
    // psf index j is lag j - (L-1); it lands on output lag j - (L-1) + delay,
    // i.e. output index j + delay.
    for (std::size_t j = 0; j < psf.size(); ++j) y[j + e.delay] += e.amplitude * psf[j];
  }
  return y;
}

}  // namespace radsim::pulse1d
