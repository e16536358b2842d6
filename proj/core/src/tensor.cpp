#include "radsim/tensor.hpp"

#include <cmath>

#include "radsim/errors.hpp"

namespace radsim {

RadarTensor::RadarTensor(Dims dims, TensorKind kind)
    : dims_(dims), kind_(kind), cells_(dims.count(), Complex{}) {}

RadarTensor::RadarTensor(Dims dims, TensorKind kind, std::vector<Complex> cells)
    : dims_(dims), kind_(kind), cells_(std::move(cells)) {
  if (cells_.size() != dims_.count())
    throw ValidationError("cells", "cell count does not match dims");
}

double RadarTensor::energy() const noexcept {
  double e = 0.0;
  for (const auto& c : cells_) e += std::norm(c);
  return e;
}

bool RadarTensor::all_finite() const noexcept {
  for (const auto& c : cells_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

RadarTensor& RadarTensor::operator+=(const RadarTensor& other) {
  if (other.dims_ != dims_) throw ValidationError("dims", "tensor dimension mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  return *this;
}

RadarTensor& RadarTensor::operator*=(Complex scale) noexcept {
  for (auto& c : cells_) c *= scale;
  return *this;
}

double relative_frobenius_distance(const RadarTensor& a, const RadarTensor& b) {
  if (a.dims() != b.dims()) throw ValidationError("dims", "tensor dimension mismatch");
  double diff = 0.0, ref = 0.0;
  auto ca = a.cells();
  auto cb = b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    diff += std::norm(ca[i] - cb[i]);
    ref += std::norm(cb[i]);
  }
  return ref > 0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

double max_abs_deviation(const RadarTensor& a, const RadarTensor& b) {
  if (a.dims() != b.dims()) throw ValidationError("dims", "tensor dimension mismatch");
  double m = 0.0;
  auto ca = a.cells();
  auto cb = b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

CellIndex argmax_magnitude(const RadarTensor& t) {
  std::size_t best = 0;
  double best_mag = -1.0;
  auto cells = t.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double m = std::norm(cells[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  const auto& d = t.dims();
  return {best / (d.doppler * d.azimuth), (best / d.azimuth) % d.doppler, best % d.azimuth};
}

}  // namespace radsim
