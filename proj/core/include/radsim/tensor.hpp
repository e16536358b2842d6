#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "radsim/types.hpp"

namespace radsim {

enum class TensorKind : std::uint8_t { RawSignal = 0, Filtered = 1 };

/// Dense complex array over (range, doppler, azimuth), row-major with azimuth fastest.
class RadarTensor {
 public:
  RadarTensor() = default;
  RadarTensor(Dims dims, TensorKind kind);
  RadarTensor(Dims dims, TensorKind kind, std::vector<Complex> cells);

  const Dims& dims() const noexcept { return dims_; }
  TensorKind kind() const noexcept { return kind_; }
  void set_kind(TensorKind kind) noexcept { kind_ = kind; }
  std::size_t size() const noexcept { return cells_.size(); }

  std::size_t index(std::size_t r, std::size_t d, std::size_t a) const noexcept {
    return (r * dims_.doppler + d) * dims_.azimuth + a;
  }
  Complex& operator()(std::size_t r, std::size_t d, std::size_t a) noexcept {
    return cells_[index(r, d, a)];
  }
  const Complex& operator()(std::size_t r, std::size_t d, std::size_t a) const noexcept {
    return cells_[index(r, d, a)];
  }
  Complex& at(const CellIndex& c) noexcept { return (*this)(c.range, c.doppler, c.azimuth); }
  const Complex& at(const CellIndex& c) const noexcept {
    return (*this)(c.range, c.doppler, c.azimuth);
  }

  std::span<Complex> cells() noexcept { return cells_; }
  std::span<const Complex> cells() const noexcept { return cells_; }

  /// Sum of |cell|^2.
  double energy() const noexcept;
  bool all_finite() const noexcept;

  RadarTensor& operator+=(const RadarTensor& other);
  RadarTensor& operator*=(Complex scale) noexcept;

  friend bool operator==(const RadarTensor&, const RadarTensor&) = default;

 private:
  Dims dims_{};
  TensorKind kind_ = TensorKind::Filtered;
  std::vector<Complex> cells_;
};

/// ||a - b||_F / ||b||_F; falls back to the absolute distance when b is zero.
double relative_frobenius_distance(const RadarTensor& a, const RadarTensor& b);

/// max over cells of |a - b|.
double max_abs_deviation(const RadarTensor& a, const RadarTensor& b);

/// Cell of largest magnitude (lowest index on ties).
CellIndex argmax_magnitude(const RadarTensor& t);

}  // namespace radsim
