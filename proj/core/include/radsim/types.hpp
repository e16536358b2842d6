#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace radsim {

using Complex = std::complex<double>;

/// Extents of a range x Doppler x azimuth grid.
struct Dims {
  std::size_t range = 0;
  std::size_t doppler = 0;
  std::size_t azimuth = 0;

  constexpr std::size_t count() const noexcept { return range * doppler * azimuth; }
  constexpr std::size_t operator[](std::size_t axis) const noexcept {
    return axis == 0 ? range : axis == 1 ? doppler : azimuth;
  }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

/// Integer cell coordinate (range, doppler, azimuth).
struct CellIndex {
  std::size_t range = 0;
  std::size_t doppler = 0;
  std::size_t azimuth = 0;

  constexpr std::size_t operator[](std::size_t axis) const noexcept {
    return axis == 0 ? range : axis == 1 ? doppler : azimuth;
  }
  friend constexpr bool operator==(const CellIndex&, const CellIndex&) = default;
};

}  // namespace radsim
