#include "radsim/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

#include "radsim/errors.hpp"

namespace radsim {

namespace {

// FFTW's planner is not thread-safe; fftw_execute_dft on a cached plan is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Dims& dims, int rank, FftSign sign, fftw_complex* buf) {
    const Key key{dims.range, dims.doppler, dims.azimuth, rank, static_cast<int>(sign)};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int fftw_sign = sign == FftSign::Negative ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rank == 1
                         ? fftw_plan_dft_1d(int(dims.range), buf, buf, fftw_sign, flags)
                         : fftw_plan_dft_3d(int(dims.range), int(dims.doppler), int(dims.azimuth),
                                            buf, buf, fftw_sign, flags);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [_, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, int, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

void run(std::span<Complex> data, const Dims& dims, int rank, FftSign sign, bool unitary) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = PlanCache::instance().get(dims, rank, sign, buf);
  fftw_execute_dft(plan, buf, buf);
  if (unitary) {
    const double scale = 1.0 / std::sqrt(double(data.size()));
    for (auto& c : data) c *= scale;
  }
}

}  // namespace

void dft_3d(std::span<Complex> data, const Dims& dims, FftSign sign, bool unitary) {
  if (data.size() != dims.count()) throw ValidationError("dims", "buffer size does not match dims");
  run(data, dims, 3, sign, unitary);
}

void dft_1d(std::span<Complex> data, FftSign sign, bool unitary) {
  run(data, Dims{data.size(), 1, 1}, 1, sign, unitary);
}

}  // namespace radsim
