#include "bakerlab/dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace bakerlab::fft {

namespace {

struct PlanKey {
  int length;
  int stride;
  int count;
  int sign;
  bool aligned;
  auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int length, int stride, int count, int sign, bool aligned) {
    std::lock_guard lock(mutex_);
    const PlanKey key{length, stride, count, sign, aligned};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW_ESTIMATE never touches the buffer, so a scratch array is enough
    // to describe the in-place layout; execution uses the new-array API.
    // Aligned plans may use SIMD codelets and are only executed on buffers
    // with the same alignment as fftw_malloc.
    const auto size = static_cast<std::size_t>(length) * stride * count;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(size * sizeof(fftw_complex)));
    int n[] = {length};
    const unsigned flags = FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED);
    fftw_plan plan = fftw_plan_many_dft(1, n, count, buf, nullptr, stride, length, buf, nullptr,
                                        stride, length, sign, flags);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

int sign_of(Direction d) { return d == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

bool simd_aligned(std::complex<double>* data) {
  return fftw_alignment_of(reinterpret_cast<double*>(data)) == 0;
}

}  // namespace

void transform(std::span<std::complex<double>> data, Direction direction) {
  transform_strided(data.data(), static_cast<int>(data.size()), 1, direction);
}

void transform_strided(std::complex<double>* data, int length, int stride,
                       Direction direction) {
  if (length <= 1) return;
  fftw_plan plan = cache().get(length, stride, 1, sign_of(direction), simd_aligned(data));
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

void transform_batch(std::complex<double>* data, int length, int count, Direction direction) {
  if (length <= 1 || count <= 0) return;
  fftw_plan plan = cache().get(length, 1, count, sign_of(direction), simd_aligned(data));
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace bakerlab::fft
