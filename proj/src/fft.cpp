#include "windeval/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

#include "windeval/error.hpp"

namespace windeval {

namespace {

// The FFTW planner is not thread-safe; execution on a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffer {
  explicit Buffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
    if (!ptr) fail("fft-alloc");
  }
  ~Buffer() { fftw_free(ptr); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* ptr;
};

}  // namespace

void fft2d(std::vector<std::complex<double>>& data, std::size_t rows, std::size_t cols, bool inverse) {
  if (data.size() != rows * cols) fail("shape-mismatch", "fft buffer size");
  Buffer buf(data.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf.ptr, buf.ptr,
                            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) fail("fft-plan");
  std::copy(data.begin(), data.end(), reinterpret_cast<std::complex<double>*>(buf.ptr));
  fftw_execute(plan);
  std::copy_n(reinterpret_cast<const std::complex<double>*>(buf.ptr), data.size(), data.begin());
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace windeval
