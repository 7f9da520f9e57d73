#include "dimrate/detail/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace dimrate::detail {

namespace {

// FFTW's planner is not re-entrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct ComplexFft::Impl {
  fftw_plan plan = nullptr;
  fftw_complex* scratch = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan != nullptr) fftw_destroy_plan(plan);
    if (scratch != nullptr) fftw_free(scratch);
  }
};

ComplexFft::ComplexFft(std::size_t n, bool inverse) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw std::invalid_argument("ComplexFft: length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->scratch = fftw_alloc_complex(n);
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->scratch, impl_->scratch,
                                 inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  if (impl_->plan == nullptr) throw std::runtime_error("ComplexFft: planning failed");
}

ComplexFft::~ComplexFft() = default;
ComplexFft::ComplexFft(ComplexFft&&) noexcept = default;
ComplexFft& ComplexFft::operator=(ComplexFft&&) noexcept = default;

void ComplexFft::transform(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("ComplexFft: length mismatch");
  // Copy through the aligned scratch buffer the plan was created for.
  std::memcpy(impl_->scratch, data.data(), n_ * sizeof(fftw_complex));
  fftw_execute_dft(impl_->plan, impl_->scratch, impl_->scratch);
  std::memcpy(static_cast<void*>(data.data()), impl_->scratch, n_ * sizeof(fftw_complex));
}

struct RealFft::Impl {
  fftw_plan plan = nullptr;
  double* in = nullptr;
  fftw_complex* out = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan != nullptr) fftw_destroy_plan(plan);
    if (in != nullptr) fftw_free(in);
    if (out != nullptr) fftw_free(out);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw std::invalid_argument("RealFft: length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->in = fftw_alloc_real(n);
  impl_->out = fftw_alloc_complex(n / 2 + 1);
  impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out, FFTW_ESTIMATE);
  if (impl_->plan == nullptr) throw std::runtime_error("RealFft: planning failed");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::transform(std::span<const double> input, std::span<std::complex<double>> output) const {
  if (input.size() != n_ || output.size() != n_ / 2 + 1) {
    throw std::invalid_argument("RealFft: length mismatch");
  }
  std::memcpy(impl_->in, input.data(), n_ * sizeof(double));
  fftw_execute_dft_r2c(impl_->plan, impl_->in, impl_->out);
  std::memcpy(static_cast<void*>(output.data()), impl_->out, (n_ / 2 + 1) * sizeof(fftw_complex));
}

}  // namespace dimrate::detail
