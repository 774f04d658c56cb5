#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "bitspectra/errors.hpp"
#include "bitspectra/metrics.hpp"

namespace bitspectra {
namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const noexcept {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using Plan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

RealBuffer alloc_real(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  if (!p) throw std::bad_alloc();
  return RealBuffer(p);
}

ComplexBuffer alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return ComplexBuffer(p);
}

void check_fft_size(const BitString& b, const KernelLimits& limits, const char* what) {
  if (b.size() < 2) throw ArgumentError(std::string(what) + ": needs at least 2 bits");
  if (b.size() > limits.fft_cap) {
    throw SizeLimitError(std::string(what) + " is capped at " + std::to_string(limits.fft_cap) +
                         " bits, input has " + std::to_string(b.size()));
  }
}

// Forward real transform of s_i = 1 - 2 b[i]. Returns the M/2 + 1 non-redundant bins.
ComplexBuffer signed_spectrum(const BitString& b) {
  const std::size_t m = b.size();
  const std::size_t bins = m / 2 + 1;
  auto signal = alloc_real(m);
  auto spectrum = alloc_complex(bins);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(m), signal.get(), spectrum.get(),
                                    FFTW_ESTIMATE));
  }
  if (!plan) throw EnvironmentError("FFTW could not create a forward plan");
  for (std::size_t i = 0; i < m; ++i) signal[i] = b[i] ? -1.0 : 1.0;
  fftw_execute(plan.get());
  return spectrum;
}

}  // namespace

LagProfile lag_profile_fft(const BitString& b, const KernelLimits& limits,
                           FftDiagnostics* diagnostics) {
  check_fft_size(b, limits, "fft kernel");
  const std::size_t m = b.size();
  const std::size_t bins = m / 2 + 1;
  auto spectrum = signed_spectrum(b);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = spectrum[k][0];
    const double im = spectrum[k][1];
    spectrum[k][0] = re * re + im * im;
    spectrum[k][1] = 0.0;
  }

  auto autocorr = alloc_real(m);
  Plan inverse;
  {
    std::lock_guard lock(planner_mutex());
    inverse.reset(fftw_plan_dft_c2r_1d(static_cast<int>(m), spectrum.get(), autocorr.get(),
                                       FFTW_ESTIMATE));
  }
  if (!inverse) throw EnvironmentError("FFTW could not create an inverse plan");
  fftw_execute(inverse.get());

  const double scale = 1.0 / static_cast<double>(m);
  std::vector<std::int64_t> values(m);
  double worst = 0.0;
  std::size_t worst_lag = 0;
  for (std::size_t n = 0; n < m; ++n) {
    const double raw = autocorr[n] * scale;
    const double rounded = std::nearbyint(raw);
    const double err = std::abs(raw - rounded);
    if (err > worst) {
      worst = err;
      worst_lag = n;
    }
    values[n] = static_cast<std::int64_t>(rounded);
  }
  if (diagnostics) diagnostics->max_rounding_error = worst;
  if (worst > kFftRoundingTolerance) {
    throw PrecisionError("fft kernel: raw value at lag " + std::to_string(worst_lag) +
                         " is " + std::to_string(worst) + " from the nearest integer");
  }
  return LagProfile(std::move(values));
}

double df_spectral(const BitString& b, const KernelLimits& limits) {
  check_fft_size(b, limits, "df_spectral");
  const std::size_t m = b.size();
  const std::size_t bins = m / 2 + 1;
  const auto spectrum = signed_spectrum(b);
  // Bins 1 .. ceil(M/2) - 1 stand for themselves and their conjugate mirror.
  long double fourth = 0.0L;
  for (std::size_t k = 0; k < bins; ++k) {
    const long double re = spectrum[k][0];
    const long double im = spectrum[k][1];
    const long double p = re * re + im * im;
    const bool self_mirrored = k == 0 || (m % 2 == 0 && k == m / 2);
    fourth += (self_mirrored ? 1.0L : 2.0L) * p * p;
  }
  const long double md = static_cast<long double>(m);
  const long double value = fourth / (md * md * md) - 1.0L;
  if (value < -1e-9L) {
    throw PrecisionError("df_spectral: negative result " + std::to_string(static_cast<double>(value)));
  }
  return value < 0.0L ? 0.0 : static_cast<double>(value);
}

}  // namespace bitspectra
