// Copyright 2026 The frgn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frgn/dsp.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "frgn/common.h"

namespace frgn {
namespace {

void CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgumentError("emphasis coefficient must be in [0, 1), got " +
                               std::to_string(alpha));
  }
}

void CheckFinite(std::span<const float> x) {
  for (float v : x) {
    if (!std::isfinite(v)) {
      throw NumericError("non-finite sample in emphasis filter input");
    }
  }
}

// FFTW's planner is not thread-safe; execution with the new-array interface
// is. Plans are created once per size and never destroyed.
class PlanCache {
 public:
  fftw_plan Get(int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in, out,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<int, fftw_plan> plans_;
};

PlanCache& Plans() {
  static PlanCache* cache = new PlanCache();
  return *cache;
}

}  // namespace

void PreemphasisInPlace(std::span<float> x, double alpha,
                        EmphasisState& state) {
  CheckAlpha(alpha);
  CheckFinite(x);
  double mem = state.mem;
  for (float& v : x) {
    const double in = v;
    v = static_cast<float>(in - alpha * mem);
    mem = in;
  }
  state.mem = mem;
}

void DeemphasisInPlace(std::span<float> x, double alpha, EmphasisState& state) {
  CheckAlpha(alpha);
  CheckFinite(x);
  double mem = state.mem;
  for (float& v : x) {
    mem = v + alpha * mem;
    v = static_cast<float>(mem);
  }
  state.mem = mem;
}

std::vector<float> Preemphasis(std::span<const float> x, double alpha,
                               EmphasisState& state) {
  std::vector<float> y(x.begin(), x.end());
  PreemphasisInPlace(y, alpha, state);
  return y;
}

std::vector<float> Deemphasis(std::span<const float> x, double alpha,
                              EmphasisState& state) {
  std::vector<float> y(x.begin(), x.end());
  DeemphasisInPlace(y, alpha, state);
  return y;
}

bool IsSupportedStftSize(int window_size) {
  static constexpr int kSizes[] = {64,  80,  128, 160,  256,  320,
                                   512, 640, 1024, 1280, 2048, 2560};
  return std::find(std::begin(kSizes), std::end(kSizes), window_size) !=
         std::end(kSizes);
}

std::vector<double> HannWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

std::vector<std::complex<double>> RealDft(std::span<const double> in) {
  const int n = static_cast<int>(in.size());
  if (n <= 0) throw InvalidArgumentError("DFT of an empty buffer");
  std::vector<double> buf(in.begin(), in.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(Plans().Get(n), buf.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Spectrogram StftMagnitude(std::span<const float> x, int window_size) {
  if (!IsSupportedStftSize(window_size)) {
    throw InvalidArgumentError("unsupported STFT window size " +
                               std::to_string(window_size));
  }
  if (static_cast<int>(x.size()) < window_size) {
    throw InvalidArgumentError("signal of " + std::to_string(x.size()) +
                               " samples is shorter than STFT window " +
                               std::to_string(window_size));
  }
  Spectrogram spec;
  spec.window_size = window_size;
  spec.hop = window_size / 4;
  spec.bins = window_size / 2 + 1;
  spec.frames = 1 + (static_cast<int>(x.size()) - window_size) / spec.hop;
  spec.mag.resize(static_cast<size_t>(spec.frames) * spec.bins);

  const std::vector<double> window = HannWindow(window_size);
  std::vector<double> frame(window_size);
  for (int f = 0; f < spec.frames; ++f) {
    const float* src = x.data() + static_cast<size_t>(f) * spec.hop;
    for (int i = 0; i < window_size; ++i) frame[i] = window[i] * src[i];
    const auto bins = RealDft(frame);
    for (int k = 0; k < spec.bins; ++k) {
      spec.mag[static_cast<size_t>(f) * spec.bins + k] =
          static_cast<float>(std::abs(bins[k]));
    }
  }
  return spec;
}

}  // namespace frgn
