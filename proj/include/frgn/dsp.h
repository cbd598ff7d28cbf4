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

#ifndef FRGN_DSP_H_
#define FRGN_DSP_H_

#include <complex>
#include <span>
#include <vector>

namespace frgn {

// State of a first-order emphasis filter. For pre-emphasis it holds the
// previous input sample, for de-emphasis the previous output sample. Kept in
// double so that long streams do not drift.
struct EmphasisState {
  double mem = 0.0;
};

// y(n) = x(n) - alpha * x(n-1). Processing a signal in chunks with a carried
// state gives the same result as processing it in one call.
std::vector<float> Preemphasis(std::span<const float> x, double alpha,
                               EmphasisState& state);

// y(n) = x(n) + alpha * y(n-1), the inverse of Preemphasis.
std::vector<float> Deemphasis(std::span<const float> x, double alpha,
                              EmphasisState& state);

// In-place variants used on the synthesis path.
void PreemphasisInPlace(std::span<float> x, double alpha,
                        EmphasisState& state);
void DeemphasisInPlace(std::span<float> x, double alpha, EmphasisState& state);

// Magnitude spectrogram, frame-major: mag[frame * bins + bin].
struct Spectrogram {
  int window_size = 0;
  int hop = 0;
  int frames = 0;
  int bins = 0;
  std::vector<float> mag;

  float at(int frame, int bin) const { return mag[frame * bins + bin]; }
};

// Window sizes accepted by StftMagnitude.
bool IsSupportedStftSize(int window_size);

// Periodic Hann window of length n.
std::vector<double> HannWindow(int n);

// One-sided STFT magnitudes with a periodic Hann window and a hop of
// window_size / 4 (75% overlap). Frames start at multiples of the hop and
// only frames that fit entirely inside the signal are produced.
Spectrogram StftMagnitude(std::span<const float> x, int window_size);

// Real-input DFT of size in.size(), returning in.size()/2 + 1 bins. Backed by
// FFTW; plans are cached per size and the call is thread-safe.
std::vector<std::complex<double>> RealDft(std::span<const double> in);

}  // namespace frgn

#endif  // FRGN_DSP_H_
