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

#ifndef FRGN_FEATURES_H_
#define FRGN_FEATURES_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "frgn/common.h"
#include "frgn/dsp.h"

namespace frgn {

// Acoustic features for one 10 ms frame.
struct FeatureFrame {
  std::array<float, kNbBands> bfcc{};
  float pitch_period = kDefaultPitch;  // samples, in [kPitchMin, kPitchMax]
  float voicing = 0.0f;                // in [0, 1]

  std::array<float, kFeatureDim> ToArray() const;
  static FeatureFrame FromArray(std::span<const float, kFeatureDim> values);
};

using PitchEmbedding = std::array<float, kEmbedDim>;

// Analysis window length for the cepstral coefficients (20 ms, centered on
// the 10 ms frame).
inline constexpr int kBfccWindow = 2 * kFrameSize;
// Lookback needed by the pitch tracker: two maximum periods plus slack.
inline constexpr int kPitchWindow = 720;
// Normalized autocorrelation is computed over this many trailing samples.
inline constexpr int kPitchCorrLen = 320;
inline constexpr float kBandEnergyFloor = 1e-10f;

// Band centers in Hz. Triangular bands overlap so that adjacent bands
// partition each bin; the first and last bands are half triangles.
inline constexpr std::array<int, kNbBands> kBandCentersHz = {
    0,    200,  400,  600,  800,  1000, 1200, 1400, 1600,
    2000, 2400, 2800, 3200, 4000, 4800, 5600, 6800, 8000};

// Cepstral coefficients of one pre-emphasized kBfccWindow-sample window:
// Hann window, power spectrum, triangular band energies floored at
// kBandEnergyFloor, log10, orthonormal DCT-II.
std::array<float, kNbBands> ComputeBfcc(std::span<const float> window);

// Orthonormal DCT-II of the log band energies.
std::array<float, kNbBands> BandEnergiesToCepstrum(
    std::span<const double, kNbBands> log_energies);

struct PitchEstimate {
  float period = kDefaultPitch;
  float voicing = 0.0f;
};

// Normalized-autocorrelation pitch tracker with octave-cost smoothing across
// frames. Keeps per-stream state; not thread-safe.
class PitchTracker {
 public:
  PitchTracker();

  // `window` holds the last kPitchWindow raw (not pre-emphasized) samples.
  PitchEstimate Estimate(std::span<const float> window);
  void Reset();

  // Normalized cross-correlation between the trailing kPitchCorrLen samples
  // and the same span delayed by each lag in [kPitchMin, kPitchMax].
  static std::vector<double> NormalizedCorrelation(
      std::span<const float> window);

 private:
  std::vector<double> path_score_;
  float last_period_ = kDefaultPitch;
};

// Maps a period to [0, 1] on a log scale: log2(T/32) / log2(10).
float NormalizePeriod(float period);

// Fixed sinusoidal embedding: {sin, cos}(2 pi k phi), k = 1..6, with
// phi = NormalizePeriod(period). Out-of-range periods are clamped with a
// warning.
PitchEmbedding SinusoidalPitchEmbedding(float period);

// Streaming feature extractor. Frame i covers samples [160 i, 160 i + 160);
// its cepstral window is centered on it, so it is emitted once 80 samples of
// lookahead are available. One analyzer per stream.
class Analyzer {
 public:
  Analyzer();

  // Appends samples; returns every frame that became complete.
  std::vector<FeatureFrame> Push(std::span<const float> samples);
  // Flushes the remaining frames, zero-padding past the end of the input.
  // Total frames emitted for an input of n samples are n / 160 when
  // n >= kBfccWindow and zero otherwise.
  std::vector<FeatureFrame> Finish();
  void Reset();

 private:
  FeatureFrame AnalyzeFrame(int64_t frame);
  // Sample at absolute position `pos`, zero outside [0, total_).
  void CopyRange(const std::vector<float>& src, int64_t begin, int64_t count,
                 float* dst) const;
  void Trim();

  std::vector<float> raw_;
  std::vector<float> emph_;
  int64_t base_ = 0;    // absolute index of raw_[0]
  int64_t total_ = 0;   // samples pushed so far
  int64_t next_frame_ = 0;
  EmphasisState emphasis_;
  PitchTracker pitch_;
};

// One-shot analysis; identical to pushing everything into an Analyzer and
// calling Finish().
std::vector<FeatureFrame> Analyze(std::span<const float> signal);

// ".ffe" feature files: little-endian float32, kFeatureDim values per frame,
// no header.
std::vector<uint8_t> EncodeFeatures(std::span<const FeatureFrame> frames);
std::vector<FeatureFrame> DecodeFeatures(std::span<const uint8_t> bytes);
void WriteFeatureFile(const std::filesystem::path& path,
                      std::span<const FeatureFrame> frames);
std::vector<FeatureFrame> ReadFeatureFile(const std::filesystem::path& path);

}  // namespace frgn

#endif  // FRGN_FEATURES_H_
