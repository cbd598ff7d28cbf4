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

#include "frgn/features.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "frgn/wav.h"

namespace frgn {
namespace {

constexpr int kNbLags = kPitchMax - kPitchMin + 1;
constexpr int kBinHz = kSampleRate / kBfccWindow;  // 50 Hz per DFT bin

// Small preference for shorter lags, per octave above kPitchMin. Resolves the
// tie between a period and its multiples on strictly periodic input.
constexpr double kShortLagBias = 0.04;
// Cost of an octave jump between consecutive frames.
constexpr double kOctaveJumpCost = 0.15;
// Frames whose peak correlation is below this keep the previous period.
constexpr double kVoicedThreshold = 0.5;

// Silence detection for the pitch tracker, on mean energy per sample.
constexpr double kSilenceEnergy = 1e-12;

const std::array<double, kNbLags>& LagLog2() {
  static const std::array<double, kNbLags> table = [] {
    std::array<double, kNbLags> t{};
    for (int i = 0; i < kNbLags; ++i) t[i] = std::log2(kPitchMin + i);
    return t;
  }();
  return table;
}

}  // namespace

std::array<float, kFeatureDim> FeatureFrame::ToArray() const {
  std::array<float, kFeatureDim> out{};
  std::copy(bfcc.begin(), bfcc.end(), out.begin());
  out[kNbBands] = pitch_period;
  out[kNbBands + 1] = voicing;
  return out;
}

FeatureFrame FeatureFrame::FromArray(std::span<const float, kFeatureDim> v) {
  FeatureFrame f;
  std::copy(v.begin(), v.begin() + kNbBands, f.bfcc.begin());
  f.pitch_period = v[kNbBands];
  f.voicing = v[kNbBands + 1];
  return f;
}

std::array<float, kNbBands> BandEnergiesToCepstrum(
    std::span<const double, kNbBands> log_energies) {
  std::array<float, kNbBands> out{};
  for (int k = 0; k < kNbBands; ++k) {
    double sum = 0.0;
    for (int b = 0; b < kNbBands; ++b) {
      sum += log_energies[b] *
             std::cos(std::numbers::pi * k * (b + 0.5) / kNbBands);
    }
    const double norm = k == 0 ? std::sqrt(1.0 / kNbBands)
                               : std::sqrt(2.0 / kNbBands);
    out[k] = static_cast<float>(norm * sum);
  }
  return out;
}

std::array<float, kNbBands> ComputeBfcc(std::span<const float> window) {
  if (window.size() != static_cast<size_t>(kBfccWindow)) {
    throw InvalidArgumentError("cepstral analysis expects a " +
                               std::to_string(kBfccWindow) +
                               "-sample window");
  }
  static const std::vector<double> hann = HannWindow(kBfccWindow);
  std::vector<double> frame(kBfccWindow);
  for (int i = 0; i < kBfccWindow; ++i) frame[i] = hann[i] * window[i];
  const auto spectrum = RealDft(frame);

  std::array<double, kNbBands> energy{};
  for (int b = 0; b + 1 < kNbBands; ++b) {
    const int lo = kBandCentersHz[b] / kBinHz;
    const int hi = kBandCentersHz[b + 1] / kBinHz;
    for (int j = lo; j < hi; ++j) {
      const double frac = static_cast<double>(j - lo) / (hi - lo);
      const double p = std::norm(spectrum[j]);
      energy[b] += (1.0 - frac) * p;
      energy[b + 1] += frac * p;
    }
  }
  energy[kNbBands - 1] += std::norm(spectrum[kBandCentersHz.back() / kBinHz]);

  std::array<double, kNbBands> log_energy{};
  for (int b = 0; b < kNbBands; ++b) {
    const double e = energy[b] / kBfccWindow;
    log_energy[b] = std::log10(std::max(e, double{kBandEnergyFloor}));
  }
  return BandEnergiesToCepstrum(log_energy);
}

float NormalizePeriod(float period) {
  const double p = std::clamp<double>(period, kPitchMin, kPitchMax);
  return static_cast<float>(std::log2(p / kPitchMin) /
                            std::log2(static_cast<double>(kPitchMax) /
                                      kPitchMin));
}

PitchEmbedding SinusoidalPitchEmbedding(float period) {
  if (!(period >= kPitchMin && period <= kPitchMax)) {
    Warn("pitch period " + std::to_string(period) + " clamped to [" +
         std::to_string(kPitchMin) + ", " + std::to_string(kPitchMax) + "]");
  }
  const double phi = NormalizePeriod(std::isnan(period) ? kDefaultPitch
                                                        : period);
  PitchEmbedding e{};
  constexpr int kHalf = kEmbedDim / 2;
  for (int k = 1; k <= kHalf; ++k) {
    const double angle = 2.0 * std::numbers::pi * k * phi;
    e[k - 1] = static_cast<float>(std::sin(angle));
    e[kHalf + k - 1] = static_cast<float>(std::cos(angle));
  }
  return e;
}

PitchTracker::PitchTracker() { Reset(); }

void PitchTracker::Reset() {
  path_score_.assign(kNbLags, 0.0);
  last_period_ = kDefaultPitch;
}

std::vector<double> PitchTracker::NormalizedCorrelation(
    std::span<const float> window) {
  if (window.size() != static_cast<size_t>(kPitchWindow)) {
    throw InvalidArgumentError("pitch tracker expects a " +
                               std::to_string(kPitchWindow) +
                               "-sample window");
  }
  const float* cur = window.data() + kPitchWindow - kPitchCorrLen;
  double cur_energy = 0.0;
  for (int n = 0; n < kPitchCorrLen; ++n) cur_energy += double{cur[n]} * cur[n];

  std::vector<double> corr(kNbLags, 0.0);
  // Energy of the delayed span, updated incrementally as the lag grows.
  const float* lagged = cur - kPitchMin;
  double lag_energy = 0.0;
  for (int n = 0; n < kPitchCorrLen; ++n) {
    lag_energy += double{lagged[n]} * lagged[n];
  }
  for (int i = 0; i < kNbLags; ++i) {
    const float* d = cur - (kPitchMin + i);
    if (i > 0) {
      lag_energy += double{d[0]} * d[0] -
                    double{d[kPitchCorrLen]} * d[kPitchCorrLen];
      lag_energy = std::max(lag_energy, 0.0);
    }
    double xy = 0.0;
    for (int n = 0; n < kPitchCorrLen; ++n) xy += double{cur[n]} * d[n];
    const double denom = std::sqrt(cur_energy * lag_energy);
    corr[i] = denom > 0.0 ? xy / denom : 0.0;
  }
  return corr;
}

PitchEstimate PitchTracker::Estimate(std::span<const float> window) {
  const float* cur = window.data() + window.size() - kPitchCorrLen;
  double cur_energy = 0.0;
  for (int n = 0; n < kPitchCorrLen; ++n) cur_energy += double{cur[n]} * cur[n];
  if (cur_energy < kSilenceEnergy * kPitchCorrLen) {
    if (window.size() != static_cast<size_t>(kPitchWindow)) {
      NormalizedCorrelation(window);  // raises the size error
    }
    return {last_period_, 0.0f};
  }
  const std::vector<double> corr = NormalizedCorrelation(window);
  const auto& lag_log = LagLog2();

  double peak = 0.0;
  for (double r : corr) peak = std::max(peak, r);

  std::vector<double> next(kNbLags);
  for (int i = 0; i < kNbLags; ++i) {
    double best_prev = -1e300;
    for (int j = 0; j < kNbLags; ++j) {
      const double s =
          path_score_[j] - kOctaveJumpCost * std::abs(lag_log[i] - lag_log[j]);
      best_prev = std::max(best_prev, s);
    }
    next[i] = corr[i] - kShortLagBias * (lag_log[i] - lag_log[0]) + best_prev;
  }
  const auto best =
      std::distance(next.begin(), std::max_element(next.begin(), next.end()));
  const double top = next[best];
  for (double& v : next) v -= top;
  path_score_ = std::move(next);

  const float voicing = static_cast<float>(std::clamp(peak, 0.0, 1.0));
  if (voicing >= kVoicedThreshold) {
    last_period_ = static_cast<float>(kPitchMin + best);
  }
  return {last_period_, voicing};
}

Analyzer::Analyzer() = default;

void Analyzer::Reset() {
  raw_.clear();
  emph_.clear();
  base_ = 0;
  total_ = 0;
  next_frame_ = 0;
  emphasis_ = EmphasisState{};
  pitch_.Reset();
}

void Analyzer::CopyRange(const std::vector<float>& src, int64_t begin,
                         int64_t count, float* dst) const {
  for (int64_t i = 0; i < count; ++i) {
    const int64_t pos = begin + i;
    dst[i] = (pos >= 0 && pos < total_) ? src[pos - base_] : 0.0f;
  }
}

FeatureFrame Analyzer::AnalyzeFrame(int64_t frame) {
  const int64_t window_end = frame * kFrameSize + kFrameSize + kFrameSize / 2;
  std::array<float, kBfccWindow> cep_window;
  CopyRange(emph_, window_end - kBfccWindow, kBfccWindow, cep_window.data());
  std::array<float, kPitchWindow> pitch_window;
  CopyRange(raw_, window_end - kPitchWindow, kPitchWindow, pitch_window.data());

  FeatureFrame f;
  f.bfcc = ComputeBfcc(cep_window);
  const PitchEstimate pitch = pitch_.Estimate(pitch_window);
  f.pitch_period = pitch.period;
  f.voicing = pitch.voicing;
  return f;
}

void Analyzer::Trim() {
  const int64_t keep_from =
      next_frame_ * kFrameSize + kFrameSize + kFrameSize / 2 - kPitchWindow;
  const int64_t drop = std::min<int64_t>(keep_from - base_,
                                         static_cast<int64_t>(raw_.size()));
  if (drop < 4096) return;
  raw_.erase(raw_.begin(), raw_.begin() + drop);
  emph_.erase(emph_.begin(), emph_.begin() + drop);
  base_ += drop;
}

std::vector<FeatureFrame> Analyzer::Push(std::span<const float> samples) {
  for (float s : samples) {
    if (!std::isfinite(s)) throw NumericError("non-finite input sample");
  }
  raw_.insert(raw_.end(), samples.begin(), samples.end());
  std::vector<float> emph = Preemphasis(samples, kEmphasisCoef, emphasis_);
  emph_.insert(emph_.end(), emph.begin(), emph.end());
  total_ += static_cast<int64_t>(samples.size());

  std::vector<FeatureFrame> out;
  while (true) {
    const int64_t needed =
        std::max<int64_t>(kBfccWindow, next_frame_ * kFrameSize + kFrameSize +
                                           kFrameSize / 2);
    if (needed > total_) break;
    out.push_back(AnalyzeFrame(next_frame_++));
  }
  Trim();
  return out;
}

std::vector<FeatureFrame> Analyzer::Finish() {
  std::vector<FeatureFrame> out;
  if (total_ >= kBfccWindow) {
    const int64_t frames = total_ / kFrameSize;
    while (next_frame_ < frames) out.push_back(AnalyzeFrame(next_frame_++));
  }
  Reset();
  return out;
}

std::vector<FeatureFrame> Analyze(std::span<const float> signal) {
  Analyzer analyzer;
  std::vector<FeatureFrame> frames = analyzer.Push(signal);
  std::vector<FeatureFrame> tail = analyzer.Finish();
  frames.insert(frames.end(), tail.begin(), tail.end());
  return frames;
}

std::vector<uint8_t> EncodeFeatures(std::span<const FeatureFrame> frames) {
  std::vector<uint8_t> out;
  out.reserve(frames.size() * kFeatureDim * 4);
  for (const FeatureFrame& f : frames) {
    for (float v : f.ToArray()) {
      const auto bits = std::bit_cast<uint32_t>(v);
      for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(bits >> (8 * i)));
    }
  }
  return out;
}

std::vector<FeatureFrame> DecodeFeatures(std::span<const uint8_t> bytes) {
  constexpr size_t kFrameBytes = kFeatureDim * 4;
  if (bytes.size() % kFrameBytes != 0) {
    throw FormatError("feature file size " + std::to_string(bytes.size()) +
                      " is not a multiple of " + std::to_string(kFrameBytes));
  }
  std::vector<FeatureFrame> frames(bytes.size() / kFrameBytes);
  for (size_t f = 0; f < frames.size(); ++f) {
    std::array<float, kFeatureDim> values{};
    for (int i = 0; i < kFeatureDim; ++i) {
      const uint8_t* p = bytes.data() + f * kFrameBytes + 4 * i;
      const uint32_t bits = static_cast<uint32_t>(p[0]) |
                            (static_cast<uint32_t>(p[1]) << 8) |
                            (static_cast<uint32_t>(p[2]) << 16) |
                            (static_cast<uint32_t>(p[3]) << 24);
      values[i] = std::bit_cast<float>(bits);
      if (!std::isfinite(values[i])) {
        throw FormatError("non-finite value in feature frame " +
                          std::to_string(f));
      }
    }
    frames[f] = FeatureFrame::FromArray(values);
  }
  return frames;
}

void WriteFeatureFile(const std::filesystem::path& path,
                      std::span<const FeatureFrame> frames) {
  WriteFileBytes(path, EncodeFeatures(frames));
}

std::vector<FeatureFrame> ReadFeatureFile(const std::filesystem::path& path) {
  return DecodeFeatures(ReadFileBytes(path));
}

}  // namespace frgn
