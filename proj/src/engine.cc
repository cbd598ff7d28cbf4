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

#include "frgn/engine.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

namespace frgn {
namespace {

constexpr float kClipKnee = 0.98f;
constexpr float kClipMax = 32767.0f / 32768.0f;

int PeriodIndex(float period) {
  return static_cast<int>(std::lround(
      std::clamp<float>(period, kPitchMin, kPitchMax)));
}

}  // namespace

Vocoder::Vocoder(const Model& model)
    : config_(model.config),
      precision_(model.precision),
      cond_(CondNet::FromModel(model)),
      sub_(SubframeNet::FromModel(model)) {
  if (config_.embedding_kind == EmbeddingKind::kLearnedTable) {
    embed_table_ = model.tensor("embed.table").ToFloat();
  }
}

PitchEmbedding Vocoder::Embed(float period) const {
  if (config_.embedding_kind == EmbeddingKind::kSinusoidal) {
    return SinusoidalPitchEmbedding(period);
  }
  if (!(period >= kPitchMin && period <= kPitchMax)) {
    Warn("pitch period " + std::to_string(period) + " clamped");
  }
  const int row = PeriodIndex(std::isnan(period) ? kDefaultPitch : period) -
                  kPitchMin;
  PitchEmbedding e{};
  std::copy_n(embed_table_.begin() + static_cast<size_t>(row) * kEmbedDim,
              kEmbedDim, e.begin());
  return e;
}

float SoftClip(float x) {
  const float a = std::abs(x);
  if (a <= kClipKnee) return x;
  const float y = std::min(
      kClipKnee + (1.0f - kClipKnee) * std::tanh((a - kClipKnee) / (1.0f - kClipKnee)),
      kClipMax);
  return std::copysign(y, x);
}

SynthStream::SynthStream(std::shared_ptr<const Vocoder> vocoder)
    : vocoder_(std::move(vocoder)) {
  if (!vocoder_) throw InvalidArgumentError("stream needs a model");
  Reset();
}

void SynthStream::Reset() {
  cond_state_.Reset(vocoder_->cond().hidden());
  synth_state_.Reset();
  frames_done_ = 0;
  poisoned_ = false;
}

FrameSamples SynthStream::SynthesizeFrame(const FeatureFrame& features) {
  if (poisoned_) {
    throw NumericError("stream is unusable after a numeric failure; reset it");
  }
  for (float v : features.ToArray()) {
    if (!std::isfinite(v)) throw NumericError("non-finite feature value");
  }
  FeatureFrame f = features;
  f.voicing = std::clamp(f.voicing, 0.0f, 1.0f);
  const PitchEmbedding embedding = vocoder_->Embed(f.pitch_period);
  f.pitch_period = std::clamp<float>(f.pitch_period, kPitchMin, kPitchMax);

  const Vocoder& v = *vocoder_;
  const int sub_dim = v.cond().sub_dim();
  std::vector<float> latents(static_cast<size_t>(kNbSubframes) * sub_dim);
  std::array<SubframeConditioning, kNbSubframes> conds;
  FrameSamples out{};
  try {
    CondForward(v.cond(), cond_state_, f, embedding, latents);
    for (int s = 0; s < kNbSubframes; ++s) {
      conds[s] = MakeConditioning(
          v.sub(), std::span<const float>(latents).subspan(
                       static_cast<size_t>(s) * sub_dim, sub_dim));
    }
    out = SynthFrame(v.sub(), synth_state_, conds, PeriodIndex(f.pitch_period));
  } catch (const NumericError&) {
    poisoned_ = true;
    throw;
  }
  for (float& x : out) x = SoftClip(x);
  ++frames_done_;
  return out;
}

std::vector<float> SynthStream::Synthesize(std::span<const FeatureFrame> frames) {
  std::vector<float> out;
  out.reserve(frames.size() * kFrameSize);
  for (const FeatureFrame& f : frames) {
    const FrameSamples s = SynthesizeFrame(f);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<float> Synthesize(std::shared_ptr<const Vocoder> vocoder,
                              std::span<const FeatureFrame> frames) {
  SynthStream stream(std::move(vocoder));
  return stream.Synthesize(frames);
}

Signal CopySynthesis(std::shared_ptr<const Vocoder> vocoder,
                     const Signal& input) {
  if (input.sample_rate != kSampleRate) {
    throw InvalidArgumentError("copy-synthesis needs 16 kHz input");
  }
  const std::vector<FeatureFrame> frames = Analyze(input.samples);
  Signal out;
  out.samples = Synthesize(std::move(vocoder), frames);
  return out;
}

std::vector<FeatureFrame> PseudoFeatures(int frames, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> noise(0.0f, 1.0f);
  std::uniform_real_distribution<float> uniform(0.0f, 1.0f);
  std::vector<FeatureFrame> out(std::max(frames, 0));
  std::array<float, kNbBands> envelope{};
  // Typical speech cepstrum: strong c0, decaying higher-order terms.
  for (int k = 0; k < kNbBands; ++k) envelope[k] = (k == 0 ? 8.0f : 2.0f / (1 + k));
  float log_period = std::log2(120.0f);
  bool voiced = true;
  int run = 0;
  for (FeatureFrame& f : out) {
    if (run-- <= 0) {
      voiced = uniform(rng) < 0.7f;
      run = 5 + static_cast<int>(uniform(rng) * 30);
    }
    for (int k = 0; k < kNbBands; ++k) {
      const float target = (k == 0 ? 8.0f : 2.0f / (1 + k));
      envelope[k] += 0.2f * (target - envelope[k]) + 0.3f * noise(rng) / (1 + k);
      f.bfcc[k] = envelope[k];
    }
    log_period = std::clamp(log_period + 0.02f * noise(rng),
                            std::log2(static_cast<float>(kPitchMin)),
                            std::log2(static_cast<float>(kPitchMax)));
    f.pitch_period = std::clamp(std::exp2(log_period), static_cast<float>(kPitchMin),
                                static_cast<float>(kPitchMax));
    f.voicing = voiced ? 0.8f + 0.2f * uniform(rng) : 0.2f * uniform(rng);
  }
  return out;
}

BenchResult Bench(std::shared_ptr<const Vocoder> vocoder, double seconds,
                  uint64_t seed) {
  if (!(seconds > 0.0)) throw InvalidArgumentError("bench duration must be positive");
  const int frames = std::max(
      1, static_cast<int>(std::lround(seconds * kSampleRate / kFrameSize)));
  const std::vector<FeatureFrame> features = PseudoFeatures(frames, seed);
  const FlopCount flops = CountFlops(vocoder->config());
  SynthStream stream(std::move(vocoder));

  const auto start = std::chrono::steady_clock::now();
  for (const FeatureFrame& f : features) stream.SynthesizeFrame(f);
  const auto stop = std::chrono::steady_clock::now();

  BenchResult r;
  r.audio_seconds = static_cast<double>(frames) * kFrameSize / kSampleRate;
  r.compute_seconds = std::chrono::duration<double>(stop - start).count();
  r.rtf = r.compute_seconds / r.audio_seconds;
  r.samples_per_sec = r.rtf > 0.0 ? kSampleRate / r.rtf : 0.0;
  r.flops_nominal = flops.total();
  return r;
}

}  // namespace frgn
