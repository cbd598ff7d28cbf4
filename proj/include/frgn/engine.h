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

#ifndef FRGN_ENGINE_H_
#define FRGN_ENGINE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "frgn/condnet.h"
#include "frgn/features.h"
#include "frgn/model.h"
#include "frgn/subframe.h"
#include "frgn/wav.h"

namespace frgn {

// A model compiled into kernel-ready layers. Immutable; share one instance
// between any number of streams and threads.
class Vocoder {
 public:
  explicit Vocoder(const Model& model);

  const ModelConfig& config() const { return config_; }
  Precision precision() const { return precision_; }
  const CondNet& cond() const { return cond_; }
  const SubframeNet& sub() const { return sub_; }

  // Sinusoidal or learned, as declared by the model.
  PitchEmbedding Embed(float period) const;

 private:
  ModelConfig config_;
  Precision precision_;
  CondNet cond_;
  SubframeNet sub_;
  std::vector<float> embed_table_;
};

// Output limiter: identity up to |x| = 0.98, tanh-shaped knee above, never
// reaching full scale.
float SoftClip(float x);

// One synthesis stream. Not thread-safe; use one stream per thread.
class SynthStream {
 public:
  explicit SynthStream(std::shared_ptr<const Vocoder> vocoder);

  // Returns the stream to the state it had right after construction.
  void Reset();

  // 160 output samples for one feature frame. No lookahead. After a numeric
  // failure the stream is poisoned and throws until Reset().
  FrameSamples SynthesizeFrame(const FeatureFrame& features);
  std::vector<float> Synthesize(std::span<const FeatureFrame> frames);

  int64_t frames_done() const { return frames_done_; }
  bool poisoned() const { return poisoned_; }
  const Vocoder& vocoder() const { return *vocoder_; }

 private:
  std::shared_ptr<const Vocoder> vocoder_;
  CondState cond_state_;
  SynthState synth_state_;
  int64_t frames_done_ = 0;
  bool poisoned_ = false;
};

// Synthesizes `frames` on a fresh stream.
std::vector<float> Synthesize(std::shared_ptr<const Vocoder> vocoder,
                              std::span<const FeatureFrame> frames);

// Analyze then resynthesize; output has 160 samples per analyzed frame.
Signal CopySynthesis(std::shared_ptr<const Vocoder> vocoder,
                     const Signal& input);

// Deterministic, speech-like feature trajectories (smooth spectral envelope,
// gliding pitch, voiced/unvoiced runs) for benchmarks and tests.
std::vector<FeatureFrame> PseudoFeatures(int frames, uint64_t seed);

struct BenchResult {
  double audio_seconds = 0.0;
  double compute_seconds = 0.0;
  double rtf = 0.0;  // compute time / audio time
  double samples_per_sec = 0.0;
  double flops_nominal = 0.0;  // per second of audio, from CountFlops
};

BenchResult Bench(std::shared_ptr<const Vocoder> vocoder, double seconds,
                  uint64_t seed = 1);

}  // namespace frgn

#endif  // FRGN_ENGINE_H_
