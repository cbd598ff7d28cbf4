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

#ifndef FRGN_SUBFRAME_H_
#define FRGN_SUBFRAME_H_

#include <array>
#include <span>
#include <vector>

#include "frgn/common.h"
#include "frgn/dsp.h"
#include "frgn/model.h"
#include "frgn/nn.h"

namespace frgn {

using SubframeSamples = std::array<float, kSubframeSize>;
using FrameSamples = std::array<float, kFrameSize>;

// Autoregressive subframe synthesis network. Every hidden layer sees the
// previous layer's output concatenated with the two feedback vectors
// (previous subframe and gated pitch prediction); so does the output layer.
struct SubframeNet {
  DenseLayer gain;  // one exp neuron
  DenseLayer gate;  // kSubframeSize sigmoid neurons
  std::vector<DenseLayer> layers;
  std::vector<GluUnit> glus;
  DenseLayer out;  // tanh, no GLU

  static SubframeNet FromModel(const Model& model);

  int latent_dim() const { return gain.in(); }
};

struct SubframeConditioning {
  std::vector<float> latent;
  float gain = 1.0f;
  SubframeSamples pitch_gate{};
};

// Per-stream synthesis state. `history` holds the most recent kHistorySize
// synthesized samples (after gain, before de-emphasis), oldest first.
struct SynthState {
  std::array<float, kHistorySize> history{};
  SubframeSamples prev_subframe{};
  float prev_gain = 1.0f;
  EmphasisState deemph;

  void Reset();
};

// exp(w . latent + b).
float ComputeGain(const SubframeNet& net, std::span<const float> latent);
// sigmoid(W latent + b), one gate per sample of the subframe.
SubframeSamples ComputePitchGate(const SubframeNet& net,
                                 std::span<const float> latent);
SubframeConditioning MakeConditioning(const SubframeNet& net,
                                      std::span<const float> latent);

// How far back the pitch predictor reads: one period, or two when a single
// period would reach into the subframe being synthesized.
constexpr int PitchLookback(int period) {
  return period >= kSubframeSize ? period : 2 * period;
}

// p(n) = history(n - PitchLookback(period)) / gain, n in [0, kSubframeSize).
// `period` is clamped to [kPitchMin, kPitchMax].
SubframeSamples PitchPredict(const SynthState& state, int period, float gain);

// Synthesizes one subframe (pre-emphasized domain, gain applied) and
// advances the state. Throws NumericError if a non-finite value appears.
SubframeSamples SubframeForward(const SubframeNet& net, SynthState& state,
                                const SubframeConditioning& cond, int period);

// Four subframes in order, then de-emphasis. `conds` must hold four entries.
FrameSamples SynthFrame(const SubframeNet& net, SynthState& state,
                        std::span<const SubframeConditioning> conds,
                        int period);

}  // namespace frgn

#endif  // FRGN_SUBFRAME_H_
