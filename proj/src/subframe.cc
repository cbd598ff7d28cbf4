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

#include "frgn/subframe.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace frgn {
namespace {

void CheckFinite(std::span<const float> v, const char* where) {
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string("non-finite value in ") + where);
    }
  }
}

}  // namespace

SubframeNet SubframeNet::FromModel(const Model& model) {
  model.Validate();
  SubframeNet net;
  net.gain.weights = ToMatrix(model.tensor("sub.gain.weight"));
  net.gain.bias = model.tensor("sub.gain.bias").ToFloat();
  net.gain.activation = Activation::kExp;
  net.gate.weights = ToMatrix(model.tensor("sub.gate.weight"));
  net.gate.bias = model.tensor("sub.gate.bias").ToFloat();
  net.gate.activation = Activation::kSigmoid;
  for (int l = 0; l < model.config.sub_layers; ++l) {
    const std::string p = "sub.layer" + std::to_string(l);
    DenseLayer layer;
    layer.weights = ToMatrix(model.tensor(p + ".weight"));
    layer.bias = model.tensor(p + ".bias").ToFloat();
    layer.activation = Activation::kTanh;
    net.layers.push_back(std::move(layer));
    net.glus.push_back(GluUnit{ToMatrix(model.tensor(p + ".glu"))});
  }
  net.out.weights = ToMatrix(model.tensor("sub.out.weight"));
  net.out.bias = model.tensor("sub.out.bias").ToFloat();
  net.out.activation = Activation::kTanh;
  return net;
}

void SynthState::Reset() { *this = SynthState{}; }

float ComputeGain(const SubframeNet& net, std::span<const float> latent) {
  float g = 0.0f;
  Dense(net.gain, latent, {&g, 1});
  return g;
}

SubframeSamples ComputePitchGate(const SubframeNet& net,
                                 std::span<const float> latent) {
  SubframeSamples gate{};
  Dense(net.gate, latent, gate);
  return gate;
}

SubframeConditioning MakeConditioning(const SubframeNet& net,
                                      std::span<const float> latent) {
  SubframeConditioning sc;
  sc.latent.assign(latent.begin(), latent.end());
  sc.gain = ComputeGain(net, latent);
  sc.pitch_gate = ComputePitchGate(net, latent);
  return sc;
}

SubframeSamples PitchPredict(const SynthState& state, int period, float gain) {
  const int lookback = PitchLookback(std::clamp(period, kPitchMin, kPitchMax));
  SubframeSamples p{};
  const float inv = 1.0f / gain;
  for (int n = 0; n < kSubframeSize; ++n) {
    p[n] = state.history[kHistorySize + n - lookback] * inv;
  }
  return p;
}

SubframeSamples SubframeForward(const SubframeNet& net, SynthState& state,
                                const SubframeConditioning& cond, int period) {
  const float g = cond.gain;
  if (!(g > 0.0f) || !std::isfinite(g)) {
    throw NumericError("subframe gain must be positive and finite, got " +
                       std::to_string(g));
  }
  if (cond.latent.size() != static_cast<size_t>(net.latent_dim())) {
    throw InvalidArgumentError("conditioning latent has " +
                               std::to_string(cond.latent.size()) +
                               " values, expected " +
                               std::to_string(net.latent_dim()));
  }
  constexpr int kFeedback = 2 * kSubframeSize;
  std::array<float, kFeedback> feedback;
  const SubframeSamples pred = PitchPredict(state, period, g);
  const float inv = 1.0f / g;
  for (int n = 0; n < kSubframeSize; ++n) {
    feedback[n] = state.prev_subframe[n] * inv;
    feedback[kSubframeSize + n] = cond.pitch_gate[n] * pred[n];
  }

  std::vector<float> input(cond.latent);
  input.insert(input.end(), feedback.begin(), feedback.end());
  std::vector<float> hidden;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    hidden.resize(net.layers[l].out());
    Dense(net.layers[l], input, hidden);
    Glu(net.glus[l], hidden, hidden);
    input.assign(hidden.begin(), hidden.end());
    input.insert(input.end(), feedback.begin(), feedback.end());
  }
  SubframeSamples out{};
  Dense(net.out, input, out);
  for (float& v : out) v *= g;
  CheckFinite(out, "subframe output");

  std::copy(state.history.begin() + kSubframeSize, state.history.end(),
            state.history.begin());
  std::copy(out.begin(), out.end(), state.history.end() - kSubframeSize);
  state.prev_subframe = out;
  state.prev_gain = g;
  return out;
}

FrameSamples SynthFrame(const SubframeNet& net, SynthState& state,
                        std::span<const SubframeConditioning> conds,
                        int period) {
  if (conds.size() != static_cast<size_t>(kNbSubframes)) {
    throw InvalidArgumentError("a frame needs exactly 4 subframe conditionings");
  }
  FrameSamples frame{};
  for (int s = 0; s < kNbSubframes; ++s) {
    const SubframeSamples sub = SubframeForward(net, state, conds[s], period);
    std::copy(sub.begin(), sub.end(), frame.begin() + s * kSubframeSize);
  }
  DeemphasisInPlace(frame, kEmphasisCoef, state.deemph);
  return frame;
}

}  // namespace frgn
