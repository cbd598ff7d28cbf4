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

#include "frgn/condnet.h"

#include <algorithm>
#include <string>

namespace frgn {

CondNet CondNet::FromModel(const Model& model) {
  model.Validate();
  CondNet net;
  net.fc.weights = ToMatrix(model.tensor("cond.fc.weight"));
  net.fc.bias = model.tensor("cond.fc.bias").ToFloat();
  net.fc.activation = Activation::kTanh;
  net.fc_glu.weights = ToMatrix(model.tensor("cond.fc.glu"));
  net.conv.weights = ToMatrix(model.tensor("cond.conv.weight"));
  net.conv.bias = model.tensor("cond.conv.bias").ToFloat();
  net.conv.glu.weights = ToMatrix(model.tensor("cond.conv.glu"));
  net.up.weights = ToMatrix(model.tensor("cond.up.weight"));
  net.up.bias = model.tensor("cond.up.bias").ToFloat();
  net.up.glu.weights = ToMatrix(model.tensor("cond.up.glu"));
  return net;
}

void CondState::Reset(int hidden) {
  prev1.assign(hidden, 0.0f);
  prev2.assign(hidden, 0.0f);
}

CondInput ConditioningInput(const FeatureFrame& features,
                            const PitchEmbedding& embedding) {
  CondInput in{};
  std::copy(features.bfcc.begin(), features.bfcc.end(), in.begin());
  in[kNbBands] = NormalizePeriod(features.pitch_period);
  in[kNbBands + 1] = features.voicing;
  std::copy(embedding.begin(), embedding.end(), in.begin() + kFeatureDim);
  return in;
}

void CondForward(const CondNet& net, CondState& state,
                 std::span<const float, kCondInputDim> input,
                 std::span<float> out) {
  const int hidden = net.hidden();
  if (out.size() != static_cast<size_t>(UpConv4Layer::kFactor * net.sub_dim())) {
    throw InvalidArgumentError("conditioning output buffer has " +
                               std::to_string(out.size()) + " values");
  }
  if (state.prev1.size() != static_cast<size_t>(hidden)) state.Reset(hidden);

  std::vector<float> fc_out(hidden);
  Dense(net.fc, input, fc_out);
  Glu(net.fc_glu, fc_out, fc_out);

  std::vector<float> conv_out(hidden);
  Conv3(net.conv, state.prev2, state.prev1, fc_out, conv_out);
  UpConv4(net.up, conv_out, out);

  state.prev2 = std::move(state.prev1);
  state.prev1 = std::move(fc_out);
}

void CondForward(const CondNet& net, CondState& state,
                 const FeatureFrame& features, const PitchEmbedding& embedding,
                 std::span<float> out) {
  const CondInput in = ConditioningInput(features, embedding);
  CondForward(net, state, in, out);
}

}  // namespace frgn
