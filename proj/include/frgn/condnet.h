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

#ifndef FRGN_CONDNET_H_
#define FRGN_CONDNET_H_

#include <array>
#include <span>
#include <vector>

#include "frgn/features.h"
#include "frgn/model.h"
#include "frgn/nn.h"

namespace frgn {

// Frame conditioning network: fully-connected layer, causal 3-tap
// convolution, and 4x transposed convolution to the subframe rate. Every
// stage is tanh followed by a GLU.
struct CondNet {
  DenseLayer fc;
  GluUnit fc_glu;
  Conv3Layer conv;
  UpConv4Layer up;

  static CondNet FromModel(const Model& model);

  int hidden() const { return fc.out(); }
  int sub_dim() const { return up.out(); }
};

// The two previous outputs of the fully-connected stage, zero at stream
// start.
struct CondState {
  std::vector<float> prev1;
  std::vector<float> prev2;

  void Reset(int hidden);
};

using CondInput = std::array<float, kCondInputDim>;

// 18 cepstral coefficients, log-normalized period, voicing, then the pitch
// embedding.
CondInput ConditioningInput(const FeatureFrame& features,
                            const PitchEmbedding& embedding);

// Writes four conditioning vectors of net.sub_dim() values each, subframe s
// at offset s * sub_dim, and advances the state by one frame.
void CondForward(const CondNet& net, CondState& state,
                 std::span<const float, kCondInputDim> input,
                 std::span<float> out);
void CondForward(const CondNet& net, CondState& state,
                 const FeatureFrame& features, const PitchEmbedding& embedding,
                 std::span<float> out);

}  // namespace frgn

#endif  // FRGN_CONDNET_H_
