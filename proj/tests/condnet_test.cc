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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.h"

namespace frgn {
namespace {

ModelConfig SmallConfig() {
  ModelConfig c;
  c.cond_hidden = 24;
  c.cond_sub_dim = 12;
  c.sub_hidden = 16;
  c.sub_layers = 1;
  return c;
}

CondInput RandomInput(uint64_t seed) {
  const auto v = ::frgn::testing::RandomUniform(kCondInputDim, -1.0f, 1.0f, seed);
  CondInput in;
  std::copy(v.begin(), v.end(), in.begin());
  return in;
}

// Straight-line double-precision evaluation of the whole network over a
// sequence, from the raw tensors.
class ReferenceCondNet {
 public:
  explicit ReferenceCondNet(const Model& m) : m_(m) {
    h_ = m.config.cond_hidden;
    s_ = m.config.cond_sub_dim;
  }

  std::vector<std::vector<double>> Run(const std::vector<CondInput>& inputs) {
    std::vector<std::vector<double>> fc;
    std::vector<std::vector<double>> out;
    for (const CondInput& x : inputs) {
      fc.push_back(Glu("cond.fc.glu", Tanh(Affine("cond.fc", x))));
      const size_t t = fc.size() - 1;
      const std::vector<double> zero(h_, 0.0);
      const auto& p2 = t >= 2 ? fc[t - 2] : zero;
      const auto& p1 = t >= 1 ? fc[t - 1] : zero;
      const auto w = m_.tensor("cond.conv.weight").ToFloat();
      const auto b = m_.tensor("cond.conv.bias").ToFloat();
      std::vector<double> conv(h_);
      for (int o = 0; o < h_; ++o) {
        double acc = b[o];
        for (int i = 0; i < h_; ++i) {
          acc += w[(o * h_ + i) * 3 + 0] * p2[i] + w[(o * h_ + i) * 3 + 1] * p1[i] +
                 w[(o * h_ + i) * 3 + 2] * fc[t][i];
        }
        conv[o] = std::tanh(acc);
      }
      conv = Glu("cond.conv.glu", conv);
      const auto up = Tanh(Affine("cond.up", conv));
      std::vector<double> frame;
      for (int k = 0; k < 4; ++k) {
        const auto part = Glu("cond.up.glu",
                              std::vector<double>(up.begin() + k * s_,
                                                  up.begin() + (k + 1) * s_));
        frame.insert(frame.end(), part.begin(), part.end());
      }
      out.push_back(frame);
    }
    return out;
  }

 private:
  template <typename V>
  std::vector<double> Affine(const std::string& prefix, const V& x) {
    const auto& wt = m_.tensor(prefix + ".weight");
    const auto w = wt.ToFloat();
    const auto b = m_.tensor(prefix + ".bias").ToFloat();
    const int rows = wt.rows();
    const int cols = static_cast<int>(x.size());
    std::vector<double> y(rows);
    for (int r = 0; r < rows; ++r) {
      y[r] = b[r];
      for (int c = 0; c < cols; ++c) y[r] += double{w[r * cols + c]} * x[c];
    }
    return y;
  }

  static std::vector<double> Tanh(std::vector<double> x) {
    for (double& v : x) v = std::tanh(v);
    return x;
  }

  std::vector<double> Glu(const std::string& name, const std::vector<double>& x) {
    const auto w = m_.tensor(name).ToFloat();
    const int d = static_cast<int>(x.size());
    std::vector<double> y(d);
    for (int r = 0; r < d; ++r) {
      double g = 0.0;
      for (int c = 0; c < d; ++c) g += w[r * d + c] * x[c];
      y[r] = x[r] / (1.0 + std::exp(-g));
    }
    return y;
  }

  const Model& m_;
  int h_;
  int s_;
};

TEST(CondNetTest, MatchesReferenceOverSequence) {
  const Model m = RandomModel(SmallConfig(), 11);
  const CondNet net = CondNet::FromModel(m);
  std::vector<CondInput> inputs;
  for (int t = 0; t < 10; ++t) inputs.push_back(RandomInput(t));
  const auto ref = ReferenceCondNet(m).Run(inputs);
  CondState state;
  state.Reset(net.hidden());
  std::vector<float> out(4 * net.sub_dim());
  for (int t = 0; t < 10; ++t) {
    CondForward(net, state, inputs[t], out);
    for (size_t i = 0; i < out.size(); ++i) ASSERT_NEAR(out[i], ref[t][i], 1e-5);
  }
}

TEST(CondNetTest, StreamingEqualsRecomputingFromTheLastThreeFrames) {
  const CondNet net = CondNet::FromModel(RandomModel(ModelConfig{}, 2));
  std::vector<CondInput> inputs;
  for (int t = 0; t < 10; ++t) inputs.push_back(RandomInput(100 + t));
  CondState stream;
  stream.Reset(net.hidden());
  std::vector<float> a(4 * net.sub_dim()), b(a.size());
  for (int t = 0; t < 10; ++t) {
    CondForward(net, stream, inputs[t], a);
    CondState fresh;
    fresh.Reset(net.hidden());
    for (int k = std::max(0, t - 2); k <= t; ++k) CondForward(net, fresh, inputs[k], b);
    ASSERT_EQ(a, b) << "frame " << t;
  }
}

TEST(CondNetTest, ConstantInputSettlesAfterTwoFrames) {
  const CondNet net = CondNet::FromModel(RandomModel(SmallConfig(), 3));
  const CondInput x = RandomInput(5);
  CondState state;
  state.Reset(net.hidden());
  std::vector<std::vector<float>> outs;
  for (int t = 0; t < 6; ++t) {
    std::vector<float> out(4 * net.sub_dim());
    CondForward(net, state, x, out);
    outs.push_back(out);
  }
  EXPECT_NE(outs[0], outs[1]);
  EXPECT_NE(outs[1], outs[2]);
  for (int t = 3; t < 6; ++t) EXPECT_EQ(outs[t], outs[2]);
}

TEST(CondNetTest, ZeroModelGivesZeroOutput) {
  Model m = RandomModel(SmallConfig(), 4);
  for (auto& [name, t] : m.tensors) {
    if (name.starts_with("cond.")) {
      std::fill(t.payload.begin(), t.payload.end(), 0);
    }
  }
  const CondNet net = CondNet::FromModel(m);
  CondState state;
  std::vector<float> out(4 * net.sub_dim(), 1.0f);
  CondForward(net, state, RandomInput(1), out);
  for (float v : out) EXPECT_EQ(v, 0.0f);
}

TEST(CondNetTest, OutputsBounded) {
  RandomInit init;
  init.weight_gain = 3.0f;
  const CondNet net = CondNet::FromModel(RandomModel(SmallConfig(), 6, init));
  CondState state;
  std::vector<float> out(4 * net.sub_dim());
  for (int t = 0; t < 50; ++t) {
    auto in = RandomInput(t);
    for (float& v : in) v *= 20.0f;
    CondForward(net, state, in, out);
    for (float v : out) {
      ASSERT_GT(v, -1.0f);
      ASSERT_LT(v, 1.0f);
    }
  }
}

TEST(CondNetTest, InputLayout) {
  FeatureFrame f;
  for (int i = 0; i < kNbBands; ++i) f.bfcc[i] = static_cast<float>(i);
  f.pitch_period = 101.19f;
  f.voicing = 0.75f;
  const PitchEmbedding e = SinusoidalPitchEmbedding(f.pitch_period);
  const CondInput in = ConditioningInput(f, e);
  for (int i = 0; i < kNbBands; ++i) EXPECT_EQ(in[i], static_cast<float>(i));
  EXPECT_NEAR(in[18], 0.5f, 1e-4);
  EXPECT_EQ(in[19], 0.75f);
  for (int k = 0; k < kEmbedDim; ++k) EXPECT_EQ(in[20 + k], e[k]);
}

TEST(CondNetTest, WrongOutputSizeThrows) {
  const CondNet net = CondNet::FromModel(RandomModel(SmallConfig(), 1));
  CondState state;
  std::vector<float> out(3 * net.sub_dim());
  EXPECT_THROW(CondForward(net, state, RandomInput(1), out), InvalidArgumentError);
}

}  // namespace
}  // namespace frgn
