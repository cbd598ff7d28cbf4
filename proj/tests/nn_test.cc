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

#include "frgn/nn.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "frgn/common.h"
#include "test_util.h"

namespace frgn {
namespace {

using ::frgn::testing::RandomUniform;
using ::frgn::testing::RelativeL2;

constexpr double kTol = 1e-6;

std::vector<float> RandomWeights(int rows, int cols, uint64_t seed) {
  const float r = 0.5f * std::sqrt(3.0f / cols);
  return RandomUniform(static_cast<size_t>(rows) * cols, -r, r, seed);
}

// y = W x in double, W row-major.
std::vector<double> NaiveMatVec(const std::vector<float>& w, int rows,
                                int cols, const std::vector<float>& x) {
  std::vector<double> y(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) y[r] += double{w[r * cols + c]} * x[c];
  }
  return y;
}

double NaiveSigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> NaiveGlu(const std::vector<float>& w,
                             const std::vector<double>& x) {
  const int d = static_cast<int>(x.size());
  std::vector<double> y(d);
  for (int r = 0; r < d; ++r) {
    double g = 0.0;
    for (int c = 0; c < d; ++c) g += w[r * d + c] * x[c];
    y[r] = x[r] * NaiveSigmoid(g);
  }
  return y;
}

TEST(ActivationTest, TanhMatchesStd) {
  double worst = 0.0;
  for (double x = -20.0; x <= 20.0; x += 1e-3) {
    worst = std::max<double>(worst, std::abs(Tanh(static_cast<float>(x)) -
                                     std::tanh(static_cast<float>(x))));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_EQ(Tanh(0.0f), 0.0f);
  EXPECT_LE(Tanh(1e30f), 1.0f);
  EXPECT_GE(Tanh(-1e30f), -1.0f);
}

TEST(ActivationTest, SigmoidMatchesLogistic) {
  for (double x = -30.0; x <= 30.0; x += 1e-2) {
    ASSERT_NEAR(Sigmoid(static_cast<float>(x)),
                NaiveSigmoid(static_cast<float>(x)), kTol);
  }
  EXPECT_EQ(Sigmoid(0.0f), 0.5f);
}

TEST(DenseTest, IdentityLinear) {
  const int n = 16;
  std::vector<float> eye(n * n, 0.0f);
  for (int i = 0; i < n; ++i) eye[i * n + i] = 1.0f;
  DenseLayer layer{Matrix::Float(n, n, eye), std::vector<float>(n, 0.0f),
                   Activation::kLinear};
  const auto x = RandomUniform(n, -3.0f, 3.0f, 1);
  std::vector<float> y(n);
  Dense(layer, x, y);
  EXPECT_EQ(y, x);
}

TEST(DenseTest, TanhOutputBounded) {
  DenseLayer layer{Matrix::Float(8, 8, RandomUniform(64, -50.0f, 50.0f, 2)),
                   RandomUniform(8, -1.0f, 1.0f, 3), Activation::kTanh};
  const auto x = RandomUniform(8, -10.0f, 10.0f, 4);
  std::vector<float> y(8);
  Dense(layer, x, y);
  for (float v : y) {
    EXPECT_GE(v, -1.0f);
    EXPECT_LE(v, 1.0f);
  }
}

struct Shape {
  int rows;
  int cols;
};

// Shapes of the default preset, plus awkward sizes for the kernel tails.
const Shape kShapes[] = {{8, 8},     {256, 32},  {256, 256}, {512, 256},
                         {128, 128}, {256, 208}, {256, 336}, {40, 336},
                         {40, 128},  {1, 128},   {7, 19},    {5, 33}};

TEST(DenseTest, MatchesNaiveOracle) {
  uint64_t seed = 10;
  for (const Shape& s : kShapes) {
    for (Activation act : {Activation::kLinear, Activation::kTanh,
                           Activation::kSigmoid}) {
      const auto w = RandomWeights(s.rows, s.cols, ++seed);
      const auto b = RandomUniform(s.rows, -0.1f, 0.1f, ++seed);
      const auto x = RandomUniform(s.cols, -1.0f, 1.0f, ++seed);
      DenseLayer layer{Matrix::Float(s.rows, s.cols, w), b, act};
      std::vector<float> y(s.rows);
      Dense(layer, x, y);
      const auto ref = NaiveMatVec(w, s.rows, s.cols, x);
      for (int r = 0; r < s.rows; ++r) {
        double v = ref[r] + b[r];
        if (act == Activation::kTanh) v = std::tanh(v);
        if (act == Activation::kSigmoid) v = NaiveSigmoid(v);
        ASSERT_NEAR(y[r], v, kTol) << s.rows << "x" << s.cols << " row " << r;
      }
    }
  }
}

TEST(DenseTest, ExpActivation) {
  DenseLayer layer{Matrix::Float(1, 3, std::vector<float>{0.5f, -1.0f, 2.0f}),
                   {0.25f}, Activation::kExp};
  std::vector<float> x = {1.0f, 2.0f, 0.5f};
  std::vector<float> y(1);
  Dense(layer, x, y);
  EXPECT_NEAR(y[0], std::exp(0.5 - 2.0 + 1.0 + 0.25), 1e-6);
}

TEST(DenseTest, SizeMismatchThrows) {
  DenseLayer layer{Matrix::Float(4, 3, std::vector<float>(12, 0.0f)),
                   std::vector<float>(4, 0.0f), Activation::kLinear};
  std::vector<float> x(5), y(4);
  EXPECT_THROW(Dense(layer, x, y), InvalidArgumentError);
}

TEST(QuantizeTest, ActivationScale) {
  std::vector<float> bounded = {0.5f, -0.25f, 1.0f};
  const QuantizedVector a = QuantizeActivations(bounded);
  EXPECT_FLOAT_EQ(a.scale, 1.0f / 127.0f);
  EXPECT_EQ(a.q[2], 127);
  std::vector<float> wide = {4.0f, -2.0f};
  const QuantizedVector b = QuantizeActivations(wide);
  EXPECT_FLOAT_EQ(b.scale, 4.0f / 127.0f);
  EXPECT_EQ(b.q[0], 127);
  EXPECT_EQ(b.q[1], -64);
}

TEST(QuantizeTest, RowScalesAndZeroRows) {
  std::vector<float> w = {0.0f, 0.0f, 0.0f, 1.0f, -2.0f, 0.5f};
  std::vector<int8_t> q(6);
  std::vector<float> scales(2);
  QuantizeRows(2, 3, w, q, scales);
  EXPECT_EQ(scales[0], 1.0f);
  EXPECT_FLOAT_EQ(scales[1], 2.0f / 127.0f);
  EXPECT_EQ(q[0], 0);
  EXPECT_EQ(q[4], -127);
  EXPECT_EQ(q[3], 64);  // round(63.5)
}

TEST(QuantizeTest, DequantizationErrorBoundedByHalfStep) {
  const auto w = RandomWeights(64, 96, 5);
  const Matrix m = Matrix::Quantize(64, 96, w);
  for (int r = 0; r < 64; ++r) {
    float rowmax = 0.0f;
    for (int c = 0; c < 96; ++c) rowmax = std::max(rowmax, std::abs(w[r * 96 + c]));
    for (int c = 0; c < 96; ++c) {
      ASSERT_LE(std::abs(m.at(r, c) - w[r * 96 + c]), rowmax / 254.0f * 1.0001f);
    }
  }
}

TEST(QuantizeTest, RequantizationIsIdempotent) {
  const auto w = RandomWeights(32, 48, 6);
  const Matrix once = Matrix::Quantize(32, 48, w);
  const Matrix twice = Matrix::Quantize(32, 48, once.ToFloatRowMajor());
  EXPECT_TRUE(std::equal(once.q8().begin(), once.q8().end(),
                         twice.q8().begin()));
  for (int r = 0; r < 32; ++r) {
    EXPECT_FLOAT_EQ(once.row_scales()[r], twice.row_scales()[r]);
  }
}

TEST(QuantizeTest, ZeroWeightsMatchFloatExactly) {
  DenseLayer f{Matrix::Float(16, 24, std::vector<float>(16 * 24, 0.0f)),
               RandomUniform(16, -1.0f, 1.0f, 1), Activation::kTanh};
  DenseLayer q{Matrix::Quantize(16, 24, std::vector<float>(16 * 24, 0.0f)),
               f.bias, Activation::kTanh};
  const auto x = RandomUniform(24, -1.0f, 1.0f, 2);
  std::vector<float> yf(16), yq(16);
  Dense(f, x, yf);
  Dense(q, x, yq);
  EXPECT_EQ(yf, yq);
}

TEST(QuantizeTest, Int8KernelMatchesIntegerOracle) {
  for (const Shape& s : kShapes) {
    const auto w = RandomWeights(s.rows, s.cols, 21);
    const Matrix m = Matrix::Quantize(s.rows, s.cols, w);
    const auto x = RandomUniform(s.cols, -1.0f, 1.0f, 22);
    const QuantizedVector xq = QuantizeActivations(x);
    std::vector<float> y(s.rows);
    m.MultiplyQ8(xq, y);
    for (int r = 0; r < s.rows; ++r) {
      int64_t acc = 0;
      for (int c = 0; c < s.cols; ++c) {
        acc += int64_t{m.q8()[r * s.cols + c]} * xq.q[c];
      }
      ASSERT_FLOAT_EQ(y[r], static_cast<float>(acc) * (m.row_scales()[r] * xq.scale));
    }
  }
}

TEST(QuantizeTest, RelativeErrorOnPresetShapes) {
  uint64_t seed = 40;
  for (const Shape& s : kShapes) {
    if (s.cols < 32) continue;
    const auto w = RandomWeights(s.rows, s.cols, ++seed);
    const auto x = RandomUniform(s.cols, -1.0f, 1.0f, ++seed);
    std::vector<float> yf(s.rows), yq(s.rows);
    Matrix::Float(s.rows, s.cols, w).Multiply(x, yf);
    Matrix::Quantize(s.rows, s.cols, w).Multiply(x, yq);
    EXPECT_LE(RelativeL2(yf, yq), 0.02) << s.rows << "x" << s.cols;
  }
}

TEST(QuantizeTest, FloatMatrixRejectsQ8Input) {
  const Matrix m = Matrix::Float(2, 2, std::vector<float>(4, 1.0f));
  std::vector<float> y(2);
  EXPECT_THROW(m.MultiplyQ8(QuantizeActivations(std::vector<float>{1, 1}), y),
               InvalidArgumentError);
}

TEST(GluTest, ZeroWeightsHalveInput) {
  GluUnit glu{Matrix::Float(6, 6, std::vector<float>(36, 0.0f))};
  const auto x = RandomUniform(6, -2.0f, 2.0f, 1);
  std::vector<float> y(6);
  Glu(glu, x, y);
  for (int i = 0; i < 6; ++i) EXPECT_FLOAT_EQ(y[i], 0.5f * x[i]);
}

TEST(GluTest, ZeroInputGivesZero) {
  GluUnit glu{Matrix::Float(6, 6, RandomUniform(36, -5.0f, 5.0f, 2))};
  std::vector<float> x(6, 0.0f), y(6, 1.0f);
  Glu(glu, x, y);
  for (float v : y) EXPECT_EQ(v, 0.0f);
}

TEST(GluTest, NeverAmplifies) {
  GluUnit glu{Matrix::Float(32, 32, RandomUniform(32 * 32, -3.0f, 3.0f, 3))};
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = RandomUniform(32, -4.0f, 4.0f, seed);
    std::vector<float> y(32);
    Glu(glu, x, y);
    for (int i = 0; i < 32; ++i) ASSERT_LE(std::abs(y[i]), std::abs(x[i]));
  }
}

TEST(GluTest, MatchesNaiveOracleInPlace) {
  for (int d : {8, 128, 256}) {
    const auto w = RandomWeights(d, d, d);
    GluUnit glu{Matrix::Float(d, d, w)};
    auto x = RandomUniform(d, -1.0f, 1.0f, d + 1);
    const auto ref = NaiveGlu(w, std::vector<double>(x.begin(), x.end()));
    Glu(glu, x, x);
    for (int i = 0; i < d; ++i) ASSERT_NEAR(x[i], ref[i], kTol);
  }
}

Conv3Layer RandomConv3(int in, int out, uint64_t seed) {
  return Conv3Layer{Matrix::Float(out, 3 * in, RandomWeights(out, 3 * in, seed)),
                    RandomUniform(out, -0.1f, 0.1f, seed + 1),
                    GluUnit{Matrix::Float(out, out, RandomWeights(out, out, seed + 2))}};
}

// Direct evaluation of sum_i sum_k w[o][i][k] x_{t-2+k}[i].
std::vector<double> NaiveConv3(const Conv3Layer& layer,
                               const std::vector<float>& w,
                               const std::vector<float>& glu_w,
                               const std::vector<float>* frames[3]) {
  const int in = layer.in();
  const int out = layer.out();
  std::vector<double> h(out);
  for (int o = 0; o < out; ++o) {
    double acc = layer.bias[o];
    for (int i = 0; i < in; ++i) {
      for (int k = 0; k < 3; ++k) {
        acc += double{w[o * 3 * in + i * 3 + k]} * (*frames[k])[i];
      }
    }
    h[o] = std::tanh(acc);
  }
  return NaiveGlu(glu_w, h);
}

TEST(Conv3Test, MatchesNaiveOracle) {
  for (int d : {8, 256}) {
    const Conv3Layer layer = RandomConv3(d, d, 100 + d);
    const auto w = layer.weights.ToFloatRowMajor();
    const auto glu_w = layer.glu.weights.ToFloatRowMajor();
    const auto a = RandomUniform(d, -1.0f, 1.0f, 1);
    const auto b = RandomUniform(d, -1.0f, 1.0f, 2);
    const auto c = RandomUniform(d, -1.0f, 1.0f, 3);
    const std::vector<float>* frames[3] = {&a, &b, &c};
    const auto ref = NaiveConv3(layer, w, glu_w, frames);
    std::vector<float> y(d);
    Conv3(layer, a, b, c, y);
    for (int o = 0; o < d; ++o) ASSERT_NEAR(y[o], ref[o], kTol);
  }
}

TEST(Conv3Test, ZeroHistoryUsesOnlyCurrentTap) {
  const int d = 16;
  Conv3Layer layer = RandomConv3(d, d, 7);
  // Same layer with the t-2 and t-1 taps removed.
  auto w = layer.weights.ToFloatRowMajor();
  for (int o = 0; o < d; ++o) {
    for (int i = 0; i < d; ++i) {
      w[o * 3 * d + i * 3] = 0.0f;
      w[o * 3 * d + i * 3 + 1] = 0.0f;
    }
  }
  Conv3Layer current_only{Matrix::Float(d, 3 * d, w), layer.bias, layer.glu};
  const auto x = RandomUniform(d, -1.0f, 1.0f, 8);
  const std::vector<float> zeros(d, 0.0f);
  const auto noise = RandomUniform(d, -1.0f, 1.0f, 9);
  std::vector<float> y1(d), y2(d);
  Conv3(layer, zeros, zeros, x, y1);
  Conv3(current_only, noise, noise, x, y2);
  for (int o = 0; o < d; ++o) EXPECT_NEAR(y1[o], y2[o], kTol);
}

TEST(Conv3Test, StreamingOverSequence) {
  const int d = 12;
  const Conv3Layer layer = RandomConv3(d, d, 13);
  const auto w = layer.weights.ToFloatRowMajor();
  const auto glu_w = layer.glu.weights.ToFloatRowMajor();
  std::vector<std::vector<float>> seq;
  seq.push_back(std::vector<float>(d, 0.0f));
  seq.push_back(std::vector<float>(d, 0.0f));
  for (int t = 0; t < 10; ++t) seq.push_back(RandomUniform(d, -1.0f, 1.0f, 50 + t));
  for (int t = 2; t < static_cast<int>(seq.size()); ++t) {
    const std::vector<float>* frames[3] = {&seq[t - 2], &seq[t - 1], &seq[t]};
    const auto ref = NaiveConv3(layer, w, glu_w, frames);
    std::vector<float> y(d);
    Conv3(layer, seq[t - 2], seq[t - 1], seq[t], y);
    for (int o = 0; o < d; ++o) ASSERT_NEAR(y[o], ref[o], kTol);
  }
}

UpConv4Layer RandomUpConv4(int in, int out, uint64_t seed) {
  return UpConv4Layer{Matrix::Float(4 * out, in, RandomWeights(4 * out, in, seed)),
                      RandomUniform(4 * out, -0.1f, 0.1f, seed + 1),
                      GluUnit{Matrix::Float(out, out, RandomWeights(out, out, seed + 2))}};
}

TEST(UpConv4Test, EachPositionIsADenseLayer) {
  for (auto [in, out] : {std::pair{8, 4}, std::pair{256, 128}}) {
    const UpConv4Layer layer = RandomUpConv4(in, out, 200 + in);
    const auto w = layer.weights.ToFloatRowMajor();
    const auto glu_w = layer.glu.weights.ToFloatRowMajor();
    const auto x = RandomUniform(in, -1.0f, 1.0f, 5);
    std::vector<float> y(4 * out);
    UpConv4(layer, x, y);
    for (int s = 0; s < 4; ++s) {
      std::vector<double> h(out);
      for (int o = 0; o < out; ++o) {
        double acc = layer.bias[s * out + o];
        for (int i = 0; i < in; ++i) acc += double{w[(s * out + o) * in + i]} * x[i];
        h[o] = std::tanh(acc);
      }
      const auto ref = NaiveGlu(glu_w, h);
      for (int o = 0; o < out; ++o) ASSERT_NEAR(y[s * out + o], ref[o], kTol);
    }
  }
}

TEST(UpConv4Test, ZeroInputGivesBiasOnlyOutput) {
  const int in = 10, out = 6;
  UpConv4Layer layer = RandomUpConv4(in, out, 3);
  layer.bias.assign(4 * out, 0.0f);
  std::vector<float> x(in, 0.0f), y(4 * out, 1.0f);
  UpConv4(layer, x, y);
  for (float v : y) EXPECT_EQ(v, 0.0f);
}

TEST(UpConv4Test, RequiresFourOutputs) {
  const UpConv4Layer layer = RandomUpConv4(10, 6, 3);
  std::vector<float> x(10), y(3 * 6);
  EXPECT_THROW(UpConv4(layer, x, y), InvalidArgumentError);
}

}  // namespace
}  // namespace frgn
