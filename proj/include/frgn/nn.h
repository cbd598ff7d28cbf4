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

#ifndef FRGN_NN_H_
#define FRGN_NN_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace frgn {

// Rational approximations shared by the float and int8 paths; absolute error
// below 1e-6 over the whole real line.
float Tanh(float x);
float Sigmoid(float x);

enum class Activation { kLinear, kTanh, kSigmoid, kExp };

void ApplyActivation(Activation act, std::span<float> x);

// Symmetric int8 activations: value = q * scale.
struct QuantizedVector {
  std::vector<int8_t> q;
  float scale = 1.0f / 127.0f;
};

// Quantizes with scale max(1, max|x|) / 127, which is the fixed 1/127 grid
// for bounded activations and widens only for inputs that leave [-1, 1].
QuantizedVector QuantizeActivations(std::span<const float> x);
void QuantizeActivations(std::span<const float> x, QuantizedVector& out);

// Per-row symmetric int8 quantization: scale = max|row| / 127, q = round(w /
// scale). Rows of zeros get scale 1.
void QuantizeRows(int rows, int cols, std::span<const float> row_major,
                  std::span<int8_t> q, std::span<float> scales);

// Weight matrix, either float or int8 with one scale per row. Float weights
// are kept column-major for the matrix-vector kernel; int8 weights row-major.
class Matrix {
 public:
  Matrix() = default;

  static Matrix Float(int rows, int cols, std::span<const float> row_major);
  static Matrix Int8(int rows, int cols, std::span<const int8_t> row_major,
                     std::span<const float> row_scales);
  // Float weights quantized with QuantizeRows.
  static Matrix Quantize(int rows, int cols, std::span<const float> row_major);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool quantized() const { return quantized_; }

  // Dequantized weight.
  float at(int r, int c) const;
  std::vector<float> ToFloatRowMajor() const;
  std::span<const int8_t> q8() const { return q8_; }
  std::span<const float> row_scales() const { return scales_; }

  // y = W x. The int8 path quantizes x with QuantizeActivations first.
  void Multiply(std::span<const float> x, std::span<float> y) const;
  // y = W x on pre-quantized input; requires an int8 matrix.
  void MultiplyQ8(const QuantizedVector& x, std::span<float> y) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  bool quantized_ = false;
  std::vector<float> col_major_;
  std::vector<int8_t> q8_;
  std::vector<float> scales_;
};

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<float> bias;
  Activation activation = Activation::kTanh;

  int in() const { return weights.cols(); }
  int out() const { return weights.rows(); }
};

// Gated linear unit x * sigmoid(W x); W is square.
struct GluUnit {
  Matrix weights;

  int dim() const { return weights.rows(); }
};

// Causal 3-tap convolution over frame-rate vectors, followed by tanh and a
// GLU. Weights are stored as out x (in * 3) with the tap index fastest, i.e.
// w[o][i][k] multiplies frame t-2+k.
struct Conv3Layer {
  Matrix weights;
  std::vector<float> bias;
  GluUnit glu;

  int in() const { return weights.cols() / 3; }
  int out() const { return weights.rows(); }
};

// Transposed convolution producing four output vectors per input vector:
// output s uses rows [s * out, (s + 1) * out). Each output goes through tanh
// and a shared GLU.
struct UpConv4Layer {
  static constexpr int kFactor = 4;
  Matrix weights;  // (4 * out) x in
  std::vector<float> bias;
  GluUnit glu;

  int in() const { return weights.cols(); }
  int out() const { return weights.rows() / kFactor; }
};

// activation(W x + b).
void Dense(const DenseLayer& layer, std::span<const float> x,
           std::span<float> y);
// Same, on int8 input; the layer must hold int8 weights.
void DenseQ8(const DenseLayer& layer, const QuantizedVector& x,
             std::span<float> y);

// y = x * sigmoid(W x). y may alias x.
void Glu(const GluUnit& unit, std::span<const float> x, std::span<float> y);

void Conv3(const Conv3Layer& layer, std::span<const float> prev2,
           std::span<const float> prev1, std::span<const float> now,
           std::span<float> y);

// `y` holds 4 * out values, output s at offset s * out.
void UpConv4(const UpConv4Layer& layer, std::span<const float> x,
             std::span<float> y);

}  // namespace frgn

#endif  // FRGN_NN_H_
