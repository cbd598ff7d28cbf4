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

#include <algorithm>
#include <cmath>
#include <string>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "frgn/common.h"

namespace frgn {
namespace {

void CheckSize(size_t got, int want, const char* what) {
  if (got != static_cast<size_t>(want)) {
    throw InvalidArgumentError(std::string(what) + ": expected " +
                               std::to_string(want) + " values, got " +
                               std::to_string(got));
  }
}

// |acc| <= cols * 127 * 127 must fit in int32.
constexpr int kMaxQ8Cols = (1 << 30) / (127 * 127);

#if defined(__AVX2__)
int32_t HorizontalSum(__m256i v) {
  __m128i s = _mm_add_epi32(_mm256_castsi256_si128(v),
                            _mm256_extracti128_si256(v, 1));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(1, 0, 3, 2)));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(2, 3, 0, 1)));
  return _mm_cvtsi128_si32(s);
}
#endif

// Integer dot products of `rows` consecutive int8 rows with x.
void DotRowsQ8(const int8_t* w, int rows, int cols, const int8_t* x,
               int32_t* acc) {
#if defined(__AVX2__)
  const int vec_cols = cols & ~15;
  thread_local std::vector<int16_t> x16;
  x16.resize(static_cast<size_t>(vec_cols));
  for (int c = 0; c < vec_cols; ++c) x16[c] = x[c];
  int r = 0;
  for (; r + 4 <= rows; r += 4) {
    const int8_t* w0 = w + static_cast<size_t>(r) * cols;
    const int8_t* w1 = w0 + cols;
    const int8_t* w2 = w1 + cols;
    const int8_t* w3 = w2 + cols;
    __m256i a0 = _mm256_setzero_si256();
    __m256i a1 = _mm256_setzero_si256();
    __m256i a2 = _mm256_setzero_si256();
    __m256i a3 = _mm256_setzero_si256();
    for (int c = 0; c < vec_cols; c += 16) {
      const __m256i xv = _mm256_loadu_si256(
          reinterpret_cast<const __m256i*>(x16.data() + c));
      const auto load = [c](const int8_t* p) {
        return _mm256_cvtepi8_epi16(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + c)));
      };
      a0 = _mm256_add_epi32(a0, _mm256_madd_epi16(load(w0), xv));
      a1 = _mm256_add_epi32(a1, _mm256_madd_epi16(load(w1), xv));
      a2 = _mm256_add_epi32(a2, _mm256_madd_epi16(load(w2), xv));
      a3 = _mm256_add_epi32(a3, _mm256_madd_epi16(load(w3), xv));
    }
    int32_t s[4] = {HorizontalSum(a0), HorizontalSum(a1), HorizontalSum(a2),
                    HorizontalSum(a3)};
    for (int c = vec_cols; c < cols; ++c) {
      s[0] += int32_t{w0[c]} * x[c];
      s[1] += int32_t{w1[c]} * x[c];
      s[2] += int32_t{w2[c]} * x[c];
      s[3] += int32_t{w3[c]} * x[c];
    }
    std::copy(s, s + 4, acc + r);
  }
  for (; r < rows; ++r) {
    const int8_t* wr = w + static_cast<size_t>(r) * cols;
    int32_t s = 0;
    for (int c = 0; c < cols; ++c) s += int32_t{wr[c]} * x[c];
    acc[r] = s;
  }
#else
  for (int r = 0; r < rows; ++r) {
    const int8_t* wr = w + static_cast<size_t>(r) * cols;
    int32_t s = 0;
    for (int c = 0; c < cols; ++c) s += int32_t{wr[c]} * x[c];
    acc[r] = s;
  }
#endif
}

std::vector<float>& Scratch(int slot, size_t n) {
  thread_local std::array<std::vector<float>, 2> buffers;
  auto& b = buffers[slot];
  if (b.size() < n) b.resize(n);
  return b;
}

}  // namespace

float Tanh(float x) {
  // Odd/even polynomial ratio, clamped where the ratio reaches +-1 in float.
  constexpr float kClamp = 7.90531110763549805f;
  constexpr float kA1 = 4.89352455891786e-03f;
  constexpr float kA3 = 6.37261928875436e-04f;
  constexpr float kA5 = 1.48572235717979e-05f;
  constexpr float kA7 = 5.12229709037114e-08f;
  constexpr float kA9 = -8.60467152213735e-11f;
  constexpr float kA11 = 2.00018790482477e-13f;
  constexpr float kA13 = -2.76076847742355e-16f;
  constexpr float kB0 = 4.89352518554385e-03f;
  constexpr float kB2 = 2.26843463243900e-03f;
  constexpr float kB4 = 1.18534705686654e-04f;
  constexpr float kB6 = 1.19825839466702e-06f;
  if (std::isnan(x)) return x;
  x = std::clamp(x, -kClamp, kClamp);
  if (std::abs(x) < 4e-4f) return x;
  const float x2 = x * x;
  float p = kA13;
  p = p * x2 + kA11;
  p = p * x2 + kA9;
  p = p * x2 + kA7;
  p = p * x2 + kA5;
  p = p * x2 + kA3;
  p = p * x2 + kA1;
  p *= x;
  float q = kB6;
  q = q * x2 + kB4;
  q = q * x2 + kB2;
  q = q * x2 + kB0;
  return p / q;
}

float Sigmoid(float x) { return 0.5f + 0.5f * Tanh(0.5f * x); }

void ApplyActivation(Activation act, std::span<float> x) {
  switch (act) {
    case Activation::kLinear:
      return;
    case Activation::kTanh:
      for (float& v : x) v = Tanh(v);
      return;
    case Activation::kSigmoid:
      for (float& v : x) v = Sigmoid(v);
      return;
    case Activation::kExp:
      for (float& v : x) v = std::exp(v);
      return;
  }
}

void QuantizeActivations(std::span<const float> x, QuantizedVector& out) {
  float max_abs = 1.0f;
  for (float v : x) max_abs = std::max(max_abs, std::abs(v));
  out.scale = max_abs / 127.0f;
  const float inv = 127.0f / max_abs;
  out.q.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const float r = std::nearbyint(x[i] * inv);
    out.q[i] = static_cast<int8_t>(std::clamp(r, -127.0f, 127.0f));
  }
}

QuantizedVector QuantizeActivations(std::span<const float> x) {
  QuantizedVector out;
  QuantizeActivations(x, out);
  return out;
}

Matrix Matrix::Float(int rows, int cols, std::span<const float> row_major) {
  CheckSize(row_major.size(), rows * cols, "float matrix");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.col_major_.resize(row_major.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m.col_major_[static_cast<size_t>(c) * rows + r] =
          row_major[static_cast<size_t>(r) * cols + c];
    }
  }
  return m;
}

Matrix Matrix::Int8(int rows, int cols, std::span<const int8_t> row_major,
                    std::span<const float> row_scales) {
  CheckSize(row_major.size(), rows * cols, "int8 matrix");
  CheckSize(row_scales.size(), rows, "int8 row scales");
  if (cols > kMaxQ8Cols) {
    throw InvalidArgumentError("int8 matrix too wide for 32-bit accumulation");
  }
  for (float s : row_scales) {
    if (!(s > 0.0f) || !std::isfinite(s)) {
      throw InvalidArgumentError("int8 row scales must be positive and finite");
    }
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.quantized_ = true;
  m.q8_.assign(row_major.begin(), row_major.end());
  m.scales_.assign(row_scales.begin(), row_scales.end());
  return m;
}

void QuantizeRows(int rows, int cols, std::span<const float> row_major,
                  std::span<int8_t> q, std::span<float> scales) {
  CheckSize(row_major.size(), rows * cols, "float matrix");
  CheckSize(q.size(), rows * cols, "int8 matrix");
  CheckSize(scales.size(), rows, "int8 row scales");
  for (int r = 0; r < rows; ++r) {
    const float* row = row_major.data() + static_cast<size_t>(r) * cols;
    float max_abs = 0.0f;
    for (int c = 0; c < cols; ++c) max_abs = std::max(max_abs, std::abs(row[c]));
    const float scale = max_abs > 0.0f ? max_abs / 127.0f : 1.0f;
    scales[r] = scale;
    for (int c = 0; c < cols; ++c) {
      const float v = std::nearbyint(row[c] / scale);
      q[static_cast<size_t>(r) * cols + c] =
          static_cast<int8_t>(std::clamp(v, -127.0f, 127.0f));
    }
  }
}

Matrix Matrix::Quantize(int rows, int cols, std::span<const float> row_major) {
  std::vector<int8_t> q(static_cast<size_t>(rows) * cols);
  std::vector<float> scales(rows);
  QuantizeRows(rows, cols, row_major, q, scales);
  return Int8(rows, cols, q, scales);
}

float Matrix::at(int r, int c) const {
  if (quantized_) {
    return q8_[static_cast<size_t>(r) * cols_ + c] * scales_[r];
  }
  return col_major_[static_cast<size_t>(c) * rows_ + r];
}

std::vector<float> Matrix::ToFloatRowMajor() const {
  std::vector<float> out(static_cast<size_t>(rows_) * cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      out[static_cast<size_t>(r) * cols_ + c] = at(r, c);
    }
  }
  return out;
}

void Matrix::Multiply(std::span<const float> x, std::span<float> y) const {
  CheckSize(x.size(), cols_, "matrix input");
  CheckSize(y.size(), rows_, "matrix output");
  if (quantized_) {
    thread_local QuantizedVector xq;
    QuantizeActivations(x, xq);
    MultiplyQ8(xq, y);
    return;
  }
  std::fill(y.begin(), y.end(), 0.0f);
  float* out = y.data();
  for (int c = 0; c < cols_; ++c) {
    const float xc = x[c];
    const float* col = col_major_.data() + static_cast<size_t>(c) * rows_;
    for (int r = 0; r < rows_; ++r) out[r] += col[r] * xc;
  }
}

void Matrix::MultiplyQ8(const QuantizedVector& x, std::span<float> y) const {
  if (!quantized_) {
    throw InvalidArgumentError("int8 product requested on a float matrix");
  }
  CheckSize(x.q.size(), cols_, "matrix input");
  CheckSize(y.size(), rows_, "matrix output");
  thread_local std::vector<int32_t> acc;
  acc.resize(rows_);
  DotRowsQ8(q8_.data(), rows_, cols_, x.q.data(), acc.data());
  for (int r = 0; r < rows_; ++r) {
    y[r] = static_cast<float>(acc[r]) * (scales_[r] * x.scale);
  }
}

void Dense(const DenseLayer& layer, std::span<const float> x,
           std::span<float> y) {
  layer.weights.Multiply(x, y);
  for (int i = 0; i < layer.out(); ++i) y[i] += layer.bias[i];
  ApplyActivation(layer.activation, y);
}

void DenseQ8(const DenseLayer& layer, const QuantizedVector& x,
             std::span<float> y) {
  layer.weights.MultiplyQ8(x, y);
  for (int i = 0; i < layer.out(); ++i) y[i] += layer.bias[i];
  ApplyActivation(layer.activation, y);
}

void Glu(const GluUnit& unit, std::span<const float> x, std::span<float> y) {
  const int d = unit.dim();
  CheckSize(x.size(), d, "GLU input");
  CheckSize(y.size(), d, "GLU output");
  std::vector<float>& gate = Scratch(0, d);
  std::span<float> g(gate.data(), d);
  unit.weights.Multiply(x, g);
  for (int i = 0; i < d; ++i) y[i] = x[i] * Sigmoid(g[i]);
}

void Conv3(const Conv3Layer& layer, std::span<const float> prev2,
           std::span<const float> prev1, std::span<const float> now,
           std::span<float> y) {
  const int in = layer.in();
  CheckSize(prev2.size(), in, "conv3 input t-2");
  CheckSize(prev1.size(), in, "conv3 input t-1");
  CheckSize(now.size(), in, "conv3 input t");
  std::vector<float>& stacked = Scratch(1, static_cast<size_t>(3) * in);
  for (int i = 0; i < in; ++i) {
    stacked[3 * i] = prev2[i];
    stacked[3 * i + 1] = prev1[i];
    stacked[3 * i + 2] = now[i];
  }
  layer.weights.Multiply(std::span<const float>(stacked.data(), 3 * in), y);
  for (int o = 0; o < layer.out(); ++o) y[o] = Tanh(y[o] + layer.bias[o]);
  Glu(layer.glu, y, y);
}

void UpConv4(const UpConv4Layer& layer, std::span<const float> x,
             std::span<float> y) {
  layer.weights.Multiply(x, y);
  const int out = layer.out();
  for (size_t i = 0; i < y.size(); ++i) y[i] = Tanh(y[i] + layer.bias[i]);
  for (int s = 0; s < UpConv4Layer::kFactor; ++s) {
    std::span<float> part = y.subspan(static_cast<size_t>(s) * out, out);
    Glu(layer.glu, part, part);
  }
}

}  // namespace frgn
