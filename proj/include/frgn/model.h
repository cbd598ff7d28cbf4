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

#ifndef FRGN_MODEL_H_
#define FRGN_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "frgn/common.h"
#include "frgn/nn.h"

namespace frgn {

enum class EmbeddingKind : uint32_t {
  kSinusoidal = 0,  // fixed {sin, cos} embedding computed at run time
  kLearnedTable = 1,  // one row per integer period, stored as "embed.table"
};

// Layer dimensions. The fixed fields are part of the container so that a
// file can be validated on its own, but only the defaults are accepted.
struct ModelConfig {
  int cond_hidden = 256;
  int cond_sub_dim = 128;
  int sub_hidden = 256;
  int sub_layers = 3;
  int subframe_len = kSubframeSize;
  int frame_subframes = kNbSubframes;
  int feature_dim = kFeatureDim;
  int embed_dim = kEmbedDim;
  int pitch_min = kPitchMin;
  int pitch_max = kPitchMax;
  EmbeddingKind embedding_kind = EmbeddingKind::kSinusoidal;

  // Throws InvalidArgumentError on out-of-range or non-default fixed fields.
  void Validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// Key=value text form ("cond_hidden = 256", '#' comments), as used by the
// preset files. Unknown keys are rejected.
ModelConfig ParseModelConfig(const std::string& text);
std::string FormatModelConfig(const ModelConfig& config);

enum class DType : uint8_t { kF32 = 0, kI8 = 1 };
enum class Precision : uint32_t { kFloat = 0, kInt8 = 1 };

struct TensorRecord {
  std::string name;
  DType dtype = DType::kF32;
  std::vector<uint32_t> shape;
  std::vector<float> scales;     // one per row (shape[0]), int8 only
  std::vector<uint8_t> payload;  // little-endian element data

  int64_t elements() const;
  int rows() const { return shape.empty() ? 1 : static_cast<int>(shape[0]); }
  int cols() const;

  // Dequantized values in row-major order.
  std::vector<float> ToFloat() const;
  std::span<const int8_t> AsInt8() const;

  static TensorRecord FromFloat(std::string name, std::vector<uint32_t> shape,
                                std::span<const float> values);

  bool operator==(const TensorRecord&) const = default;
};

struct TensorSpec {
  std::string name;
  std::vector<uint32_t> shape;
  bool quantizable = false;  // weight matrices; biases, gain, gate stay float
};

// Every tensor the architecture needs for `config`, sorted by name.
std::vector<TensorSpec> RequiredTensors(const ModelConfig& config);

struct Model {
  ModelConfig config;
  Precision precision = Precision::kFloat;
  std::map<std::string, TensorRecord> tensors;

  const TensorRecord& tensor(const std::string& name) const;
  // Checks that the tensor set, shapes and dtypes match the architecture.
  // Throws ModelFormatError.
  void Validate() const;

  bool operator==(const Model&) const = default;
};

class ModelFormatError : public FormatError {
 public:
  enum class Kind {
    kBadMagic,
    kUnsupportedVersion,
    kTruncated,
    kChecksumMismatch,
    kInvalidConfig,
    kGraphMismatch,
    kShapeMismatch,
    kCorrupt,
  };
  ModelFormatError(Kind kind, const std::string& what)
      : FormatError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr char kModelMagic[4] = {'F', 'R', 'G', 'N'};
inline constexpr uint32_t kModelVersion = 1;

// Container layout, all little-endian:
//   "FRGN" | u32 version | u32 precision | 11 x u32 config
//   | u32 tensor count | directory | u64 payload size | u32 CRC-32 of payload
//   | payload
// Directory entry: u16 name length, name, u8 dtype, u8 rank, u32 dims[rank],
// u64 scale offset (all ones for f32), u64 data offset. Offsets are relative
// to the payload start. Tensors are written in name order with no padding,
// so serialization is canonical.
std::vector<uint8_t> SaveModel(const Model& model);
Model LoadModel(std::span<const uint8_t> bytes);
void SaveModelFile(const std::filesystem::path& path, const Model& model);
Model LoadModelFile(const std::filesystem::path& path);

// Build a float model from named row-major tensors, e.g. exported by a
// training script. The tensor set must match the architecture exactly.
Model ModelFromFloatTensors(const ModelConfig& config,
                            const std::map<std::string, std::vector<float>>& values);

struct RandomInit {
  // Uniform weights with standard deviation weight_gain / sqrt(fan_in).
  float weight_gain = 0.5f;
  float bias_range = 0.1f;
  // Bias of the exponential gain neuron, i.e. log of the typical gain.
  float gain_bias = -2.5f;
};

// Deterministic pseudo-random float model, used for fixtures, benchmarks and
// as a training starting point.
Model RandomModel(const ModelConfig& config, uint64_t seed,
                  const RandomInit& init = {});

// Per-row symmetric int8 for every quantizable tensor; everything else is
// copied. Quantizing an int8 model returns it unchanged.
Model QuantizeModel(const Model& model);
Model DequantizeModel(const Model& model);

int64_t CountDenseParams(int in, int out);
// All trainable scalars of the architecture (equal to the element count of a
// float container).
int64_t CountParams(const ModelConfig& config);

// Kernel-ready weights for a 2-d (or flattened) tensor: int8 tensors keep
// their quantization, float tensors stay float.
Matrix ToMatrix(const TensorRecord& tensor);

struct FlopCount {
  double cond_per_second = 0.0;
  double subframe_per_second = 0.0;
  double elementwise_per_second = 0.0;
  double total() const {
    return cond_per_second + subframe_per_second + elementwise_per_second;
  }
};

// Operations per second of synthesized audio, counting a multiply-add as two
// operations. Each activation, bias add, gate product and normalization is
// counted as one operation in the elementwise term.
FlopCount CountFlops(const ModelConfig& config);

}  // namespace frgn

#endif  // FRGN_MODEL_H_
