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

#include "frgn/model.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include "frgn/nn.h"
#include "frgn/wav.h"

namespace frgn {
namespace {

using Kind = ModelFormatError::Kind;

constexpr uint64_t kNoScales = ~uint64_t{0};
constexpr int kConfigFields = 11;

// Config fields in container order.
std::array<uint32_t, kConfigFields> ConfigFields(const ModelConfig& c) {
  return {static_cast<uint32_t>(c.cond_hidden),
          static_cast<uint32_t>(c.cond_sub_dim),
          static_cast<uint32_t>(c.sub_hidden),
          static_cast<uint32_t>(c.sub_layers),
          static_cast<uint32_t>(c.subframe_len),
          static_cast<uint32_t>(c.frame_subframes),
          static_cast<uint32_t>(c.feature_dim),
          static_cast<uint32_t>(c.embed_dim),
          static_cast<uint32_t>(c.pitch_min),
          static_cast<uint32_t>(c.pitch_max),
          static_cast<uint32_t>(c.embedding_kind)};
}

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) { Int(v, 2); }
  void U32(uint32_t v) { Int(v, 4); }
  void U64(uint64_t v) { Int(v, 8); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void Bytes(std::span<const uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  std::vector<uint8_t>& out() { return out_; }

 private:
  void Int(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t U8() { return static_cast<uint8_t>(Int(1)); }
  uint16_t U16() { return static_cast<uint16_t>(Int(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Int(4)); }
  uint64_t U64() { return Int(8); }
  std::span<const uint8_t> Bytes(size_t n) {
    Need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  size_t pos() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw ModelFormatError(Kind::kTruncated, "model container is truncated");
    }
  }
  uint64_t Int(int n) {
    Need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

std::string ShapeString(const std::vector<uint32_t>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

size_t DTypeSize(DType t) { return t == DType::kF32 ? 4 : 1; }

int SubLayerInput(const ModelConfig& c, int layer) {
  return (layer == 0 ? c.cond_sub_dim : c.sub_hidden) + 2 * c.subframe_len;
}

uint32_t Crc32(std::span<const uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in bounded pieces.
  size_t pos = 0;
  while (pos < bytes.size()) {
    const size_t n = std::min<size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<uint32_t>(crc);
}

}  // namespace

void ModelConfig::Validate() const {
  const auto fail = [](const std::string& what) {
    throw InvalidArgumentError("invalid model config: " + what);
  };
  if (cond_hidden < 1 || cond_hidden > 4096) fail("cond_hidden out of range");
  if (cond_sub_dim < 1 || cond_sub_dim > 4096) fail("cond_sub_dim out of range");
  if (sub_hidden < 1 || sub_hidden > 4096) fail("sub_hidden out of range");
  if (sub_layers < 1 || sub_layers > 16) fail("sub_layers out of range");
  if (subframe_len != kSubframeSize) fail("subframe_len must be 40");
  if (frame_subframes != kNbSubframes) fail("frame_subframes must be 4");
  if (feature_dim != kFeatureDim) fail("feature_dim must be 20");
  if (embed_dim != kEmbedDim) fail("embed_dim must be 12");
  if (pitch_min != kPitchMin || pitch_max != kPitchMax) {
    fail("pitch range must be [32, 320]");
  }
  if (embedding_kind != EmbeddingKind::kSinusoidal &&
      embedding_kind != EmbeddingKind::kLearnedTable) {
    fail("unknown embedding kind");
  }
}

ModelConfig ParseModelConfig(const std::string& text) {
  ModelConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw InvalidArgumentError("config line " + std::to_string(line_no) +
                                 ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "embedding_kind") {
      if (value == "sinusoidal") {
        config.embedding_kind = EmbeddingKind::kSinusoidal;
      } else if (value == "learned") {
        config.embedding_kind = EmbeddingKind::kLearnedTable;
      } else {
        throw InvalidArgumentError("unknown embedding_kind '" + value + "'");
      }
      continue;
    }
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw InvalidArgumentError("config line " + std::to_string(line_no) +
                                 ": '" + value + "' is not an integer");
    }
    if (key == "cond_hidden") config.cond_hidden = v;
    else if (key == "cond_sub_dim") config.cond_sub_dim = v;
    else if (key == "sub_hidden") config.sub_hidden = v;
    else if (key == "sub_layers") config.sub_layers = v;
    else if (key == "subframe_len") config.subframe_len = v;
    else if (key == "frame_subframes") config.frame_subframes = v;
    else if (key == "feature_dim") config.feature_dim = v;
    else if (key == "embed_dim") config.embed_dim = v;
    else if (key == "pitch_min") config.pitch_min = v;
    else if (key == "pitch_max") config.pitch_max = v;
    else throw InvalidArgumentError("unknown config key '" + key + "'");
  }
  config.Validate();
  return config;
}

std::string FormatModelConfig(const ModelConfig& c) {
  std::ostringstream out;
  out << "cond_hidden = " << c.cond_hidden << '\n'
      << "cond_sub_dim = " << c.cond_sub_dim << '\n'
      << "sub_hidden = " << c.sub_hidden << '\n'
      << "sub_layers = " << c.sub_layers << '\n'
      << "subframe_len = " << c.subframe_len << '\n'
      << "frame_subframes = " << c.frame_subframes << '\n'
      << "feature_dim = " << c.feature_dim << '\n'
      << "embed_dim = " << c.embed_dim << '\n'
      << "pitch_min = " << c.pitch_min << '\n'
      << "pitch_max = " << c.pitch_max << '\n'
      << "embedding_kind = "
      << (c.embedding_kind == EmbeddingKind::kSinusoidal ? "sinusoidal"
                                                         : "learned")
      << '\n';
  return out.str();
}

int64_t TensorRecord::elements() const {
  int64_t n = 1;
  for (uint32_t d : shape) n *= d;
  return n;
}

int TensorRecord::cols() const {
  const int64_t r = rows();
  return r == 0 ? 0 : static_cast<int>(elements() / r);
}

std::vector<float> TensorRecord::ToFloat() const {
  std::vector<float> out(static_cast<size_t>(elements()));
  if (dtype == DType::kF32) {
    for (size_t i = 0; i < out.size(); ++i) {
      const uint8_t* p = payload.data() + 4 * i;
      out[i] = std::bit_cast<float>(
          static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
          (static_cast<uint32_t>(p[2]) << 16) |
          (static_cast<uint32_t>(p[3]) << 24));
    }
  } else {
    const int c = cols();
    const auto q = AsInt8();
    for (size_t i = 0; i < out.size(); ++i) out[i] = q[i] * scales[i / c];
  }
  return out;
}

std::span<const int8_t> TensorRecord::AsInt8() const {
  return {reinterpret_cast<const int8_t*>(payload.data()), payload.size()};
}

TensorRecord TensorRecord::FromFloat(std::string name,
                                     std::vector<uint32_t> shape,
                                     std::span<const float> values) {
  TensorRecord t;
  t.name = std::move(name);
  t.shape = std::move(shape);
  if (values.size() != static_cast<size_t>(t.elements())) {
    throw InvalidArgumentError("tensor " + t.name + ": " +
                               std::to_string(values.size()) +
                               " values for shape " + ShapeString(t.shape));
  }
  t.payload.reserve(values.size() * 4);
  for (float v : values) {
    const uint32_t bits = std::bit_cast<uint32_t>(v);
    for (int i = 0; i < 4; ++i) t.payload.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  }
  return t;
}

std::vector<TensorSpec> RequiredTensors(const ModelConfig& c) {
  c.Validate();
  const uint32_t h = c.cond_hidden;
  const uint32_t s = c.cond_sub_dim;
  const uint32_t hs = c.sub_hidden;
  const uint32_t n = c.subframe_len;
  const uint32_t in = c.feature_dim + c.embed_dim;
  const uint32_t up = c.frame_subframes * s;
  std::vector<TensorSpec> specs = {
      {"cond.fc.weight", {h, in}, true},
      {"cond.fc.bias", {h}, false},
      {"cond.fc.glu", {h, h}, true},
      {"cond.conv.weight", {h, h, 3}, true},
      {"cond.conv.bias", {h}, false},
      {"cond.conv.glu", {h, h}, true},
      {"cond.up.weight", {up, h}, true},
      {"cond.up.bias", {up}, false},
      {"cond.up.glu", {s, s}, true},
      {"sub.gain.weight", {1, s}, false},
      {"sub.gain.bias", {1}, false},
      {"sub.gate.weight", {n, s}, false},
      {"sub.gate.bias", {n}, false},
      {"sub.out.weight", {n, hs + 2 * n}, true},
      {"sub.out.bias", {n}, false},
  };
  for (int l = 0; l < c.sub_layers; ++l) {
    const std::string p = "sub.layer" + std::to_string(l);
    specs.push_back({p + ".weight",
                     {hs, static_cast<uint32_t>(SubLayerInput(c, l))},
                     true});
    specs.push_back({p + ".bias", {hs}, false});
    specs.push_back({p + ".glu", {hs, hs}, true});
  }
  if (c.embedding_kind == EmbeddingKind::kLearnedTable) {
    specs.push_back({"embed.table",
                     {static_cast<uint32_t>(c.pitch_max - c.pitch_min + 1),
                      static_cast<uint32_t>(c.embed_dim)},
                     false});
  }
  std::sort(specs.begin(), specs.end(),
            [](const TensorSpec& a, const TensorSpec& b) { return a.name < b.name; });
  return specs;
}

const TensorRecord& Model::tensor(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) {
    throw ModelFormatError(Kind::kGraphMismatch, "missing tensor " + name);
  }
  return it->second;
}

void Model::Validate() const {
  try {
    config.Validate();
  } catch (const InvalidArgumentError& e) {
    throw ModelFormatError(Kind::kInvalidConfig, e.what());
  }
  const std::vector<TensorSpec> specs = RequiredTensors(config);
  std::set<std::string> required;
  for (const TensorSpec& spec : specs) required.insert(spec.name);
  for (const auto& [name, t] : tensors) {
    if (!required.count(name)) {
      throw ModelFormatError(Kind::kGraphMismatch,
                             "unexpected tensor " + name);
    }
  }
  for (const TensorSpec& spec : specs) {
    auto it = tensors.find(spec.name);
    if (it == tensors.end()) {
      throw ModelFormatError(Kind::kGraphMismatch, "missing tensor " + spec.name);
    }
    const TensorRecord& t = it->second;
    if (t.name != spec.name) {
      throw ModelFormatError(Kind::kCorrupt, "tensor name mismatch for " + spec.name);
    }
    if (t.shape != spec.shape) {
      throw ModelFormatError(Kind::kShapeMismatch,
                             spec.name + " has shape " + ShapeString(t.shape) +
                                 ", expected " + ShapeString(spec.shape));
    }
    const DType want = (precision == Precision::kInt8 && spec.quantizable)
                           ? DType::kI8
                           : DType::kF32;
    if (t.dtype != want) {
      throw ModelFormatError(Kind::kGraphMismatch,
                             spec.name + " has the wrong element type for a " +
                                 (precision == Precision::kInt8 ? "int8" : "float") +
                                 " model");
    }
    if (t.payload.size() != static_cast<size_t>(t.elements()) * DTypeSize(t.dtype)) {
      throw ModelFormatError(Kind::kCorrupt, spec.name + " payload size mismatch");
    }
    if (t.dtype == DType::kI8) {
      if (t.scales.size() != static_cast<size_t>(t.rows())) {
        throw ModelFormatError(Kind::kCorrupt, spec.name + " scale count mismatch");
      }
      for (float s : t.scales) {
        if (!(s > 0.0f) || !std::isfinite(s)) {
          throw ModelFormatError(Kind::kCorrupt, spec.name + " has a non-positive scale");
        }
      }
      for (int8_t q : t.AsInt8()) {
        if (q == -128) {
          throw ModelFormatError(Kind::kCorrupt, spec.name + " uses int8 value -128");
        }
      }
    } else {
      if (!t.scales.empty()) {
        throw ModelFormatError(Kind::kCorrupt, spec.name + " float tensor with scales");
      }
      for (float v : t.ToFloat()) {
        if (!std::isfinite(v)) {
          throw ModelFormatError(Kind::kCorrupt, spec.name + " has non-finite values");
        }
      }
    }
  }
}

std::vector<uint8_t> SaveModel(const Model& model) {
  model.Validate();
  Writer header;
  header.Bytes({reinterpret_cast<const uint8_t*>(kModelMagic), 4});
  header.U32(kModelVersion);
  header.U32(static_cast<uint32_t>(model.precision));
  for (uint32_t v : ConfigFields(model.config)) header.U32(v);
  header.U32(static_cast<uint32_t>(model.tensors.size()));

  Writer payload;
  for (const auto& [name, t] : model.tensors) {
    header.U16(static_cast<uint16_t>(name.size()));
    header.Bytes({reinterpret_cast<const uint8_t*>(name.data()), name.size()});
    header.U8(static_cast<uint8_t>(t.dtype));
    header.U8(static_cast<uint8_t>(t.shape.size()));
    for (uint32_t d : t.shape) header.U32(d);
    if (t.dtype == DType::kI8) {
      header.U64(payload.out().size());
      for (float s : t.scales) payload.F32(s);
    } else {
      header.U64(kNoScales);
    }
    header.U64(payload.out().size());
    payload.Bytes(t.payload);
  }
  header.U64(payload.out().size());
  header.U32(Crc32(payload.out()));
  std::vector<uint8_t> out = std::move(header.out());
  out.insert(out.end(), payload.out().begin(), payload.out().end());
  return out;
}

Model LoadModel(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 && (bytes.empty() ||
      std::memcmp(bytes.data(), kModelMagic, bytes.size()) == 0)) {
    throw ModelFormatError(Kind::kTruncated, "model container is truncated");
  }
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw ModelFormatError(Kind::kBadMagic, "not a model container (bad magic)");
  }
  r.Bytes(4);
  const uint32_t version = r.U32();
  if (version != kModelVersion) {
    throw ModelFormatError(Kind::kUnsupportedVersion,
                           "unsupported container version " + std::to_string(version));
  }
  Model model;
  const uint32_t precision = r.U32();
  if (precision > 1) {
    throw ModelFormatError(Kind::kCorrupt, "unknown precision " + std::to_string(precision));
  }
  model.precision = static_cast<Precision>(precision);
  std::array<uint32_t, kConfigFields> f{};
  for (uint32_t& v : f) v = r.U32();
  ModelConfig& c = model.config;
  c.cond_hidden = static_cast<int>(f[0]);
  c.cond_sub_dim = static_cast<int>(f[1]);
  c.sub_hidden = static_cast<int>(f[2]);
  c.sub_layers = static_cast<int>(f[3]);
  c.subframe_len = static_cast<int>(f[4]);
  c.frame_subframes = static_cast<int>(f[5]);
  c.feature_dim = static_cast<int>(f[6]);
  c.embed_dim = static_cast<int>(f[7]);
  c.pitch_min = static_cast<int>(f[8]);
  c.pitch_max = static_cast<int>(f[9]);
  c.embedding_kind = static_cast<EmbeddingKind>(f[10]);
  try {
    c.Validate();
  } catch (const InvalidArgumentError& e) {
    throw ModelFormatError(Kind::kInvalidConfig, e.what());
  }

  struct Entry {
    TensorRecord record;
    uint64_t scale_offset;
    uint64_t data_offset;
  };
  const uint32_t count = r.U32();
  if (count > 4096) {
    throw ModelFormatError(Kind::kCorrupt, "implausible tensor count");
  }
  std::vector<Entry> entries;
  for (uint32_t i = 0; i < count; ++i) {
    Entry e;
    const uint16_t name_len = r.U16();
    const auto name = r.Bytes(name_len);
    e.record.name.assign(name.begin(), name.end());
    const uint8_t dtype = r.U8();
    if (dtype > 1) {
      throw ModelFormatError(Kind::kCorrupt, "unknown dtype for " + e.record.name);
    }
    e.record.dtype = static_cast<DType>(dtype);
    const uint8_t rank = r.U8();
    for (uint8_t d = 0; d < rank; ++d) e.record.shape.push_back(r.U32());
    e.scale_offset = r.U64();
    e.data_offset = r.U64();
    entries.push_back(std::move(e));
  }
  const uint64_t payload_size = r.U64();
  const uint32_t crc = r.U32();
  if (r.remaining() < payload_size) {
    throw ModelFormatError(Kind::kTruncated, "model payload is truncated");
  }
  if (r.remaining() > payload_size) {
    throw ModelFormatError(Kind::kCorrupt, "trailing bytes after model payload");
  }
  const auto payload = r.Bytes(payload_size);
  if (Crc32(payload) != crc) {
    throw ModelFormatError(Kind::kChecksumMismatch, "model payload checksum mismatch");
  }

  for (Entry& e : entries) {
    TensorRecord& t = e.record;
    // Shapes are checked against the graph below; guard the arithmetic here.
    int64_t elements = 1;
    for (uint32_t d : t.shape) {
      elements *= d;
      if (elements > (int64_t{1} << 32)) {
        throw ModelFormatError(Kind::kCorrupt, "tensor " + t.name + " is too large");
      }
    }
    const uint64_t data_bytes = static_cast<uint64_t>(elements) * DTypeSize(t.dtype);
    if (e.data_offset > payload_size || payload_size - e.data_offset < data_bytes) {
      throw ModelFormatError(Kind::kCorrupt, "tensor " + t.name + " lies outside the payload");
    }
    const auto data = payload.subspan(e.data_offset, data_bytes);
    t.payload.assign(data.begin(), data.end());
    if (t.dtype == DType::kI8) {
      const uint64_t scale_bytes = 4ull * t.rows();
      if (e.scale_offset > payload_size || payload_size - e.scale_offset < scale_bytes) {
        throw ModelFormatError(Kind::kCorrupt, "scales of " + t.name + " lie outside the payload");
      }
      for (int i = 0; i < t.rows(); ++i) {
        const uint8_t* p = payload.data() + e.scale_offset + 4 * i;
        t.scales.push_back(std::bit_cast<float>(
            static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
            (static_cast<uint32_t>(p[2]) << 16) |
            (static_cast<uint32_t>(p[3]) << 24)));
      }
    } else if (e.scale_offset != kNoScales) {
      throw ModelFormatError(Kind::kCorrupt, "float tensor " + t.name + " has scales");
    }
    const std::string name = t.name;
    if (!model.tensors.emplace(name, std::move(t)).second) {
      throw ModelFormatError(Kind::kCorrupt, "duplicate tensor " + name);
    }
  }
  model.Validate();
  return model;
}

void SaveModelFile(const std::filesystem::path& path, const Model& model) {
  WriteFileBytes(path, SaveModel(model));
}

Model LoadModelFile(const std::filesystem::path& path) {
  return LoadModel(ReadFileBytes(path));
}

Model ModelFromFloatTensors(
    const ModelConfig& config,
    const std::map<std::string, std::vector<float>>& values) {
  Model model;
  model.config = config;
  const std::vector<TensorSpec> specs = RequiredTensors(config);
  for (const auto& [name, v] : values) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const TensorSpec& s) { return s.name == name; });
    if (!known) {
      throw ModelFormatError(Kind::kGraphMismatch, "unexpected tensor " + name);
    }
  }
  for (const TensorSpec& spec : specs) {
    auto it = values.find(spec.name);
    if (it == values.end()) {
      throw ModelFormatError(Kind::kGraphMismatch, "missing tensor " + spec.name);
    }
    TensorRecord t;
    try {
      t = TensorRecord::FromFloat(spec.name, spec.shape, it->second);
    } catch (const InvalidArgumentError& e) {
      throw ModelFormatError(Kind::kShapeMismatch, e.what());
    }
    model.tensors.emplace(spec.name, std::move(t));
  }
  model.Validate();
  return model;
}

Model RandomModel(const ModelConfig& config, uint64_t seed,
                  const RandomInit& init) {
  std::mt19937_64 rng(seed);
  std::map<std::string, std::vector<float>> values;
  for (const TensorSpec& spec : RequiredTensors(config)) {
    int64_t n = 1;
    for (uint32_t d : spec.shape) n *= d;
    std::vector<float> v(static_cast<size_t>(n));
    const bool is_bias = spec.name.ends_with(".bias");
    float range;
    if (spec.name == "embed.table") {
      range = 1.0f;
    } else if (is_bias) {
      range = init.bias_range;
    } else {
      const int64_t fan_in = n / spec.shape[0];
      range = init.weight_gain * std::sqrt(3.0f / static_cast<float>(fan_in));
    }
    std::uniform_real_distribution<float> dist(-range, range);
    for (float& x : v) x = dist(rng);
    if (spec.name == "sub.gain.bias") v[0] = init.gain_bias;
    values.emplace(spec.name, std::move(v));
  }
  return ModelFromFloatTensors(config, values);
}

Model QuantizeModel(const Model& model) {
  model.Validate();
  if (model.precision == Precision::kInt8) return model;
  Model out;
  out.config = model.config;
  out.precision = Precision::kInt8;
  for (const TensorSpec& spec : RequiredTensors(model.config)) {
    const TensorRecord& src = model.tensor(spec.name);
    if (!spec.quantizable) {
      out.tensors.emplace(spec.name, src);
      continue;
    }
    const std::vector<float> w = src.ToFloat();
    const int rows = src.rows();
    const int cols = src.cols();
    TensorRecord t;
    t.name = spec.name;
    t.dtype = DType::kI8;
    t.shape = src.shape;
    t.scales.resize(rows);
    t.payload.resize(w.size());
    QuantizeRows(rows, cols, w,
                 {reinterpret_cast<int8_t*>(t.payload.data()), t.payload.size()},
                 t.scales);
    out.tensors.emplace(spec.name, std::move(t));
  }
  return out;
}

Model DequantizeModel(const Model& model) {
  model.Validate();
  if (model.precision == Precision::kFloat) return model;
  Model out;
  out.config = model.config;
  out.precision = Precision::kFloat;
  for (const auto& [name, t] : model.tensors) {
    out.tensors.emplace(name, TensorRecord::FromFloat(name, t.shape, t.ToFloat()));
  }
  return out;
}

Matrix ToMatrix(const TensorRecord& t) {
  if (t.dtype == DType::kI8) {
    return Matrix::Int8(t.rows(), t.cols(), t.AsInt8(), t.scales);
  }
  return Matrix::Float(t.rows(), t.cols(), t.ToFloat());
}

int64_t CountDenseParams(int in, int out) {
  return int64_t{in} * out + out;
}

int64_t CountParams(const ModelConfig& config) {
  int64_t total = 0;
  for (const TensorSpec& spec : RequiredTensors(config)) {
    int64_t n = 1;
    for (uint32_t d : spec.shape) n *= d;
    total += n;
  }
  return total;
}

FlopCount CountFlops(const ModelConfig& c) {
  c.Validate();
  constexpr double kFrameRate = static_cast<double>(kSampleRate) / kFrameSize;
  constexpr double kSubframeRate = kFrameRate * kNbSubframes;
  const double h = c.cond_hidden;
  const double s = c.cond_sub_dim;
  const double hs = c.sub_hidden;
  const double n = c.subframe_len;
  const double in = c.feature_dim + c.embed_dim;
  const double f = c.frame_subframes;

  // Multiply-adds per frame / per subframe.
  const double cond_macs = in * h + h * h        // fc + GLU
                           + 3 * h * h + h * h   // conv + GLU
                           + f * s * h + f * s * s;  // upsampling + GLU
  double sub_macs = s + n * s;  // gain and gate neurons
  for (int l = 0; l < c.sub_layers; ++l) {
    sub_macs += SubLayerInput(c, l) * hs + hs * hs;
  }
  sub_macs += (hs + 2 * n) * n;

  // Bias + activation per dense output, sigmoid + product per GLU output.
  const double cond_elem = 2 * (h + h + f * s) + 2 * (h + h + f * s);
  const double sub_elem = 2 * (1 + n)                 // gain, gate
                          + 2 * n + n                 // feedback normalization, gating
                          + c.sub_layers * 4 * hs     // hidden layers
                          + 2 * n + n;                // output tanh and gain
  const double deemph_per_sample = 2;

  FlopCount out;
  out.cond_per_second = 2 * cond_macs * kFrameRate;
  out.subframe_per_second = 2 * sub_macs * kSubframeRate;
  out.elementwise_per_second = cond_elem * kFrameRate + sub_elem * kSubframeRate +
                               deemph_per_sample * kSampleRate;
  return out;
}

}  // namespace frgn
