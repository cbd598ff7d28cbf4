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

#include "frgn/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace frgn {
namespace {

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool TagIs(const uint8_t* p, const char* tag) {
  return std::memcmp(p, tag, 4) == 0;
}

constexpr uint16_t kFormatPcm = 1;

}  // namespace

Signal DecodeWav(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes.data(), "RIFF") ||
      !TagIs(bytes.data() + 8, "WAVE")) {
    throw FormatError("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    if (TagIs(chunk, "fmt ")) {
      if (size < 16 || body + 16 > bytes.size()) {
        throw FormatError("truncated fmt chunk");
      }
      const uint8_t* f = bytes.data() + body;
      const uint16_t format = ReadU16(f);
      const uint16_t channels = ReadU16(f + 2);
      const uint32_t rate = ReadU32(f + 4);
      const uint16_t bits = ReadU16(f + 14);
      if (format != kFormatPcm) {
        throw FormatError("unsupported WAV encoding " + std::to_string(format) +
                          " (expected PCM)");
      }
      if (channels != 1) {
        throw FormatError("expected mono audio, got " +
                          std::to_string(channels) + " channels");
      }
      if (rate != static_cast<uint32_t>(kSampleRate)) {
        throw FormatError("expected 16000 Hz audio, got " +
                          std::to_string(rate) + " Hz");
      }
      if (bits != 16) {
        throw FormatError("expected 16-bit samples, got " +
                          std::to_string(bits) + "-bit");
      }
      have_fmt = true;
    } else if (TagIs(chunk, "data")) {
      if (!have_fmt) throw FormatError("data chunk before fmt chunk");
      // Some writers leave the size unset on streamed files; clamp to what is
      // actually present.
      const size_t avail = bytes.size() - body;
      const size_t n_bytes = std::min<size_t>(size, avail) & ~size_t{1};
      Signal signal;
      signal.samples.resize(n_bytes / 2);
      for (size_t i = 0; i < signal.samples.size(); ++i) {
        const auto v = static_cast<int16_t>(ReadU16(bytes.data() + body + 2 * i));
        signal.samples[i] = static_cast<float>(v) / 32768.0f;
      }
      return signal;
    }
    pos = body + size + (size & 1);
  }
  throw FormatError(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

std::vector<uint8_t> EncodeWav(std::span<const float> samples) {
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, kSampleRate);
  PutU32(out, kSampleRate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (float s : samples) {
    float scaled = std::isfinite(s) ? std::nearbyint(s * 32768.0f) : 0.0f;
    scaled = std::clamp(scaled, -32768.0f, 32767.0f);
    PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
  }
  return out;
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgumentError("cannot open " + path.string());
  }
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgumentError("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgumentError("short write to " + path.string());
}

Signal ReadWav(const std::filesystem::path& path) {
  return DecodeWav(ReadFileBytes(path));
}

void WriteWav(const std::filesystem::path& path,
              std::span<const float> samples) {
  WriteFileBytes(path, EncodeWav(samples));
}

}  // namespace frgn
