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

#ifndef FRGN_WAV_H_
#define FRGN_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "frgn/common.h"

namespace frgn {

// Mono audio at kSampleRate, samples nominally in [-1, 1).
struct Signal {
  std::vector<float> samples;
  int sample_rate = kSampleRate;
};

// Decodes a RIFF/WAVE PCM16 mono 16 kHz file. Unknown chunks are skipped.
// Throws FormatError with a description of what did not match.
Signal DecodeWav(std::span<const uint8_t> bytes);

// Encodes PCM16 mono 16 kHz. Samples are scaled by 32768, rounded to nearest
// and saturated to the int16 range.
std::vector<uint8_t> EncodeWav(std::span<const float> samples);

Signal ReadWav(const std::filesystem::path& path);
void WriteWav(const std::filesystem::path& path, std::span<const float> samples);

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

}  // namespace frgn

#endif  // FRGN_WAV_H_
