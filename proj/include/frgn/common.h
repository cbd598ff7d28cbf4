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

#ifndef FRGN_COMMON_H_
#define FRGN_COMMON_H_

#include <functional>
#include <stdexcept>
#include <string>

namespace frgn {

inline constexpr int kSampleRate = 16000;
inline constexpr int kFrameSize = 160;     // 10 ms
inline constexpr int kSubframeSize = 40;   // 2.5 ms
inline constexpr int kNbSubframes = 4;
inline constexpr int kNbBands = 18;
inline constexpr int kFeatureDim = 20;     // 18 BFCC + period + voicing
inline constexpr int kEmbedDim = 12;
inline constexpr int kCondInputDim = kFeatureDim + kEmbedDim;
inline constexpr int kPitchMin = 32;       // 500 Hz
inline constexpr int kPitchMax = 320;      // 50 Hz
inline constexpr int kDefaultPitch = 160;
inline constexpr double kEmphasisCoef = 0.85;

// Minimum number of past synthesized samples needed by the pitch predictor.
inline constexpr int kHistorySize = kPitchMax + kSubframeSize;

static_assert(kNbSubframes * kSubframeSize == kFrameSize);
static_assert(kCondInputDim == 32);

enum class ErrorKind {
  kInvalidArgument,
  kFormat,   // malformed WAV / feature file / model container
  kNumeric,  // NaN or Inf produced or consumed
};

// Base exception for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorKind::kFormat, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

// Warnings go to stderr unless a handler is installed. Passing an empty
// function restores the default.
using WarningHandler = std::function<void(const std::string&)>;
void SetWarningHandler(WarningHandler handler);
void Warn(const std::string& message);

}  // namespace frgn

#endif  // FRGN_COMMON_H_
