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

// Command-line front end: feature analysis, synthesis, copy-synthesis,
// benchmarking and model container utilities.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "frgn/engine.h"
#include "frgn/features.h"
#include "frgn/model.h"
#include "frgn/wav.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kFormat = 2, kNumeric = 3 };

std::shared_ptr<const frgn::Vocoder> LoadVocoder(const std::string& path,
                                                 bool force_float) {
  frgn::Model model = frgn::LoadModelFile(path);
  if (force_float) model = frgn::DequantizeModel(model);
  return std::make_shared<const frgn::Vocoder>(model);
}

int Inspect(const std::string& path) {
  const auto bytes = frgn::ReadFileBytes(path);
  const frgn::Model model = frgn::LoadModel(bytes);
  const frgn::FlopCount flops = frgn::CountFlops(model.config);
  std::printf("file: %s\n", path.c_str());
  std::printf("precision: %s\n",
              model.precision == frgn::Precision::kInt8 ? "int8" : "float");
  std::printf("%s", frgn::FormatModelConfig(model.config).c_str());
  std::printf("parameters: %lld\n",
              static_cast<long long>(frgn::CountParams(model.config)));
  std::printf("flops: %.4g (%.3f GFLOPS; cond %.3g, subframe %.3g, "
              "elementwise %.3g)\n",
              flops.total(), flops.total() * 1e-9, flops.cond_per_second,
              flops.subframe_per_second, flops.elementwise_per_second);
  std::printf("size: %zu bytes\n", bytes.size());
  std::printf("tensors: %zu\n", model.tensors.size());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-complexity neural vocoder"};
  app.require_subcommand(1);

  std::string in_path, out_path, model_path, config_path;
  double seconds = 30.0;
  bool use_float = false;
  bool to_int8 = false;
  uint64_t seed = 1;

  auto* analyze = app.add_subcommand("analyze", "Compute features of a WAV file");
  analyze->add_option("in", in_path, "16 kHz mono PCM16 WAV")->required();
  analyze->add_option("out", out_path, "feature file (.ffe)")->required();

  auto* synthesize = app.add_subcommand("synthesize", "Synthesize audio from features");
  synthesize->add_option("model", model_path, "model container (.frgn)")->required();
  synthesize->add_option("in", in_path, "feature file (.ffe)")->required();
  synthesize->add_option("out", out_path, "output WAV")->required();

  auto* copysynth = app.add_subcommand("copysynth", "Analyze and resynthesize a WAV file");
  copysynth->add_option("model", model_path, "model container (.frgn)")->required();
  copysynth->add_option("in", in_path, "input WAV")->required();
  copysynth->add_option("out", out_path, "output WAV")->required();

  auto* bench = app.add_subcommand("bench", "Measure synthesis speed");
  bench->add_option("model", model_path, "model container (.frgn)")->required();
  bench->add_option("--seconds", seconds, "audio duration to synthesize")
      ->check(CLI::PositiveNumber);
  bench->add_flag("--float", use_float, "run the float path of an int8 model");

  auto* quantize = app.add_subcommand("quantize", "Convert a float model to int8");
  quantize->add_option("in", in_path, "float model")->required();
  quantize->add_option("out", out_path, "int8 model")->required();

  auto* inspect = app.add_subcommand("inspect", "Print model configuration and budget");
  inspect->add_option("model", model_path, "model container (.frgn)")->required();

  auto* init = app.add_subcommand("init", "Write a randomly initialized model");
  init->add_option("out", out_path, "output model")->required();
  init->add_option("--config", config_path, "key = value config file");
  init->add_option("--seed", seed, "random seed");
  init->add_flag("--int8", to_int8, "quantize before writing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) {
      const frgn::Signal signal = frgn::ReadWav(in_path);
      const auto frames = frgn::Analyze(signal.samples);
      frgn::WriteFeatureFile(out_path, frames);
      std::printf("%zu frames\n", frames.size());
    } else if (*synthesize) {
      const auto vocoder = LoadVocoder(model_path, false);
      const auto frames = frgn::ReadFeatureFile(in_path);
      frgn::WriteWav(out_path, frgn::Synthesize(vocoder, frames));
    } else if (*copysynth) {
      const auto vocoder = LoadVocoder(model_path, false);
      const frgn::Signal out = frgn::CopySynthesis(vocoder, frgn::ReadWav(in_path));
      frgn::WriteWav(out_path, out.samples);
    } else if (*bench) {
      const auto vocoder = LoadVocoder(model_path, use_float);
      const frgn::BenchResult r = frgn::Bench(vocoder, seconds);
      std::printf("precision: %s\n",
                  vocoder->precision() == frgn::Precision::kInt8 ? "int8" : "float");
      std::printf("audio: %.2f s, compute: %.3f s\n", r.audio_seconds,
                  r.compute_seconds);
      std::printf("rtf: %.5f (%.3f%% of one core)\n", r.rtf, 100.0 * r.rtf);
      std::printf("samples/s: %.0f\n", r.samples_per_sec);
      std::printf("nominal GFLOPS: %.3f\n", r.flops_nominal * 1e-9);
    } else if (*quantize) {
      frgn::SaveModelFile(out_path, frgn::QuantizeModel(frgn::LoadModelFile(in_path)));
    } else if (*inspect) {
      return Inspect(model_path);
    } else if (*init) {
      frgn::ModelConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw frgn::InvalidArgumentError("cannot open " + config_path);
        std::stringstream text;
        text << in.rdbuf();
        config = frgn::ParseModelConfig(text.str());
      }
      frgn::Model model = frgn::RandomModel(config, seed);
      if (to_int8) model = frgn::QuantizeModel(model);
      frgn::SaveModelFile(out_path, model);
    }
  } catch (const frgn::Error& e) {
    std::fprintf(stderr, "frgn: %s\n", e.what());
    switch (e.kind()) {
      case frgn::ErrorKind::kFormat:
        return kFormat;
      case frgn::ErrorKind::kNumeric:
        return kNumeric;
      case frgn::ErrorKind::kInvalidArgument:
        return kUsage;
    }
  }
  return kOk;
}
