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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "frgn/dsp.h"
#include "frgn/engine.h"
#include "frgn/features.h"
#include "frgn/model.h"
#include "frgn/wav.h"

namespace py = pybind11;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

std::vector<float> ToVector(const FloatArray& a) {
  return std::vector<float>(a.data(), a.data() + a.size());
}

py::array_t<float> ToArray(const std::vector<float>& v) {
  return py::array_t<float>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<float> FramesToArray(const std::vector<frgn::FeatureFrame>& frames) {
  py::array_t<float> out({static_cast<py::ssize_t>(frames.size()),
                          static_cast<py::ssize_t>(frgn::kFeatureDim)});
  auto m = out.mutable_unchecked<2>();
  for (size_t i = 0; i < frames.size(); ++i) {
    const auto values = frames[i].ToArray();
    for (int j = 0; j < frgn::kFeatureDim; ++j) m(i, j) = values[j];
  }
  return out;
}

std::vector<frgn::FeatureFrame> ArrayToFrames(const FloatArray& a) {
  if (a.ndim() != 2 || a.shape(1) != frgn::kFeatureDim) {
    throw py::value_error("features must have shape (frames, 20)");
  }
  std::vector<frgn::FeatureFrame> frames(a.shape(0));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    frames[i] = frgn::FeatureFrame::FromArray(
        std::span<const float, frgn::kFeatureDim>(a.data(i, 0), frgn::kFeatureDim));
  }
  return frames;
}

py::bytes ToBytes(const std::vector<uint8_t>& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<uint8_t> FromBytes(const py::bytes& b) {
  const std::string s = b;
  return std::vector<uint8_t>(s.begin(), s.end());
}

}  // namespace

PYBIND11_MODULE(_frgn, m) {
  m.doc() = "Low-complexity neural vocoder engine";

  py::register_exception<frgn::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<frgn::NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<frgn::InvalidArgumentError>(m, "InvalidArgumentError",
                                                     PyExc_ValueError);

  m.attr("SAMPLE_RATE") = frgn::kSampleRate;
  m.attr("FRAME_SIZE") = frgn::kFrameSize;
  m.attr("SUBFRAME_SIZE") = frgn::kSubframeSize;
  m.attr("FEATURE_DIM") = frgn::kFeatureDim;
  m.attr("EMBED_DIM") = frgn::kEmbedDim;
  m.attr("PITCH_MIN") = frgn::kPitchMin;
  m.attr("PITCH_MAX") = frgn::kPitchMax;
  m.attr("EMPHASIS") = frgn::kEmphasisCoef;

  // Signal primitives.
  m.def("preemphasis", [](const FloatArray& x, double alpha, double mem) {
    frgn::EmphasisState state{mem};
    auto y = frgn::Preemphasis(ToVector(x), alpha, state);
    return py::make_tuple(ToArray(y), state.mem);
  }, py::arg("x"), py::arg("alpha") = frgn::kEmphasisCoef, py::arg("mem") = 0.0);
  m.def("deemphasis", [](const FloatArray& x, double alpha, double mem) {
    frgn::EmphasisState state{mem};
    auto y = frgn::Deemphasis(ToVector(x), alpha, state);
    return py::make_tuple(ToArray(y), state.mem);
  }, py::arg("x"), py::arg("alpha") = frgn::kEmphasisCoef, py::arg("mem") = 0.0);
  m.def("stft_mag", [](const FloatArray& x, int window_size) {
    const frgn::Spectrogram s = frgn::StftMagnitude(ToVector(x), window_size);
    py::array_t<float> out({s.frames, s.bins});
    std::copy(s.mag.begin(), s.mag.end(), out.mutable_data());
    return out;
  }, py::arg("x"), py::arg("window_size"));
  m.def("decode_wav", [](const py::bytes& b) {
    return ToArray(frgn::DecodeWav(FromBytes(b)).samples);
  });
  m.def("encode_wav", [](const FloatArray& x) {
    return ToBytes(frgn::EncodeWav(ToVector(x)));
  });

  // Features.
  m.def("analyze", [](const FloatArray& x) {
    return FramesToArray(frgn::Analyze(ToVector(x)));
  }, "Features (frames, 20): 18 BFCC, pitch period, voicing.");
  m.def("pitch_embedding", [](float period) {
    const auto e = frgn::SinusoidalPitchEmbedding(period);
    return ToArray(std::vector<float>(e.begin(), e.end()));
  });
  m.def("normalize_period", &frgn::NormalizePeriod);
  m.def("encode_features", [](const FloatArray& a) {
    return ToBytes(frgn::EncodeFeatures(ArrayToFrames(a)));
  });
  m.def("decode_features", [](const py::bytes& b) {
    return FramesToArray(frgn::DecodeFeatures(FromBytes(b)));
  });

  // Model container.
  py::enum_<frgn::EmbeddingKind>(m, "EmbeddingKind")
      .value("SINUSOIDAL", frgn::EmbeddingKind::kSinusoidal)
      .value("LEARNED", frgn::EmbeddingKind::kLearnedTable);
  py::enum_<frgn::Precision>(m, "Precision")
      .value("FLOAT", frgn::Precision::kFloat)
      .value("INT8", frgn::Precision::kInt8);

  py::class_<frgn::ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("cond_hidden", &frgn::ModelConfig::cond_hidden)
      .def_readwrite("cond_sub_dim", &frgn::ModelConfig::cond_sub_dim)
      .def_readwrite("sub_hidden", &frgn::ModelConfig::sub_hidden)
      .def_readwrite("sub_layers", &frgn::ModelConfig::sub_layers)
      .def_readwrite("embedding_kind", &frgn::ModelConfig::embedding_kind)
      .def_readonly("subframe_len", &frgn::ModelConfig::subframe_len)
      .def_readonly("frame_subframes", &frgn::ModelConfig::frame_subframes)
      .def_readonly("feature_dim", &frgn::ModelConfig::feature_dim)
      .def_readonly("embed_dim", &frgn::ModelConfig::embed_dim)
      .def_readonly("pitch_min", &frgn::ModelConfig::pitch_min)
      .def_readonly("pitch_max", &frgn::ModelConfig::pitch_max)
      .def("validate", &frgn::ModelConfig::Validate)
      .def_static("parse", &frgn::ParseModelConfig)
      .def("__str__", &frgn::FormatModelConfig)
      .def(py::self == py::self);

  m.def("required_tensors", [](const frgn::ModelConfig& c) {
    py::list out;
    for (const auto& spec : frgn::RequiredTensors(c)) {
      out.append(py::make_tuple(spec.name, spec.shape, spec.quantizable));
    }
    return out;
  }, "List of (name, shape, quantizable) for every tensor of the architecture.");
  m.def("count_params", &frgn::CountParams);
  m.def("count_flops", [](const frgn::ModelConfig& c) {
    const frgn::FlopCount f = frgn::CountFlops(c);
    py::dict d;
    d["cond"] = f.cond_per_second;
    d["subframe"] = f.subframe_per_second;
    d["elementwise"] = f.elementwise_per_second;
    d["total"] = f.total();
    return d;
  });

  py::class_<frgn::RandomInit>(m, "RandomInit")
      .def(py::init<>())
      .def_readwrite("weight_gain", &frgn::RandomInit::weight_gain)
      .def_readwrite("bias_range", &frgn::RandomInit::bias_range)
      .def_readwrite("gain_bias", &frgn::RandomInit::gain_bias);

  py::class_<frgn::Model>(m, "Model")
      .def_readonly("config", &frgn::Model::config)
      .def_readonly("precision", &frgn::Model::precision)
      .def_static("load", [](const py::bytes& b) { return frgn::LoadModel(FromBytes(b)); })
      .def_static("load_file", [](const std::string& p) { return frgn::LoadModelFile(p); })
      .def("save", [](const frgn::Model& model) { return ToBytes(frgn::SaveModel(model)); })
      .def("save_file", [](const frgn::Model& model, const std::string& p) {
        frgn::SaveModelFile(p, model);
      })
      .def_static("from_tensors",
                  [](const frgn::ModelConfig& c, const py::dict& tensors) {
                    std::map<std::string, std::vector<float>> values;
                    for (const auto& [k, v] : tensors) {
                      values[py::cast<std::string>(k)] =
                          ToVector(py::cast<FloatArray>(v));
                    }
                    return frgn::ModelFromFloatTensors(c, values);
                  },
                  "Float model from {name: array} (row-major, any shape with "
                  "the right element count).")
      .def_static("random", &frgn::RandomModel, py::arg("config"),
                  py::arg("seed") = 1, py::arg("init") = frgn::RandomInit{})
      .def("tensors", [](const frgn::Model& model) {
        py::dict out;
        for (const auto& [name, t] : model.tensors) {
          std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
          py::array_t<float> a(shape);
          const auto v = t.ToFloat();
          std::copy(v.begin(), v.end(), a.mutable_data());
          out[py::str(name)] = a;
        }
        return out;
      }, "Dequantized tensors as float32 arrays.")
      .def("quantize", &frgn::QuantizeModel)
      .def("dequantize", &frgn::DequantizeModel)
      .def(py::self == py::self);

  // Synthesis.
  py::class_<frgn::Vocoder, std::shared_ptr<frgn::Vocoder>>(m, "Vocoder")
      .def(py::init<const frgn::Model&>())
      .def_property_readonly("config", &frgn::Vocoder::config)
      .def_property_readonly("precision", &frgn::Vocoder::precision);

  py::class_<frgn::SynthStream>(m, "Stream")
      .def(py::init([](std::shared_ptr<frgn::Vocoder> v) {
        return frgn::SynthStream(std::move(v));
      }))
      .def("reset", &frgn::SynthStream::Reset)
      .def("synthesize_frame", [](frgn::SynthStream& s, const FloatArray& f) {
        if (f.size() != frgn::kFeatureDim) {
          throw py::value_error("a feature frame has 20 values");
        }
        const auto out = s.SynthesizeFrame(frgn::FeatureFrame::FromArray(
            std::span<const float, frgn::kFeatureDim>(f.data(), frgn::kFeatureDim)));
        return ToArray(std::vector<float>(out.begin(), out.end()));
      })
      .def("synthesize", [](frgn::SynthStream& s, const FloatArray& f) {
        return ToArray(s.Synthesize(ArrayToFrames(f)));
      })
      .def_property_readonly("frames_done", &frgn::SynthStream::frames_done)
      .def_property_readonly("poisoned", &frgn::SynthStream::poisoned);

  m.def("synthesize", [](std::shared_ptr<frgn::Vocoder> v, const FloatArray& f) {
    return ToArray(frgn::Synthesize(std::move(v), ArrayToFrames(f)));
  }, py::arg("vocoder"), py::arg("features"));
  m.def("copy_synthesis", [](std::shared_ptr<frgn::Vocoder> v, const FloatArray& x) {
    frgn::Signal in;
    in.samples = ToVector(x);
    return ToArray(frgn::CopySynthesis(std::move(v), in).samples);
  }, py::arg("vocoder"), py::arg("signal"));
  m.def("pseudo_features", [](int frames, uint64_t seed) {
    return FramesToArray(frgn::PseudoFeatures(frames, seed));
  }, py::arg("frames"), py::arg("seed") = 1);
  m.def("bench", [](std::shared_ptr<frgn::Vocoder> v, double seconds) {
    const frgn::BenchResult r = frgn::Bench(std::move(v), seconds);
    py::dict d;
    d["rtf"] = r.rtf;
    d["flops_nominal"] = r.flops_nominal;
    d["samples_per_sec"] = r.samples_per_sec;
    d["audio_seconds"] = r.audio_seconds;
    d["compute_seconds"] = r.compute_seconds;
    return d;
  }, py::arg("vocoder"), py::arg("seconds") = 5.0);
}
