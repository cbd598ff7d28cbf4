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

#ifndef FRGN_TESTS_TEST_UTIL_H_
#define FRGN_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <span>
#include <vector>

namespace frgn::testing {

std::vector<float> RandomUniform(size_t n, float lo, float hi, uint64_t seed);
std::vector<float> WhiteNoise(size_t n, float stddev, uint64_t seed);
std::vector<float> Sine(size_t n, double freq_hz, double amplitude,
                        double phase = 0.0);

// Exactly `period`-periodic signal with random harmonic amplitudes and
// phases (fundamental always present).
std::vector<float> PeriodicSignal(size_t n, int period, uint64_t seed);

// Speech-like test utterance: glottal pulse train with a gliding pitch
// through a few resonators, alternating with noise bursts and pauses.
std::vector<float> SyntheticUtterance(double seconds, uint64_t seed);

// Mean over 160-sample segments of 10 log10(ref energy / error energy),
// each segment clamped to [-10, 35] dB. Segments with ref energy below
// `min_energy` are skipped.
double SegmentalSnrDb(std::span<const float> ref, std::span<const float> test,
                      double min_energy = 1e-6);

double RelativeL2(std::span<const float> ref, std::span<const float> test);

}  // namespace frgn::testing

#endif  // FRGN_TESTS_TEST_UTIL_H_
