// Copyright 2026 The coughseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COUGHSEG_TESTS_TEST_SUPPORT_HPP_
#define COUGHSEG_TESTS_TEST_SUPPORT_HPP_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>

#include "coughseg/audio_clip.hpp"

namespace coughseg::testing {

/// Directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("coughseg-test-" + std::to_string(stamp) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Constant background, one constant-amplitude burst, constant background.
template <typename Scalar = float>
BasicAudioClip<Scalar> burst_clip(int rate, double pre_s, double burst_s, double post_s,
                                  Scalar burst_amp, Scalar background_amp,
                                  std::string id = "synthetic") {
  const auto pre = static_cast<Eigen::Index>(std::llround(rate * pre_s));
  const auto burst = static_cast<Eigen::Index>(std::llround(rate * burst_s));
  const auto post = static_cast<Eigen::Index>(std::llround(rate * post_s));
  BasicAudioClip<Scalar> clip;
  clip.sample_rate = rate;
  clip.source_id = std::move(id);
  clip.samples = SampleArray<Scalar>::Constant(pre + burst + post, background_amp);
  clip.samples.segment(pre, burst).setConstant(burst_amp);
  return clip;
}

/// Noise-like clip with several decaying bursts; used for property tests.
inline AudioClip random_cough_clip(std::mt19937& rng, int rate = 16000) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double seconds = 1.0 + 4.0 * uni(rng);
  AudioClip clip;
  clip.sample_rate = rate;
  clip.source_id = "random";
  const auto n = static_cast<Eigen::Index>(seconds * rate);
  clip.samples.resize(n);
  const double floor = 0.002 + 0.02 * uni(rng);
  for (Eigen::Index i = 0; i < n; ++i) clip.samples[i] = static_cast<float>(floor * noise(rng));
  const int bursts = 1 + static_cast<int>(uni(rng) * 4);
  for (int b = 0; b < bursts; ++b) {
    const auto start = static_cast<Eigen::Index>(uni(rng) * n * 0.9);
    const auto len = static_cast<Eigen::Index>((0.05 + 0.6 * uni(rng)) * rate);
    const double amp = 0.1 + 0.8 * uni(rng);
    for (Eigen::Index i = start; i < std::min(n, start + len); ++i) {
      const double decay = std::exp(-1.5 * double(i - start) / double(len));
      const double x = clip.samples[i] + amp * decay * (2.0 * uni(rng) - 1.0);
      clip.samples[i] = static_cast<float>(std::clamp(x, -1.0, 1.0));
    }
  }
  return clip;
}

}  // namespace coughseg::testing

#endif  // COUGHSEG_TESTS_TEST_SUPPORT_HPP_
