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

#ifndef COUGHSEG_AUDIO_CLIP_HPP_
#define COUGHSEG_AUDIO_CLIP_HPP_

#include <cmath>
#include <string>
#include <type_traits>

#include <Eigen/Core>

#include "coughseg/errors.hpp"

namespace coughseg {

template <typename Scalar>
using SampleArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Wider type used for sums of squares so float clips accumulate in double.
template <typename Scalar>
using AccumulatorOf =
    std::conditional_t<(sizeof(Scalar) < sizeof(double)), double, Scalar>;

/// Mono audio with samples in [-1, 1].
template <typename Scalar>
struct BasicAudioClip {
  using ScalarType = Scalar;

  SampleArray<Scalar> samples;
  int sample_rate = 0;
  std::string source_id;

  Eigen::Index size() const { return samples.size(); }
  bool empty() const { return samples.size() == 0; }

  /// Duration of `count` samples in milliseconds at this clip's rate.
  double duration_ms(Eigen::Index count) const {
    return static_cast<double>(count) * 1000.0 / sample_rate;
  }
};

using AudioClip = BasicAudioClip<float>;
using AudioClipD = BasicAudioClip<double>;

/// Throws ValidationError unless the rate is positive and every sample is
/// finite and inside [-1, 1].
template <typename Scalar>
void validate_clip(const BasicAudioClip<Scalar>& clip) {
  if (clip.sample_rate <= 0) {
    throw ValidationError("clip '" + clip.source_id +
                          "': sample rate must be positive");
  }
  for (Eigen::Index i = 0; i < clip.samples.size(); ++i) {
    const Scalar x = clip.samples[i];
    if (!std::isfinite(x) || x < Scalar(-1) || x > Scalar(1)) {
      throw ValidationError("clip '" + clip.source_id + "': sample " +
                            std::to_string(i) + " outside [-1, 1]");
    }
  }
}

/// Scales the clip so its peak magnitude is exactly 1. All-zero and empty
/// clips are returned unchanged.
template <typename Scalar>
BasicAudioClip<Scalar> peak_normalize(const BasicAudioClip<Scalar>& clip) {
  BasicAudioClip<Scalar> out = clip;
  if (clip.empty()) return out;
  const Scalar peak = clip.samples.abs().maxCoeff();
  if (peak == Scalar(0)) return out;
  // Division (not multiplication by 1/peak) keeps the peak sample at exactly
  // +-1 and makes the result independent of power-of-two gain.
  out.samples = clip.samples / peak;
  return out;
}

/// Copy of `clip` restricted to [begin, end).
template <typename Scalar>
BasicAudioClip<Scalar> slice(const BasicAudioClip<Scalar>& clip,
                             Eigen::Index begin, Eigen::Index end) {
  BasicAudioClip<Scalar> out;
  out.sample_rate = clip.sample_rate;
  out.source_id = clip.source_id;
  out.samples = clip.samples.segment(begin, end - begin);
  return out;
}

}  // namespace coughseg

#endif  // COUGHSEG_AUDIO_CLIP_HPP_
