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

#ifndef COUGHSEG_SEGMENTATION_HPP_
#define COUGHSEG_SEGMENTATION_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "coughseg/audio_clip.hpp"
#include "coughseg/errors.hpp"

namespace coughseg {

enum class Method { kHysteresis, kRmsThreshold, kManual };

inline std::string_view method_name(Method method) {
  switch (method) {
    case Method::kHysteresis:
      return "hysteresis";
    case Method::kRmsThreshold:
      return "rms_threshold";
    case Method::kManual:
      return "manual";
  }
  return "unknown";
}

/// Accepts the canonical names plus "rms" as shorthand for rms_threshold.
inline Method parse_method(std::string_view name) {
  if (name == "hysteresis") return Method::kHysteresis;
  if (name == "rms_threshold" || name == "rms") return Method::kRmsThreshold;
  if (name == "manual") return Method::kManual;
  throw ValidationError("unknown segmentation method '" + std::string(name) +
                        "'");
}

/// Half-open sample range [start_sample, end_sample) of one candidate cough.
struct SegmentBounds {
  Eigen::Index start_sample = 0;
  Eigen::Index end_sample = 0;
  Method method = Method::kHysteresis;
  std::string source_id;

  Eigen::Index length() const { return end_sample - start_sample; }
  bool operator==(const SegmentBounds&) const = default;
};

struct HysteresisParams {
  double low_mult = 0.1;
  double high_mult = 2.0;
  double min_len_ms = 200.0;
  double pad_ms = 0.0;
  double envelope_window_ms = 20.0;
  double envelope_hop_ms = 10.0;

  void validate() const {
    if (!(low_mult > 0.0 && low_mult < high_mult)) {
      throw ValidationError("hysteresis: need 0 < low_mult < high_mult");
    }
    if (!(min_len_ms > 0.0)) throw ValidationError("hysteresis: min_len_ms must be > 0");
    if (!(pad_ms >= 0.0)) throw ValidationError("hysteresis: pad_ms must be >= 0");
    if (!(envelope_hop_ms > 0.0 && envelope_hop_ms <= envelope_window_ms)) {
      throw ValidationError(
          "hysteresis: need 0 < envelope_hop_ms <= envelope_window_ms");
    }
  }
};

struct RmsThresholdParams {
  double threshold = 0.09;
  double frame_ms = 42.67;  // 2048 samples at 48 kHz
  double min_len_ms = 300.0;
  double max_len_ms = 3000.0;
  int context_frames = 3;

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
      throw ValidationError("rms_threshold: need 0 < threshold < 1");
    }
    if (!(frame_ms > 0.0)) throw ValidationError("rms_threshold: frame_ms must be > 0");
    if (!(min_len_ms > 0.0 && min_len_ms <= max_len_ms)) {
      throw ValidationError("rms_threshold: need 0 < min_len_ms <= max_len_ms");
    }
    if (context_frames < 0) {
      throw ValidationError("rms_threshold: context_frames must be >= 0");
    }
  }
};

/// round(ms * rate / 1000) samples.
inline Eigen::Index ms_to_samples(double ms, int sample_rate) {
  return static_cast<Eigen::Index>(std::llround(ms * sample_rate / 1000.0));
}

/// RMS of an arbitrary sample block, accumulated in at least double precision.
template <typename Derived>
auto block_rms(const Eigen::ArrayBase<Derived>& block) {
  using Scalar = typename Derived::Scalar;
  using Acc = AccumulatorOf<Scalar>;
  const Acc energy = block.template cast<Acc>().square().sum();
  return std::sqrt(energy / static_cast<Acc>(block.size()));
}

/// RMS over every sample of the clip. Throws on an empty clip.
template <typename Scalar>
AccumulatorOf<Scalar> global_rms(const BasicAudioClip<Scalar>& clip) {
  if (clip.empty()) {
    throw ValidationError("global_rms: clip '" + clip.source_id + "' is empty");
  }
  return block_rms(clip.samples);
}

/// Short-time RMS. frame_start[f] is the first sample of frame f; rms[f] is
/// taken over min(window, remaining) samples.
template <typename Scalar>
struct RmsEnvelope {
  Eigen::Array<Eigen::Index, Eigen::Dynamic, 1> frame_start;
  SampleArray<AccumulatorOf<Scalar>> rms;

  Eigen::Index size() const { return rms.size(); }
};

template <typename Scalar>
RmsEnvelope<Scalar> rms_envelope(const BasicAudioClip<Scalar>& clip,
                                 double window_ms, double hop_ms) {
  if (!(window_ms > 0.0 && hop_ms > 0.0)) {
    throw ValidationError("rms_envelope: window and hop must be positive");
  }
  const Eigen::Index window = ms_to_samples(window_ms, clip.sample_rate);
  const Eigen::Index hop = ms_to_samples(hop_ms, clip.sample_rate);
  if (window < 1 || hop < 1) {
    throw ValidationError("rms_envelope: window or hop shorter than one sample");
  }
  const Eigen::Index n = clip.size();
  const Eigen::Index frames = n == 0 ? 0 : (n - 1) / hop + 1;

  RmsEnvelope<Scalar> env;
  env.frame_start.resize(frames);
  env.rms.resize(frames);
  for (Eigen::Index f = 0; f < frames; ++f) {
    const Eigen::Index start = f * hop;
    const Eigen::Index len = std::min(window, n - start);
    env.frame_start[f] = start;
    env.rms[f] = block_rms(clip.samples.segment(start, len));
  }
  return env;
}

/// Two-threshold comparator on the short-time RMS envelope. Thresholds are
/// low_mult and high_mult times the clip's global RMS; a segment opens on a
/// frame at or above the high threshold and closes on the first frame below
/// the low one.
template <typename Scalar>
std::vector<SegmentBounds> hysteresis_segment(
    const BasicAudioClip<Scalar>& clip,
    const HysteresisParams& params = HysteresisParams{}) {
  params.validate();
  std::vector<SegmentBounds> out;
  if (clip.empty()) return out;

  using Acc = AccumulatorOf<Scalar>;
  const Acc reference = global_rms(clip);
  if (reference == Acc(0)) return out;
  const Acc low = static_cast<Acc>(params.low_mult) * reference;
  const Acc high = static_cast<Acc>(params.high_mult) * reference;

  const auto env =
      rms_envelope(clip, params.envelope_window_ms, params.envelope_hop_ms);
  const Eigen::Index n = clip.size();
  const Eigen::Index pad = ms_to_samples(params.pad_ms, clip.sample_rate);

  auto emit = [&](Eigen::Index start, Eigen::Index end) {
    // Minimum length is checked on the unpadded region.
    if (static_cast<double>(end - start) * 1000.0 <
        params.min_len_ms * clip.sample_rate) {
      return;
    }
    out.push_back({std::max<Eigen::Index>(0, start - pad),
                   std::min(n, end + pad), Method::kHysteresis,
                   clip.source_id});
  };

  bool inside = false;
  Eigen::Index open_at = 0;
  for (Eigen::Index f = 0; f < env.size(); ++f) {
    if (!inside && env.rms[f] >= high) {
      inside = true;
      open_at = env.frame_start[f];
    } else if (inside && env.rms[f] < low) {
      inside = false;
      emit(open_at, env.frame_start[f]);
    }
  }
  if (inside) emit(open_at, n);
  return out;
}

/// Maximal run of consecutive active frames, [first_frame, end_frame).
struct FrameRun {
  Eigen::Index first_frame = 0;
  Eigen::Index end_frame = 0;
  Eigen::Index start_sample = 0;
  Eigen::Index end_sample = 0;
};

/// Number of samples per RMS-threshold frame (2048 at 48 kHz by default).
inline Eigen::Index threshold_frame_length(const RmsThresholdParams& params,
                                           int sample_rate) {
  const Eigen::Index len = ms_to_samples(params.frame_ms, sample_rate);
  if (len < 1) throw ValidationError("rms_threshold: frame shorter than one sample");
  return len;
}

/// Per-frame RMS of the peak-normalized clip over non-overlapping frames. A
/// trailing partial frame is kept only if it holds at least half a frame.
template <typename Scalar>
SampleArray<AccumulatorOf<Scalar>> threshold_frame_rms(
    const BasicAudioClip<Scalar>& normalized, Eigen::Index frame_len) {
  const Eigen::Index n = normalized.size();
  const Eigen::Index full = n / frame_len;
  const Eigen::Index rest = n % frame_len;
  const Eigen::Index frames = full + (2 * rest >= frame_len && rest > 0 ? 1 : 0);
  SampleArray<AccumulatorOf<Scalar>> rms(frames);
  for (Eigen::Index f = 0; f < frames; ++f) {
    const Eigen::Index start = f * frame_len;
    rms[f] = block_rms(
        normalized.samples.segment(start, std::min(frame_len, n - start)));
  }
  return rms;
}

/// Maximal runs of frames whose normalized RMS is strictly above threshold,
/// before any context extension or length filtering.
template <typename Scalar>
std::vector<FrameRun> active_frame_runs(const BasicAudioClip<Scalar>& clip,
                                        const RmsThresholdParams& params) {
  params.validate();
  std::vector<FrameRun> runs;
  if (clip.empty()) return runs;
  const Eigen::Index frame_len = threshold_frame_length(params, clip.sample_rate);
  const auto rms = threshold_frame_rms(peak_normalize(clip), frame_len);
  using Acc = AccumulatorOf<Scalar>;
  const Acc threshold = static_cast<Acc>(params.threshold);

  const Eigen::Index n = clip.size();
  Eigen::Index f = 0;
  while (f < rms.size()) {
    if (!(rms[f] > threshold)) {
      ++f;
      continue;
    }
    const Eigen::Index first = f;
    while (f < rms.size() && rms[f] > threshold) ++f;
    runs.push_back({first, f, first * frame_len, std::min(n, f * frame_len)});
  }
  return runs;
}

/// Single-threshold segmentation on normalized frame RMS. Runs outside
/// [min_len_ms, max_len_ms] are discarded; survivors are widened by
/// context_frames frames on each side, clamped to the clip and not merged.
template <typename Scalar>
std::vector<SegmentBounds> rms_threshold_segment(
    const BasicAudioClip<Scalar>& clip,
    const RmsThresholdParams& params = RmsThresholdParams{}) {
  std::vector<SegmentBounds> out;
  const auto runs = active_frame_runs(clip, params);
  if (runs.empty()) return out;
  const Eigen::Index frame_len = threshold_frame_length(params, clip.sample_rate);
  const Eigen::Index n = clip.size();
  const Eigen::Index context = params.context_frames;
  const double rate = clip.sample_rate;
  for (const FrameRun& run : runs) {
    const double run_ms =
        static_cast<double>(run.end_sample - run.start_sample) * 1000.0;
    if (run_ms < params.min_len_ms * rate || run_ms > params.max_len_ms * rate) {
      continue;
    }
    const Eigen::Index first = std::max<Eigen::Index>(0, run.first_frame - context);
    const Eigen::Index last = run.end_frame + context;
    out.push_back({first * frame_len, std::min(n, last * frame_len),
                   Method::kRmsThreshold, clip.source_id});
  }
  return out;
}

/// One segment spanning the whole clip; used to ingest files that were
/// already cut by hand.
template <typename Scalar>
std::vector<SegmentBounds> whole_clip_segment(const BasicAudioClip<Scalar>& clip) {
  if (clip.empty()) return {};
  return {SegmentBounds{0, clip.size(), Method::kManual, clip.source_id}};
}

}  // namespace coughseg

#endif  // COUGHSEG_SEGMENTATION_HPP_
