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

#include <doctest.h>

#include <cmath>

#include "coughseg/segmentation.hpp"
#include "test_support.hpp"

using namespace coughseg;
using coughseg::testing::burst_clip;
using coughseg::testing::random_cough_clip;

namespace {

// Expected values below come from tests/oracles/segmentation_oracle.py.
constexpr int kRate = 48000;

AudioClip constant_clip(Eigen::Index n, float value, int rate = kRate) {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.source_id = "const";
  clip.samples = SampleArray<float>::Constant(n, value);
  return clip;
}

AudioClip scaled(const AudioClip& clip, float c) {
  AudioClip out = clip;
  out.samples = (clip.samples * c).cwiseMin(1.0f).cwiseMax(-1.0f);
  return out;
}

}  // namespace

TEST_CASE("global_rms") {
  CHECK(global_rms(constant_clip(100, 0.0f)) == 0.0);
  CHECK(global_rms(constant_clip(100, 0.5f)) == doctest::Approx(0.5).epsilon(1e-12));

  AudioClip sine = constant_clip(48000, 0.0f);
  for (Eigen::Index i = 0; i < sine.size(); ++i) {
    sine.samples[i] = static_cast<float>(std::sin(2.0 * M_PI * 100.0 * i / kRate));
  }
  CHECK(std::abs(global_rms(sine) - 0.70711) < 1e-4);

  AudioClip empty;
  empty.sample_rate = kRate;
  CHECK_THROWS_AS(global_rms(empty), ValidationError);
}

TEST_CASE("rms_envelope") {
  SUBCASE("constant signals") {
    const auto env = rms_envelope(constant_clip(4800, 0.5f), 20.0, 10.0);
    CHECK(env.size() == 10);
    CHECK(((env.rms - 0.5).abs() < 1e-12).all());
    CHECK(((rms_envelope(constant_clip(4800, 0.0f), 20.0, 10.0).rms) == 0.0).all());
  }
  SUBCASE("window straddling a step") {
    // 0 for 4800 samples, 0.8 for 4800; 960-sample window, 480 hop. The
    // window starting at 4320 sees 480 zeros and 480 samples of 0.8:
    // sqrt(0.5 * 0.64) = 0.8 / sqrt(2).
    AudioClip clip = constant_clip(9600, 0.0f);
    clip.samples.tail(4800).setConstant(0.8f);
    const auto env = rms_envelope(clip, 20.0, 10.0);
    REQUIRE(env.size() == 20);
    CHECK(env.frame_start[9] == 4320);
    CHECK(std::abs(env.rms[9] - 0.8 / std::sqrt(2.0)) < 1e-6);
    for (int f = 0; f < 9; ++f) CHECK(env.rms[f] == 0.0);
    for (int f = 10; f < 20; ++f) CHECK(std::abs(env.rms[f] - 0.8) < 1e-6);
  }
  SUBCASE("trailing partial windows use their true length") {
    const auto env = rms_envelope(constant_clip(1000, 0.5f), 20.0, 10.0);
    // starts 0, 480, 960; the last covers only 40 samples.
    REQUIRE(env.size() == 3);
    CHECK(env.frame_start[2] == 960);
    CHECK(std::abs(env.rms[2] - 0.5) < 1e-12);
  }
  SUBCASE("empty clip gives an empty envelope") {
    AudioClip empty;
    empty.sample_rate = kRate;
    CHECK(rms_envelope(empty, 20.0, 10.0).size() == 0);
  }
  SUBCASE("non-positive window is rejected") {
    CHECK_THROWS_AS(rms_envelope(constant_clip(10, 0.1f), 0.0, 10.0), ValidationError);
  }
}

TEST_CASE("hysteresis_segment") {
  SUBCASE("all-zero clip") {
    CHECK(hysteresis_segment(constant_clip(3 * kRate, 0.0f)).empty());
  }
  SUBCASE("empty clip") {
    AudioClip empty;
    empty.sample_rate = kRate;
    CHECK(hysteresis_segment(empty).empty());
  }
  SUBCASE("single 400 ms burst over a 0.01 floor") {
    // R = 0.328765, high = 0.65753, low = 0.032877: opens at the first fully
    // burst frame (48000) and closes at the first fully quiet one (67200).
    const auto clip = burst_clip(kRate, 1.0, 0.4, 1.6, 0.9f, 0.01f);
    CHECK(global_rms(clip) == doctest::Approx(0.32876536719409744).epsilon(1e-7));
    const auto segs = hysteresis_segment(clip);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].start_sample == 48000);
    CHECK(segs[0].end_sample == 67200);
    CHECK(segs[0].method == Method::kHysteresis);
    CHECK(std::abs(segs[0].start_sample - 48000) <= 960);
    CHECK(std::abs(segs[0].end_sample - 67200) <= 960);
  }
  SUBCASE("100 ms burst is below the minimum length") {
    CHECK(hysteresis_segment(burst_clip(kRate, 1.0, 0.1, 1.9, 0.9f, 0.01f)).empty());
  }
  SUBCASE("segment open at the end closes at clip length") {
    const auto clip = burst_clip(kRate, 3.0, 0.5, 0.0, 0.9f, 0.01f);
    const auto segs = hysteresis_segment(clip);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].end_sample == clip.size());
  }
  SUBCASE("padding is clamped to the clip") {
    // The burst dominates the clip, so open at 1x global RMS.
    HysteresisParams p;
    p.high_mult = 1.0;
    p.pad_ms = 50.0;
    const auto clip = burst_clip(kRate, 0.02, 0.4, 0.02, 0.9f, 0.01f);
    const auto segs = hysteresis_segment(clip, p);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].start_sample == 0);
    CHECK(segs[0].end_sample == clip.size());
  }
  SUBCASE("two bursts give two sorted segments") {
    auto clip = burst_clip(kRate, 0.5, 0.3, 2.0, 0.8f, 0.01f);
    clip.samples.segment(2 * kRate, kRate / 4).setConstant(0.7f);
    const auto segs = hysteresis_segment(clip);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].end_sample <= segs[1].start_sample);
  }
  SUBCASE("invalid params") {
    HysteresisParams p;
    p.low_mult = 3.0;
    CHECK_THROWS_AS(hysteresis_segment(constant_clip(10, 0.1f), p), ValidationError);
    p = {};
    p.envelope_hop_ms = 30.0;
    CHECK_THROWS_AS(hysteresis_segment(constant_clip(10, 0.1f), p), ValidationError);
  }
}

TEST_CASE("rms_threshold_segment") {
  SUBCASE("all-zero clip") {
    CHECK(rms_threshold_segment(constant_clip(3 * kRate, 0.0f)).empty());
  }
  SUBCASE("default frame is 2048 samples at 48 kHz") {
    CHECK(threshold_frame_length(RmsThresholdParams{}, kRate) == 2048);
  }
  SUBCASE("500 ms burst between 1 s silences") {
    // Active frames 23..35 (both edge frames partly covered), extended by
    // three frames each side: [20*2048, 39*2048).
    const auto clip = burst_clip(kRate, 1.0, 0.5, 1.0, 0.5f, 0.0f);
    const auto runs = active_frame_runs(clip, RmsThresholdParams{});
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].first_frame == 23);
    CHECK(runs[0].end_frame == 36);
    const auto segs = rms_threshold_segment(clip);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].start_sample == 40960);
    CHECK(segs[0].end_sample == 79872);
    const double ms = clip.duration_ms(segs[0].length());
    CHECK(ms >= 500.0);
    CHECK(ms <= 500.0 + 8 * 2048 * 1000.0 / kRate);
  }
  SUBCASE("200 ms burst is below the minimum length") {
    CHECK(rms_threshold_segment(burst_clip(kRate, 1.0, 0.2, 1.0, 0.5f, 0.0f)).empty());
  }
  SUBCASE("4 s burst exceeds the maximum length") {
    const auto clip = burst_clip(kRate, 1.0, 4.0, 1.0, 0.5f, 0.0f);
    const auto runs = active_frame_runs(clip, RmsThresholdParams{});
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].end_frame - runs[0].first_frame == 95);
    CHECK(rms_threshold_segment(clip).empty());
  }
  SUBCASE("threshold comparison is strict") {
    // Peak 1.0 at one sample; all other samples chosen so frame 0's RMS is
    // exactly the threshold it is tested against.
    RmsThresholdParams p;
    p.frame_ms = 1000.0 * 4 / kRate;  // 4-sample frames
    p.min_len_ms = 1e-3;
    p.context_frames = 0;
    p.threshold = 0.5;
    AudioClip clip = constant_clip(8, 0.0f);
    clip.samples[0] = 1.0f;  // frame 0 rms = sqrt(1/4) = 0.5, not > 0.5
    clip.samples.tail(4).setConstant(1.0f);
    const auto segs = rms_threshold_segment(clip, p);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].start_sample == 4);
  }
  SUBCASE("short trailing frame is dropped, long one kept") {
    RmsThresholdParams p;
    p.frame_ms = 1000.0 * 4 / kRate;
    p.min_len_ms = 1e-3;
    p.context_frames = 0;
    AudioClip clip = constant_clip(9, 0.0f);
    clip.samples[8] = 1.0f;  // 1-sample tail, dropped
    CHECK(rms_threshold_segment(clip, p).empty());
    clip = constant_clip(10, 0.0f);
    clip.samples[9] = 1.0f;  // 2-sample tail, kept
    const auto segs = rms_threshold_segment(clip, p);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].start_sample == 8);
    CHECK(segs[0].end_sample == 10);
  }
  SUBCASE("extended neighbours overlap and stay separate") {
    RmsThresholdParams p;
    p.min_len_ms = 1.0;
    auto clip = burst_clip(kRate, 1.0, 0.35, 1.0, 0.5f, 0.0f);
    // Second burst starting two quiet frames after the first ends.
    clip.samples.segment(48000 + 16800 + 2 * 2048 + 2048, 16800).setConstant(0.5f);
    const auto segs = rms_threshold_segment(clip, p);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].end_sample > segs[1].start_sample);
  }
  SUBCASE("invalid params") {
    RmsThresholdParams p;
    p.threshold = 1.5;
    CHECK_THROWS_AS(rms_threshold_segment(constant_clip(10, 0.1f), p), ValidationError);
    p = {};
    p.max_len_ms = 100.0;
    CHECK_THROWS_AS(rms_threshold_segment(constant_clip(10, 0.1f), p), ValidationError);
  }
}

TEST_CASE("double-precision clips give the same segments") {
  const auto clip = burst_clip<double>(kRate, 1.0, 0.4, 1.6, 0.9, 0.01);
  const auto segs = hysteresis_segment(clip);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start_sample == 48000);
  CHECK(segs[0].end_sample == 67200);
  CHECK(rms_threshold_segment(burst_clip<double>(kRate, 1.0, 0.5, 1.0, 0.5, 0.0)).size() == 1);
}

TEST_CASE("property: segment invariants on random clips") {
  std::mt19937 rng(2024);
  const HysteresisParams hp;
  const RmsThresholdParams rp;
  for (int trial = 0; trial < 40; ++trial) {
    const AudioClip clip = random_cough_clip(rng);
    const auto n = clip.size();
    const auto hyst = hysteresis_segment(clip, hp);
    const auto thr = rms_threshold_segment(clip, rp);
    for (const auto* list : {&hyst, &thr}) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        const auto& s = (*list)[i];
        CHECK(0 <= s.start_sample);
        CHECK(s.start_sample < s.end_sample);
        CHECK(s.end_sample <= n);
        if (i > 0) CHECK((*list)[i - 1].start_sample <= s.start_sample);
      }
    }
    for (const auto& s : hyst) CHECK(clip.duration_ms(s.length()) >= hp.min_len_ms);

    const auto runs = active_frame_runs(clip, rp);
    for (std::size_t i = 1; i < runs.size(); ++i) {
      CHECK(runs[i - 1].end_frame < runs[i].first_frame);
    }
    std::size_t kept = 0;
    for (const auto& run : runs) {
      const double ms = clip.duration_ms(run.end_sample - run.start_sample);
      if (ms >= rp.min_len_ms && ms <= rp.max_len_ms) ++kept;
    }
    CHECK(kept == thr.size());

    // Determinism.
    CHECK(hysteresis_segment(clip, hp) == hyst);
    CHECK(rms_threshold_segment(clip, rp) == thr);
  }
}

TEST_CASE("property: hysteresis is invariant to power-of-two gain") {
  std::mt19937 rng(7);
  int nonempty = 0;
  for (int trial = 0; trial < 30; ++trial) {
    AudioClip clip = random_cough_clip(rng);
    clip.samples *= 0.25f;  // keep x2 and x4 inside [-1, 1]
    const auto base = hysteresis_segment(clip);
    nonempty += !base.empty();
    for (float c : {0.5f, 2.0f, 4.0f}) {
      CHECK(hysteresis_segment(scaled(clip, c)) == base);
    }
  }
  CHECK(nonempty > 15);
}

TEST_CASE("property: rms_threshold is invariant to gain") {
  std::mt19937 rng(11);
  int nonempty = 0;
  for (int trial = 0; trial < 30; ++trial) {
    AudioClip clip = random_cough_clip(rng);
    clip.samples *= 0.5f;
    const auto base = rms_threshold_segment(clip);
    nonempty += !base.empty();
    for (float c : {0.25f, 1.0f, 2.0f}) {
      CHECK(rms_threshold_segment(scaled(clip, c)) == base);
    }
  }
  CHECK(nonempty > 15);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::kHysteresis, Method::kRmsThreshold, Method::kManual}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK(parse_method("rms") == Method::kRmsThreshold);
  CHECK_THROWS_AS(parse_method("spectral"), ValidationError);
}
