# Copyright 2026 The coughseg Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Brute-force reference for the synthetic segmentation fixtures.

Plain-Python loops, independent of the C++ implementation. Prints the
expected segment bounds that the unit and acceptance tests freeze.
"""
import math


def burst_clip(rate, pre_s, burst_s, post_s, burst_amp, bg_amp):
    pre, burst, post = (round(rate * s) for s in (pre_s, burst_s, post_s))
    return [bg_amp] * pre + [burst_amp] * burst + [bg_amp] * post


def rms(xs):
    return math.sqrt(sum(x * x for x in xs) / len(xs))


def hysteresis(x, rate, low_mult=0.1, high_mult=2.0, min_len_ms=200,
               window_ms=20, hop_ms=10):
    r = rms(x)
    if r == 0:
        return []
    low, high = low_mult * r, high_mult * r
    w, h = round(window_ms * rate / 1000), round(hop_ms * rate / 1000)
    segs, inside, start = [], False, 0
    pos = 0
    while pos < len(x):
        v = rms(x[pos:pos + w])
        if not inside and v >= high:
            inside, start = True, pos
        elif inside and v < low:
            inside = False
            segs.append((start, pos))
        pos += h
    if inside:
        segs.append((start, len(x)))
    return [s for s in segs if (s[1] - s[0]) * 1000 >= min_len_ms * rate]


def rms_threshold(x, rate, thr=0.09, frame=2048, min_ms=300, max_ms=3000, ctx=3):
    peak = max(abs(v) for v in x)
    if peak == 0:
        return []
    y = [v / peak for v in x]
    nfull, rest = divmod(len(y), frame)
    nframes = nfull + (1 if rest and 2 * rest >= frame else 0)
    active = [rms(y[f * frame:(f + 1) * frame]) > thr for f in range(nframes)]
    out, f = [], 0
    while f < nframes:
        if not active[f]:
            f += 1
            continue
        first = f
        while f < nframes and active[f]:
            f += 1
        s, e = first * frame, min(len(y), f * frame)
        if min_ms * rate <= (e - s) * 1000 <= max_ms * rate:
            out.append((max(0, first - ctx) * frame, min(len(y), (f + ctx) * frame)))
    return out


if __name__ == "__main__":
    R = 48000
    clip = burst_clip(R, 1.0, 0.4, 1.6, 0.9, 0.01)
    print("hysteresis 400ms burst:", hysteresis(clip, R), "global rms", rms(clip))
    print("hysteresis 100ms burst:", hysteresis(burst_clip(R, 1.0, 0.1, 1.9, 0.9, 0.01), R))
    print("hysteresis 500ms burst:", hysteresis(burst_clip(R, 1.0, 0.5, 1.5, 0.9, 0.01), R))
    for ms in (500, 200, 4000):
        c = burst_clip(R, 1.0, ms / 1000, 1.0, 0.5, 0.0)
        print(f"rms {ms}ms burst:", rms_threshold(c, R))
