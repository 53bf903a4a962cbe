// core/src/vad.cc

// Copyright 2026  The Dialogic Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialogic/vad.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dialogic {

void VadConfig::validate() const {
  if (hop_ms < 1 || frame_ms < hop_ms) {
    throw std::invalid_argument("vad: frame_ms >= hop_ms >= 1 required");
  }
  if (noise_percentile <= 0.0 || noise_percentile >= 1.0) {
    throw std::invalid_argument("vad: noise_percentile must lie in (0, 1)");
  }
  if (threshold_factor <= 1.0) {
    throw std::invalid_argument("vad: threshold_factor must exceed 1");
  }
  if (min_speech_ms < frame_ms) {
    throw std::invalid_argument("vad: min_speech_ms must be >= frame_ms");
  }
  if (max_gap_ms < 0 || pad_ms < 0) {
    throw std::invalid_argument("vad: durations must be non-negative");
  }
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

struct FrameRun {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

}  // namespace

std::vector<AudioSegment> detect_segments(const AudioBuffer& buffer,
                                          const VadConfig& config) {
  config.validate();
  const FrameEnergySeries series =
      frame_energies(buffer, config.frame_ms, config.hop_ms);

  const double noise_floor = quantile(series.energies, config.noise_percentile);
  const double threshold = config.threshold_factor * noise_floor;

  // Active runs of frames with energy above the threshold.
  std::vector<FrameRun> runs;
  for (std::size_t k = 0; k < series.energies.size(); ++k) {
    if (series.energies[k] <= threshold) continue;
    if (!runs.empty() && runs.back().last + 1 == k) {
      runs.back().last = k;
    } else {
      runs.push_back({k, k});
    }
  }

  // Bridge short gaps.
  std::vector<FrameRun> merged;
  for (const FrameRun& run : runs) {
    if (!merged.empty()) {
      const std::int64_t gap_ms =
          static_cast<std::int64_t>(run.first - merged.back().last - 1) * config.hop_ms;
      if (gap_ms <= config.max_gap_ms) {
        merged.back().last = run.last;
        continue;
      }
    }
    merged.push_back(run);
  }

  // Frame k represents the hop-length slice centred in its window: the run
  // k0..k1 spans [k0*hop + off, (k1+1)*hop + off) with off = (frame-hop)/2.
  const std::int64_t off = (config.frame_ms - config.hop_ms) / 2;
  const std::int64_t duration = buffer.duration_ms();

  std::vector<AudioSegment> segments;
  for (const FrameRun& run : merged) {
    const auto span_frames = static_cast<std::int64_t>(run.last - run.first + 1);
    if (span_frames * config.hop_ms < config.min_speech_ms) continue;

    std::int64_t start = static_cast<std::int64_t>(run.first) * config.hop_ms + off;
    std::int64_t end = static_cast<std::int64_t>(run.last + 1) * config.hop_ms + off;
    start = std::max<std::int64_t>(0, start - config.pad_ms);
    end = std::min(duration, end + config.pad_ms);

    if (!segments.empty() && start <= segments.back().end_ms) {
      segments.back().end_ms = std::max(segments.back().end_ms, end);
    } else {
      segments.push_back({0, start, end, buffer.source_id});
    }
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    segments[i].index = static_cast<int>(i);
  }
  return segments;
}

std::vector<AudioBuffer> cut_segments(const AudioBuffer& buffer,
                                      const std::vector<AudioSegment>& segments) {
  std::vector<AudioBuffer> out;
  out.reserve(segments.size());
  for (const AudioSegment& seg : segments) {
    if (seg.start_ms < 0 || seg.start_ms >= seg.end_ms) {
      throw SegmentOutOfRange("segment " + std::to_string(seg.index) +
                              " has an empty or negative span");
    }
    const auto first =
        static_cast<std::size_t>(seg.start_ms * buffer.sample_rate / 1000);
    const auto last =
        static_cast<std::size_t>(seg.end_ms * buffer.sample_rate / 1000);
    if (last > buffer.samples.size()) {
      throw SegmentOutOfRange("segment " + std::to_string(seg.index) +
                              " ends at " + std::to_string(seg.end_ms) +
                              " ms, past the buffer");
    }
    AudioBuffer cut;
    cut.sample_rate = buffer.sample_rate;
    cut.source_id = buffer.source_id + "#" + std::to_string(seg.index);
    cut.samples.assign(buffer.samples.begin() + static_cast<std::ptrdiff_t>(first),
                       buffer.samples.begin() + static_cast<std::ptrdiff_t>(last));
    out.push_back(std::move(cut));
  }
  return out;
}

std::string format_segments(const std::vector<AudioSegment>& segments) {
  std::ostringstream out;
  for (const AudioSegment& seg : segments) {
    out << seg.index << '\t' << seg.start_ms << '\t' << seg.end_ms << '\t'
        << seg.source_id << '\n';
  }
  return out.str();
}

void write_segments_file(const std::vector<AudioSegment>& segments,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << format_segments(segments);
}

std::vector<AudioSegment> read_segments_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<AudioSegment> segments;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    AudioSegment seg;
    std::string index, start, end;
    if (!std::getline(fields, index, '\t') || !std::getline(fields, start, '\t') ||
        !std::getline(fields, end, '\t') || !std::getline(fields, seg.source_id)) {
      throw Error("malformed segment record in " + path.string() + ": " + line);
    }
    seg.index = std::stoi(index);
    seg.start_ms = std::stoll(start);
    seg.end_ms = std::stoll(end);
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace dialogic
