// core/include/dialogic/vad.h

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

#ifndef DIALOGIC_VAD_H_
#define DIALOGIC_VAD_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dialogic/audio.h"
#include "dialogic/error.h"

namespace dialogic {

/// Knobs for the adaptive-energy voice activity detector. The threshold is
/// derived from a noise-floor quantile of the frame energies rather than a
/// fixed dB value, so unknown recording gain does not matter.
struct VadConfig {
  int frame_ms = 30;
  int hop_ms = 10;
  double noise_percentile = 0.10;  // in (0, 1)
  double threshold_factor = 3.0;   // > 1
  int min_speech_ms = 200;         // >= frame_ms
  int max_gap_ms = 300;
  int pad_ms = 100;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// One detected speech span, in milliseconds relative to the recording start.
struct AudioSegment {
  int index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string source_id;
};

struct SegmentOutOfRange : Error {
  using Error::Error;
};

/// Detects speech spans:
///   1. per-frame RMS energies,
///   2. threshold T = threshold_factor * noise_percentile-quantile of the
///      energies (linear interpolation between order statistics),
///   3. frames with energy > T are active,
///   4. active runs separated by gaps <= max_gap_ms merge,
///   5. runs shorter than min_speech_ms are dropped,
///   6. survivors get pad_ms on both sides, clamped to the buffer, and any
///      overlaps created by padding merge again.
///
/// Each frame stands for the hop-length slice centred in its analysis
/// window, which keeps run boundaries within one hop of the true speech
/// edges instead of smearing by a full frame.
///
/// The returned segments are sorted, pairwise non-overlapping and inside the
/// buffer. Throws BufferTooShort when the buffer is shorter than one frame.
std::vector<AudioSegment> detect_segments(const AudioBuffer& buffer,
                                          const VadConfig& config);

/// Extracts the samples of each segment into its own buffer. Sample rate is
/// preserved; the source_id gains a "#<index>" suffix.
/// Throws SegmentOutOfRange when a segment lies outside the buffer.
std::vector<AudioBuffer> cut_segments(const AudioBuffer& buffer,
                                      const std::vector<AudioSegment>& segments);

/// Linear-interpolation quantile of a sample set, q in [0, 1].
/// Exposed for the VAD tests; values must be non-empty.
double quantile(std::vector<double> values, double q);

/// Segment list wire format: one record per line,
/// "index<TAB>start_ms<TAB>end_ms<TAB>source_id".
std::string format_segments(const std::vector<AudioSegment>& segments);
void write_segments_file(const std::vector<AudioSegment>& segments,
                         const std::filesystem::path& path);
std::vector<AudioSegment> read_segments_file(const std::filesystem::path& path);

}  // namespace dialogic

#endif  // DIALOGIC_VAD_H_
