// core/include/dialogic/audio.h

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

#ifndef DIALOGIC_AUDIO_H_
#define DIALOGIC_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dialogic/error.h"

namespace dialogic {

/// Normalized mono sample stream. Samples always lie in [-1, 1]; buffers are
/// immutable after construction and safe to share across threads.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;  // Hz, > 0
  std::string source_id;

  std::int64_t duration_ms() const {
    return sample_rate > 0
               ? static_cast<std::int64_t>(samples.size()) * 1000 / sample_rate
               : 0;
  }
};

/// Per-frame RMS energies, all non-negative.
struct FrameEnergySeries {
  std::vector<double> energies;
  int frame_ms = 0;
  int hop_ms = 0;
};

struct MalformedHeader : Error {
  using Error::Error;
};
struct UnsupportedEncoding : Error {
  using Error::Error;
};
struct TruncatedData : Error {
  using Error::Error;
};
struct BufferTooShort : Error {
  using Error::Error;
};

/// Parses a RIFF/WAVE container holding 16-bit signed little-endian PCM with
/// 1 or 2 channels. Samples are scaled by 1/32768; stereo is mixed down to
/// mono by averaging the two channels of each frame. Other encodings are
/// rejected, not converted.
///
/// Throws MalformedHeader, UnsupportedEncoding or TruncatedData.
AudioBuffer load_wav(std::span<const std::uint8_t> bytes, std::string source_id);

/// load_wav over a file's bytes; source_id defaults to the file stem.
AudioBuffer load_wav_file(const std::filesystem::path& path);

/// RMS energy per analysis frame. Frame k covers samples
/// [k*hop, k*hop + frame_len); the last partial window is dropped.
/// Requires frame_ms >= hop_ms >= 1 and a buffer at least one frame long
/// (throws BufferTooShort otherwise).
FrameEnergySeries frame_energies(const AudioBuffer& buffer, int frame_ms, int hop_ms);

}  // namespace dialogic

#endif  // DIALOGIC_AUDIO_H_
