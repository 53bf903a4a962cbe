// core/include/dialogic/transcription.h

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

#ifndef DIALOGIC_TRANSCRIPTION_H_
#define DIALOGIC_TRANSCRIPTION_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialogic/audio.h"
#include "dialogic/error.h"
#include "dialogic/vad.h"

namespace dialogic {

/// The backend answered nothing usable for any segment.
struct BackendUnreachable : Error {
  using Error::Error;
};
/// Offline transcript file lacks a (source_id, segment_index) key.
struct TranscriptKeyMissing : Error {
  using Error::Error;
};
/// Remote response is not the expected JSON shape.
struct MalformedResponse : Error {
  using Error::Error;
};

/// One transcribed segment. `text` may be empty only when `skipped` is set;
/// confidence is 1.0 when the backend reports none.
struct Utterance {
  std::string source_id;
  int segment_index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;
  double confidence = 1.0;
  bool skipped = false;
};

enum class AsrMode { kRemote, kOffline };

/// Remote mode POSTs {source_id, segment_index, sample_rate, pcm16} to
/// <endpoint>/transcribe and expects {text, confidence} back. Offline mode
/// reads a JSONL transcript file keyed by (source_id, segment_index).
struct AsrBackendConfig {
  AsrMode mode = AsrMode::kOffline;
  std::string endpoint;
  std::filesystem::path transcript_path;
  int timeout_ms = 5000;
  int max_retries = 2;
  /// Remote requests in flight at once; results are reassembled in segment
  /// order regardless.
  int max_inflight = 4;
  void validate() const;
};

struct TranscriptionSummary {
  int transcribed = 0;
  int skipped = 0;
};

/// One Utterance per input segment, order preserved, |output| == |input|.
/// Remote failures for a single segment (after max_retries retries with
/// bounded backoff, never holding a segment longer than
/// (max_retries+1) * timeout_ms) yield a skipped record; BackendUnreachable
/// is raised only when not a single segment got an HTTP response.
/// Offline mode throws TranscriptKeyMissing for absent keys.
std::vector<Utterance> transcribe_segments(
    const std::vector<std::pair<AudioSegment, AudioBuffer>>& segments,
    const AsrBackendConfig& config, TranscriptionSummary* summary = nullptr);

/// Little-endian 16-bit PCM bytes; exact inverse of the WAV loader's
/// sample scaling.
std::vector<std::uint8_t> pcm16le_bytes(const AudioBuffer& buffer);
std::vector<double> samples_from_pcm16le(std::span<const std::uint8_t> bytes);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Utterance wire format: one JSON object per line
/// {source_id, segment_index, start_ms, end_ms, text, confidence, skipped}.
void write_utterances_file(const std::vector<Utterance>& utterances,
                           const std::filesystem::path& path);
std::vector<Utterance> read_utterances_file(const std::filesystem::path& path);

}  // namespace dialogic

#endif  // DIALOGIC_TRANSCRIPTION_H_
