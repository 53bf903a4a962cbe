// core/src/audio.cc

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

#include "dialogic/audio.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dialogic {

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) |
         static_cast<std::uint32_t>(b[off + 1]) << 8 |
         static_cast<std::uint32_t>(b[off + 2]) << 16 |
         static_cast<std::uint32_t>(b[off + 3]) << 24;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t off, const char* tag) {
  return std::memcmp(b.data() + off, tag, 4) == 0;
}

}  // namespace

AudioBuffer load_wav(std::span<const std::uint8_t> bytes, std::string source_id) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw MalformedHeader("not a RIFF/WAVE container: " + source_id);
  }

  bool fmt_found = false;
  std::uint16_t num_channels = 0;
  std::uint32_t sample_rate = 0;

  // Walk the chunk list. Chunks are word aligned, so odd payloads carry one
  // pad byte.
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(bytes, off + 4);
    const std::size_t payload = off + 8;

    if (tag_is(bytes, off, "fmt ")) {
      if (chunk_size < 16 || payload + 16 > bytes.size()) {
        throw MalformedHeader("fmt chunk too small: " + source_id);
      }
      const std::uint16_t audio_format = read_u16(bytes, payload);
      num_channels = read_u16(bytes, payload + 2);
      sample_rate = read_u32(bytes, payload + 4);
      const std::uint16_t bits_per_sample = read_u16(bytes, payload + 14);
      if (audio_format != 1) {
        throw UnsupportedEncoding("only PCM (format 1) is accepted, got format " +
                                  std::to_string(audio_format));
      }
      if (bits_per_sample != 16) {
        throw UnsupportedEncoding("only 16-bit samples are accepted, got " +
                                  std::to_string(bits_per_sample) + " bits");
      }
      if (num_channels != 1 && num_channels != 2) {
        throw UnsupportedEncoding("only mono or stereo is accepted, got " +
                                  std::to_string(num_channels) + " channels");
      }
      if (sample_rate == 0) {
        throw MalformedHeader("fmt chunk declares a zero sample rate");
      }
      fmt_found = true;
    } else if (tag_is(bytes, off, "data")) {
      if (!fmt_found) {
        throw MalformedHeader("data chunk precedes fmt chunk: " + source_id);
      }
      if (payload + chunk_size > bytes.size()) {
        throw TruncatedData("data chunk declares " + std::to_string(chunk_size) +
                            " bytes but only " + std::to_string(bytes.size() - payload) +
                            " remain");
      }

      const std::size_t bytes_per_frame = 2u * num_channels;
      const std::size_t n_frames = chunk_size / bytes_per_frame;
      AudioBuffer out;
      out.sample_rate = static_cast<int>(sample_rate);
      out.source_id = std::move(source_id);
      out.samples.resize(n_frames);
      for (std::size_t i = 0; i < n_frames; ++i) {
        const std::size_t p = payload + i * bytes_per_frame;
        const auto s0 = static_cast<std::int16_t>(read_u16(bytes, p));
        if (num_channels == 1) {
          out.samples[i] = s0 / 32768.0;
        } else {
          const auto s1 = static_cast<std::int16_t>(read_u16(bytes, p + 2));
          out.samples[i] = (s0 / 32768.0 + s1 / 32768.0) / 2.0;
        }
      }
      return out;
    }

    off = payload + chunk_size + (chunk_size & 1);
  }

  if (!fmt_found) throw MalformedHeader("no fmt chunk found: " + source_id);
  throw TruncatedData("no data chunk found: " + source_id);
}

AudioBuffer load_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_wav(bytes, path.stem().string());
}

FrameEnergySeries frame_energies(const AudioBuffer& buffer, int frame_ms, int hop_ms) {
  if (hop_ms < 1 || frame_ms < hop_ms) {
    throw std::invalid_argument("frame_ms >= hop_ms >= 1 required");
  }
  if (buffer.sample_rate <= 0) throw std::invalid_argument("sample_rate must be positive");

  const std::size_t frame_len =
      static_cast<std::size_t>(frame_ms) * buffer.sample_rate / 1000;
  const std::size_t hop_len =
      static_cast<std::size_t>(hop_ms) * buffer.sample_rate / 1000;
  if (frame_len == 0 || hop_len == 0) {
    throw std::invalid_argument("frame and hop must span at least one sample");
  }
  if (buffer.samples.size() < frame_len) {
    throw BufferTooShort("buffer of " + std::to_string(buffer.duration_ms()) +
                         " ms is shorter than one " + std::to_string(frame_ms) +
                         " ms frame");
  }

  FrameEnergySeries series;
  series.frame_ms = frame_ms;
  series.hop_ms = hop_ms;
  const std::size_t n_frames = (buffer.samples.size() - frame_len) / hop_len + 1;
  series.energies.resize(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    double sum_sq = 0.0;
    const std::size_t start = k * hop_len;
    for (std::size_t i = start; i < start + frame_len; ++i) {
      sum_sq += buffer.samples[i] * buffer.samples[i];
    }
    series.energies[k] = std::sqrt(sum_sq / static_cast<double>(frame_len));
  }
  return series;
}

}  // namespace dialogic
