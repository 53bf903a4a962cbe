// tests/test_helpers.h

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

#ifndef DIALOGIC_TESTS_TEST_HELPERS_H_
#define DIALOGIC_TESTS_TEST_HELPERS_H_

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace dialogic_tests {

/// Unique directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dialogic_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

inline void append_tag(std::vector<std::uint8_t>& out, const char* tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(tag[i]));
}

/// Canonical RIFF/WAVE bytes around interleaved 16-bit PCM samples.
inline std::vector<std::uint8_t> wav_bytes(
    const std::vector<std::int16_t>& interleaved, int sample_rate,
    int channels) {
  std::vector<std::uint8_t> out;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(interleaved.size() * 2);
  append_tag(out, "RIFF");
  append_u32(out, 36 + data_size);
  append_tag(out, "WAVE");
  append_tag(out, "fmt ");
  append_u32(out, 16);
  append_u16(out, 1);  // PCM
  append_u16(out, static_cast<std::uint16_t>(channels));
  append_u32(out, static_cast<std::uint32_t>(sample_rate));
  const std::uint32_t byte_rate =
      static_cast<std::uint32_t>(sample_rate * channels * 2);
  append_u32(out, byte_rate);
  append_u16(out, static_cast<std::uint16_t>(channels * 2));
  append_u16(out, 16);
  append_tag(out, "data");
  append_u32(out, data_size);
  for (std::int16_t s : interleaved) {
    append_u16(out, static_cast<std::uint16_t>(s));
  }
  return out;
}

/// `ms` milliseconds of a sine tone as 16-bit samples.
inline std::vector<std::int16_t> tone_samples(int ms, double freq_hz,
                                              int sample_rate,
                                              double amplitude = 0.5) {
  const std::size_t n =
      static_cast<std::size_t>(ms) * static_cast<std::size_t>(sample_rate) /
      1000;
  std::vector<std::int16_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    out[i] = static_cast<std::int16_t>(
        amplitude * 32000.0 * std::sin(2.0 * std::numbers::pi * freq_hz * t));
  }
  return out;
}

inline std::vector<std::int16_t> silence_samples(int ms, int sample_rate) {
  return std::vector<std::int16_t>(
      static_cast<std::size_t>(ms) * static_cast<std::size_t>(sample_rate) /
          1000,
      0);
}

inline void append_samples(std::vector<std::int16_t>& dst,
                           const std::vector<std::int16_t>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

inline void write_bytes(const std::filesystem::path& path,
                        const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace dialogic_tests

#endif  // DIALOGIC_TESTS_TEST_HELPERS_H_
