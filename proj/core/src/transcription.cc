// core/src/transcription.cc

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

#include "dialogic/transcription.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace dialogic {

namespace {

constexpr char kBase64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

using Clock = std::chrono::steady_clock;

struct OfflineTranscript {
  std::string text;
  double confidence = 1.0;
};

std::map<std::pair<std::string, int>, OfflineTranscript> load_transcripts(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open transcript file: " + path.string());
  }
  std::map<std::pair<std::string, int>, OfflineTranscript> transcripts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      nlohmann::json record = nlohmann::json::parse(line);
      OfflineTranscript entry;
      entry.text = record.at("text").get<std::string>();
      if (record.contains("confidence")) {
        entry.confidence = record["confidence"].get<double>();
      }
      transcripts[{record.at("source_id").get<std::string>(),
                   record.at("segment_index").get<int>()}] = entry;
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed transcript record in " + path.string() + ": " +
                  e.what());
    }
  }
  return transcripts;
}

Utterance utterance_shell(const AudioSegment& segment) {
  Utterance u;
  u.source_id = segment.source_id;
  u.segment_index = segment.index;
  u.start_ms = segment.start_ms;
  u.end_ms = segment.end_ms;
  return u;
}

std::vector<Utterance> transcribe_offline(
    const std::vector<std::pair<AudioSegment, AudioBuffer>>& segments,
    const AsrBackendConfig& config, TranscriptionSummary* summary) {
  auto transcripts = load_transcripts(config.transcript_path);
  std::vector<Utterance> out;
  out.reserve(segments.size());
  for (const auto& [segment, buffer] : segments) {
    auto it = transcripts.find({segment.source_id, segment.index});
    if (it == transcripts.end()) {
      throw TranscriptKeyMissing("no transcript for " + segment.source_id +
                                 " segment " + std::to_string(segment.index));
    }
    Utterance u = utterance_shell(segment);
    u.text = it->second.text;
    u.confidence = it->second.confidence;
    u.skipped = u.text.empty();
    if (summary) (u.skipped ? summary->skipped : summary->transcribed) += 1;
    out.push_back(std::move(u));
  }
  return out;
}

// One segment against the remote backend. Retries inside the fixed budget
// of (max_retries+1) * timeout_ms; `got_response` records whether any HTTP
// exchange completed at all (reachability signal, independent of whether
// the segment ended up usable).
Utterance transcribe_remote_one(const AudioSegment& segment,
                                const AudioBuffer& buffer,
                                const AsrBackendConfig& config,
                                std::atomic<int>& got_response) {
  nlohmann::json request = {
      {"source_id", segment.source_id},
      {"segment_index", segment.index},
      {"sample_rate", buffer.sample_rate},
      {"pcm16", base64_encode(pcm16le_bytes(buffer))},
  };
  std::string body = request.dump();

  auto deadline = Clock::now() + std::chrono::milliseconds(
                                     static_cast<std::int64_t>(
                                         config.max_retries + 1) *
                                     config.timeout_ms);
  int backoff_ms = 50;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                         deadline - Clock::now())
                         .count();
    if (remaining <= 0) break;
    std::int64_t attempt_ms = std::min<std::int64_t>(config.timeout_ms,
                                                     remaining);
    httplib::Client client(config.endpoint);
    client.set_connection_timeout(attempt_ms / 1000,
                                  (attempt_ms % 1000) * 1000);
    client.set_read_timeout(attempt_ms / 1000, (attempt_ms % 1000) * 1000);
    client.set_write_timeout(attempt_ms / 1000, (attempt_ms % 1000) * 1000);

    httplib::Result res = client.Post("/transcribe", body,
                                      "application/json");
    if (res) {
      got_response.fetch_add(1, std::memory_order_relaxed);
      if (res->status == 200) {
        nlohmann::json reply;
        try {
          reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception&) {
          throw MalformedResponse("backend reply is not JSON");
        }
        if (!reply.contains("text") || !reply["text"].is_string()) {
          throw MalformedResponse("backend reply lacks a text field");
        }
        Utterance u = utterance_shell(segment);
        u.text = reply["text"].get<std::string>();
        u.confidence = reply.contains("confidence")
                           ? reply["confidence"].get<double>()
                           : 1.0;
        u.skipped = u.text.empty();
        return u;
      }
      // Non-200 counts as a failed attempt; fall through to retry.
    }
    if (attempt < config.max_retries) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - Clock::now())
                      .count();
      if (left <= 0) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(
          std::min<std::int64_t>(backoff_ms, left)));
      backoff_ms = std::min(backoff_ms * 2, 1000);
    }
  }
  Utterance u = utterance_shell(segment);
  u.skipped = true;
  return u;
}

std::vector<Utterance> transcribe_remote(
    const std::vector<std::pair<AudioSegment, AudioBuffer>>& segments,
    const AsrBackendConfig& config, TranscriptionSummary* summary) {
  std::size_t n = segments.size();
  std::vector<Utterance> out(n);
  std::atomic<std::size_t> next{0};
  std::atomic<int> got_response{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = transcribe_remote_one(segments[i].first, segments[i].second,
                                       config, got_response);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::size_t n_workers = std::min<std::size_t>(config.max_inflight, n);
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t k = 0; k < n_workers; ++k) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  if (got_response.load() == 0) {
    throw BackendUnreachable("no response from " + config.endpoint +
                             " for any segment");
  }
  if (summary) {
    for (const Utterance& u : out) {
      (u.skipped ? summary->skipped : summary->transcribed) += 1;
    }
  }
  return out;
}

}  // namespace

void AsrBackendConfig::validate() const {
  if (mode == AsrMode::kRemote && endpoint.empty()) {
    throw std::invalid_argument("remote ASR mode requires an endpoint");
  }
  if (mode == AsrMode::kOffline && transcript_path.empty()) {
    throw std::invalid_argument("offline ASR mode requires a transcript file");
  }
  if (timeout_ms < 1) throw std::invalid_argument("timeout_ms must be >= 1");
  if (max_retries < 0) {
    throw std::invalid_argument("max_retries must be >= 0");
  }
  if (max_inflight < 1) {
    throw std::invalid_argument("max_inflight must be >= 1");
  }
}

std::vector<Utterance> transcribe_segments(
    const std::vector<std::pair<AudioSegment, AudioBuffer>>& segments,
    const AsrBackendConfig& config, TranscriptionSummary* summary) {
  config.validate();
  if (segments.empty()) {
    throw std::invalid_argument("transcribe_segments requires >= 1 segment");
  }
  if (config.mode == AsrMode::kOffline) {
    return transcribe_offline(segments, config, summary);
  }
  return transcribe_remote(segments, config, summary);
}

std::vector<std::uint8_t> pcm16le_bytes(const AudioBuffer& buffer) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(buffer.samples.size() * 2);
  for (double s : buffer.samples) {
    double scaled = std::round(s * 32768.0);
    int value = static_cast<int>(std::clamp(scaled, -32768.0, 32767.0));
    bytes.push_back(static_cast<std::uint8_t>(value & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((value >> 8) & 0xff));
  }
  return bytes;
}

std::vector<double> samples_from_pcm16le(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) {
    throw Error("PCM16 byte stream has odd length");
  }
  std::vector<double> samples;
  samples.reserve(bytes.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    std::int16_t v = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(bytes[i]) |
        (static_cast<std::uint16_t>(bytes[i + 1]) << 8));
    samples.push_back(v / 32768.0);
  }
  return samples;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(kBase64Alphabet[(v >> 6) & 63]);
    out.push_back(kBase64Alphabet[v & 63]);
  }
  std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    std::uint32_t v = bytes[i] << 16;
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(kBase64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error("base64 input length must be a multiple of 4");
  }
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      char c = text[i + k];
      if (c == '=') {
        if (i + 4 != text.size() || k < 2) {
          throw Error("base64 padding may only end the input");
        }
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw Error("base64 data after padding");
      int val = value_of(c);
      if (val < 0) throw Error(std::string("bad base64 character: ") + c);
      v = (v << 6) | static_cast<std::uint32_t>(val);
    }
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

void write_utterances_file(const std::vector<Utterance>& utterances,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open utterance file for writing: " + path.string());
  }
  for (const Utterance& u : utterances) {
    nlohmann::json record = {
        {"source_id", u.source_id},   {"segment_index", u.segment_index},
        {"start_ms", u.start_ms},     {"end_ms", u.end_ms},
        {"text", u.text},             {"confidence", u.confidence},
        {"skipped", u.skipped},
    };
    out << record.dump() << '\n';
  }
}

std::vector<Utterance> read_utterances_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open utterance file: " + path.string());
  }
  std::vector<Utterance> utterances;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      nlohmann::json record = nlohmann::json::parse(line);
      Utterance u;
      u.source_id = record.at("source_id").get<std::string>();
      u.segment_index = record.at("segment_index").get<int>();
      u.start_ms = record.at("start_ms").get<std::int64_t>();
      u.end_ms = record.at("end_ms").get<std::int64_t>();
      u.text = record.at("text").get<std::string>();
      u.confidence = record.at("confidence").get<double>();
      u.skipped = record.at("skipped").get<bool>();
      utterances.push_back(std::move(u));
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed utterance record in " + path.string() + ": " +
                  e.what());
    }
  }
  return utterances;
}

}  // namespace dialogic
