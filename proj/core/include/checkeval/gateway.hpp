// Copyright 2026 The checkeval Authors
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

#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace checkeval {

/// A single-turn chat completion request (one system and one user message).
struct ChatRequest {
  std::string model_id;
  std::string system_message;
  std::string user_message;
  /// Empty means the provider's default temperature.
  std::optional<double> temperature = 0.0;
  int max_output_tokens = 1024;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

void validate(const ChatRequest& request);

struct ChatResponse {
  std::string text;
  std::string model_id;
  bool cached = false;
};

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_id;
};

/// Stable content hash over (model_id, system_message, user_message, temperature).
std::string request_hash(const ChatRequest& request);
std::string embedding_hash(std::string_view text, std::string_view model_id);

/// Provider behind the gateway.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual EmbeddingVector embed(std::string_view text, std::string_view model_id) = 0;
};

/// Deterministic offline backend.
///
/// Chat replies come from a script keyed by request_hash(); fixture files
/// are line-delimited JSON of {request_hash, response_text}. Embeddings are
/// hashed bags of tokens, so they are non-negative and lexical overlap
/// raises cosine similarity.
class MockBackend final : public ChatBackend {
 public:
  static constexpr std::size_t kDefaultEmbeddingDim = 64;

  explicit MockBackend(std::uint64_t embedding_seed = 0,
                       std::size_t embedding_dim = kDefaultEmbeddingDim);

  static std::shared_ptr<MockBackend> from_fixture_file(const std::filesystem::path& path);

  void script(std::string request_hash, std::string response_text);
  void script(const ChatRequest& request, std::string response_text);
  void load_fixture_file(const std::filesystem::path& path);
  std::size_t script_size() const;

  ChatResponse complete(const ChatRequest& request) override;
  EmbeddingVector embed(std::string_view text, std::string_view model_id) override;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> script_;
  std::uint64_t embedding_seed_;
  std::size_t embedding_dim_;
};

struct HttpBackendOptions {
  /// OpenAI-compatible chat-completions endpoint, e.g. https://host/v1/chat/completions.
  std::string chat_url;
  /// Defaults to chat_url with its trailing "chat/completions" replaced by "embeddings".
  std::string embeddings_url;
  std::string api_key;
  std::chrono::seconds timeout{120};

  /// Reads CHECKEVAL_API_URL and CHECKEVAL_API_KEY; ConfigError if the URL is unset.
  static HttpBackendOptions from_environment();
};

class HttpBackend final : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  ChatResponse complete(const ChatRequest& request) override;
  EmbeddingVector embed(std::string_view text, std::string_view model_id) override;

  /// Wire body sent for a chat request.
  static std::string chat_body(const ChatRequest& request);
  /// Extracts the reply text; ProviderError for error payloads.
  static std::string parse_chat_reply(int status, std::string_view body);
  static std::vector<double> parse_embedding_reply(int status, std::string_view body);

 private:
  HttpBackendOptions options_;
};

struct GatewayOptions {
  /// Cache directory; one file per request key. Empty disables caching.
  std::filesystem::path cache_dir;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  int max_inflight = 4;
};

struct GatewayStats {
  std::size_t backend_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t retries = 0;
};

/// Thread-safe front door to a backend: caching, retries, in-flight limit.
class Gateway {
 public:
  static constexpr int kMaxInflightLimit = 64;

  Gateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options = {});
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  ChatResponse complete(const ChatRequest& request) const;
  /// InvalidArgument for empty text; ProviderError for empty or non-finite vectors.
  EmbeddingVector embed(std::string_view text, std::string_view model_id) const;

  GatewayStats stats() const;
  const GatewayOptions& options() const noexcept { return options_; }

  /// Removes every cache entry; returns the number of files deleted.
  static std::size_t purge_cache(const std::filesystem::path& cache_dir);

 private:
  template <typename F>
  auto with_retries(F&& call) const;

  std::shared_ptr<ChatBackend> backend_;
  GatewayOptions options_;
  mutable std::counting_semaphore<kMaxInflightLimit> inflight_;
  mutable std::atomic<std::size_t> backend_calls_{0};
  mutable std::atomic<std::size_t> cache_hits_{0};
  mutable std::atomic<std::size_t> retries_{0};
};

}  // namespace checkeval
