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

#include "checkeval/gateway.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "checkeval/errors.hpp"
#include "checkeval/hash.hpp"
#include "checkeval/json_io.hpp"
#include "checkeval/text.hpp"

namespace checkeval {

using nlohmann::json;

void validate(const ChatRequest& request) {
  if (request.model_id.empty()) throw InvalidArgument("chat request has no model id");
  if (request.system_message.empty() || request.user_message.empty()) {
    throw InvalidArgument("chat request messages must be non-empty");
  }
  if (request.temperature && !(*request.temperature >= 0.0)) {
    throw InvalidArgument("chat request temperature must be >= 0");
  }
  if (request.max_output_tokens <= 0) {
    throw InvalidArgument("chat request max_output_tokens must be positive");
  }
}

std::string request_hash(const ChatRequest& request) {
  const json key = json::array({"chat", request.model_id, request.system_message,
                                request.user_message,
                                request.temperature ? json(*request.temperature) : json(nullptr)});
  return sha256_hex(key.dump());
}

std::string embedding_hash(std::string_view text, std::string_view model_id) {
  return sha256_hex(json::array({"embed", model_id, text}).dump());
}

// ---------------------------------------------------------------------------
// MockBackend

MockBackend::MockBackend(std::uint64_t embedding_seed, std::size_t embedding_dim)
    : embedding_seed_(embedding_seed), embedding_dim_(embedding_dim) {
  if (embedding_dim_ == 0) throw InvalidArgument("mock embedding dimension must be positive");
}

std::shared_ptr<MockBackend> MockBackend::from_fixture_file(const std::filesystem::path& path) {
  auto backend = std::make_shared<MockBackend>();
  backend->load_fixture_file(path);
  return backend;
}

void MockBackend::script(std::string hash, std::string response_text) {
  std::lock_guard lock(mu_);
  script_[std::move(hash)] = std::move(response_text);
}

void MockBackend::script(const ChatRequest& request, std::string response_text) {
  script(request_hash(request), std::move(response_text));
}

void MockBackend::load_fixture_file(const std::filesystem::path& path) {
  for (const auto& row : read_jsonl(path)) {
    if (!row.contains("request_hash") || !row.contains("response_text")) {
      throw ParseError("mock fixture row lacks request_hash/response_text in " + path.string(),
                       row.dump());
    }
    script(row["request_hash"].get<std::string>(), row["response_text"].get<std::string>());
  }
}

std::size_t MockBackend::script_size() const {
  std::lock_guard lock(mu_);
  return script_.size();
}

ChatResponse MockBackend::complete(const ChatRequest& request) {
  const auto key = request_hash(request);
  std::lock_guard lock(mu_);
  auto it = script_.find(key);
  if (it == script_.end()) {
    throw MissingFixtureError("mock backend has no scripted reply for request " + key +
                              " (model " + request.model_id + ")");
  }
  return ChatResponse{it->second, request.model_id, false};
}

EmbeddingVector MockBackend::embed(std::string_view input, std::string_view model_id) {
  EmbeddingVector v;
  v.model_id = std::string(model_id);
  v.values.assign(embedding_dim_, 0.0);
  auto bucket = [&](std::string_view token) {
    const auto h = sha256_hex(std::to_string(embedding_seed_) + ":" + std::string(token));
    return std::stoull(h.substr(0, 15), nullptr, 16) % embedding_dim_;
  };
  auto tokens = text::tokenize(input);
  if (tokens.empty()) tokens.emplace_back(input);
  for (const auto& t : tokens) v.values[bucket(t)] += 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      inflight_(std::clamp(options_.max_inflight, 1, kMaxInflightLimit)) {
  if (!backend_) throw InvalidArgument("gateway needs a backend");
  if (options_.max_inflight < 1 || options_.max_inflight > kMaxInflightLimit) {
    throw InvalidArgument("max_inflight must be in [1, " + std::to_string(kMaxInflightLimit) + "]");
  }
  if (!options_.cache_dir.empty()) std::filesystem::create_directories(options_.cache_dir);
}

namespace {

bool is_transient(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const TransportError&) {
    return true;
  } catch (const ProviderError& e) {
    return e.status() == 429 || e.status() >= 500;
  } catch (...) {
    return false;
  }
}

class InflightSlot {
 public:
  explicit InflightSlot(std::counting_semaphore<Gateway::kMaxInflightLimit>& s) : s_(s) {
    s_.acquire();
  }
  ~InflightSlot() { s_.release(); }
  InflightSlot(const InflightSlot&) = delete;
  InflightSlot& operator=(const InflightSlot&) = delete;

 private:
  std::counting_semaphore<Gateway::kMaxInflightLimit>& s_;
};

std::optional<json> read_cache(const std::filesystem::path& file) {
  std::error_code ec;
  if (!std::filesystem::exists(file, ec)) return std::nullopt;
  try {
    return json::parse(read_text_file(file));
  } catch (const std::exception& e) {
    spdlog::warn("ignoring unreadable cache entry {}: {}", file.string(), e.what());
    return std::nullopt;
  }
}

}  // namespace

template <typename F>
auto Gateway::with_retries(F&& call) const {
  for (int attempt = 0;; ++attempt) {
    try {
      InflightSlot slot(inflight_);
      backend_calls_.fetch_add(1, std::memory_order_relaxed);
      return call();
    } catch (...) {
      auto ep = std::current_exception();
      if (attempt >= options_.max_retries || !is_transient(ep)) std::rethrow_exception(ep);
      retries_.fetch_add(1, std::memory_order_relaxed);
      const auto delay = options_.initial_backoff * (1LL << std::min(attempt, 16));
      spdlog::debug("transient backend failure, retry {} in {} ms", attempt + 1, delay.count());
      std::this_thread::sleep_for(delay);
    }
  }
}

ChatResponse Gateway::complete(const ChatRequest& request) const {
  validate(request);
  const bool caching = !options_.cache_dir.empty();
  const auto key = request_hash(request);
  const auto file = options_.cache_dir / (key + ".json");
  if (caching) {
    if (auto hit = read_cache(file); hit && hit->contains("text")) {
      cache_hits_.fetch_add(1, std::memory_order_relaxed);
      return ChatResponse{(*hit)["text"].get<std::string>(), request.model_id, true};
    }
  }
  ChatResponse response = with_retries([&] { return backend_->complete(request); });
  response.cached = false;
  if (caching) {
    write_text_file_atomic(file, json{{"model_id", request.model_id}, {"text", response.text}}.dump());
  }
  return response;
}

EmbeddingVector Gateway::embed(std::string_view input, std::string_view model_id) const {
  if (input.empty()) throw InvalidArgument("embed: text must be non-empty");
  const bool caching = !options_.cache_dir.empty();
  const auto file = options_.cache_dir / (embedding_hash(input, model_id) + ".json");
  if (caching) {
    if (auto hit = read_cache(file); hit && hit->contains("values")) {
      cache_hits_.fetch_add(1, std::memory_order_relaxed);
      return EmbeddingVector{(*hit)["values"].get<std::vector<double>>(), std::string(model_id)};
    }
  }
  EmbeddingVector v = with_retries([&] { return backend_->embed(input, model_id); });
  if (v.values.empty()) throw ProviderError(200, "embedding has dimension 0");
  for (double x : v.values) {
    if (!std::isfinite(x)) throw ProviderError(200, "embedding contains non-finite values");
  }
  if (caching) {
    write_text_file_atomic(file, json{{"model_id", v.model_id}, {"values", v.values}}.dump());
  }
  return v;
}

GatewayStats Gateway::stats() const {
  return GatewayStats{backend_calls_.load(), cache_hits_.load(), retries_.load()};
}

std::size_t Gateway::purge_cache(const std::filesystem::path& cache_dir) {
  std::size_t removed = 0;
  std::error_code ec;
  if (!std::filesystem::exists(cache_dir, ec)) return 0;
  for (const auto& entry : std::filesystem::directory_iterator(cache_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      std::filesystem::remove(entry.path());
      ++removed;
    }
  }
  return removed;
}

HttpBackendOptions HttpBackendOptions::from_environment() {
  HttpBackendOptions o;
  const char* url = std::getenv("CHECKEVAL_API_URL");
  if (!url || !*url) throw ConfigError("CHECKEVAL_API_URL is not set");
  o.chat_url = url;
  if (const char* key = std::getenv("CHECKEVAL_API_KEY")) o.api_key = key;
  return o;
}

}  // namespace checkeval
