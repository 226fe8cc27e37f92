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

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "checkeval/errors.hpp"
#include "checkeval/gateway.hpp"

namespace checkeval {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint URL lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string error_message(std::string_view body) {
  auto j = json::parse(body.begin(), body.end(), nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("error")) {
    const auto& e = j["error"];
    if (e.is_object() && e.contains("message") && e["message"].is_string()) {
      return e["message"].get<std::string>();
    }
    if (e.is_string()) return e.get<std::string>();
  }
  return std::string(body.substr(0, 500));
}

httplib::Result post(const HttpBackendOptions& o, const std::string& url, const std::string& body) {
  const auto ep = split_url(url);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(o.timeout);
  client.set_read_timeout(o.timeout);
  client.set_write_timeout(o.timeout);
  httplib::Headers headers;
  if (!o.api_key.empty()) headers.emplace("Authorization", "Bearer " + o.api_key);
  return client.Post(ep.path, headers, body, "application/json");
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  if (options_.chat_url.empty()) throw ConfigError("live backend needs a chat endpoint URL");
  if (options_.embeddings_url.empty()) {
    static constexpr std::string_view kSuffix = "chat/completions";
    std::string url = options_.chat_url;
    if (url.size() >= kSuffix.size() && url.compare(url.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
      url.replace(url.size() - kSuffix.size(), kSuffix.size(), "embeddings");
    }
    options_.embeddings_url = url;
  }
}

std::string HttpBackend::chat_body(const ChatRequest& request) {
  json body{{"model", request.model_id},
            {"messages",
             json::array({json{{"role", "system"}, {"content", request.system_message}},
                          json{{"role", "user"}, {"content", request.user_message}}})},
            {"max_tokens", request.max_output_tokens}};
  if (request.temperature) body["temperature"] = *request.temperature;
  return body.dump();
}

std::string HttpBackend::parse_chat_reply(int status, std::string_view body) {
  if (status < 200 || status >= 300) throw ProviderError(status, error_message(body));
  auto j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded()) throw ProviderError(status, "reply is not JSON");
  if (j.contains("error")) throw ProviderError(status, error_message(body));
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_null()) throw ProviderError(status, "reply has empty content");
    auto text = content.get<std::string>();
    if (text.empty()) throw ProviderError(status, "reply has empty content");
    return text;
  } catch (const json::exception& e) {
    throw ProviderError(status, std::string("unexpected reply shape: ") + e.what());
  }
}

std::vector<double> HttpBackend::parse_embedding_reply(int status, std::string_view body) {
  if (status < 200 || status >= 300) throw ProviderError(status, error_message(body));
  auto j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded()) throw ProviderError(status, "reply is not JSON");
  try {
    auto values = j.at("data").at(0).at("embedding").get<std::vector<double>>();
    if (values.empty()) throw ProviderError(status, "embedding has dimension 0");
    return values;
  } catch (const json::exception& e) {
    throw ProviderError(status, std::string("unexpected reply shape: ") + e.what());
  }
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  auto res = post(options_, options_.chat_url, chat_body(request));
  if (!res) throw TransportError("chat request failed: " + httplib::to_string(res.error()));
  return ChatResponse{parse_chat_reply(res->status, res->body), request.model_id, false};
}

EmbeddingVector HttpBackend::embed(std::string_view text, std::string_view model_id) {
  const json body{{"model", model_id}, {"input", text}};
  auto res = post(options_, options_.embeddings_url, body.dump());
  if (!res) throw TransportError("embedding request failed: " + httplib::to_string(res.error()));
  return EmbeddingVector{parse_embedding_reply(res->status, res->body), std::string(model_id)};
}

}  // namespace checkeval
