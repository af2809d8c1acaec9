#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <httplib.h>

#include "redteam/backend.hpp"

namespace redteam {

// Generic chat-completion client. Credentials come from the environment,
// never from the config file.
struct HttpBackendConfig {
    std::string id = "http";
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model;
    int timeout_s = 30;
    std::string auth_env = "REDTEAM_API_KEY";
    double temperature = 0.0;
};

/// `default_auth_env` seeds `auth_env` when the config file leaves it unset;
/// judge backends pass their own credential variable here.
inline HttpBackendConfig parse_http_backend_config(const json& j, const std::string& context,
                                                   const std::string& default_auth_env = "") {
    HttpBackendConfig cfg;
    if (!default_auth_env.empty()) cfg.auth_env = default_auth_env;
    try {
        cfg.base_url = j.at("base_url").get<std::string>();
        cfg.model = j.at("model").get<std::string>();
        if (j.contains("id")) cfg.id = j.at("id").get<std::string>();
        if (j.contains("path")) cfg.path = j.at("path").get<std::string>();
        if (j.contains("timeout_s")) cfg.timeout_s = j.at("timeout_s").get<int>();
        if (j.contains("auth_env")) cfg.auth_env = j.at("auth_env").get<std::string>();
        if (j.contains("temperature")) cfg.temperature = j.at("temperature").get<double>();
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    if (cfg.base_url.empty()) throw ParseError(context + ": \"base_url\" must not be empty");
    if (cfg.model.empty()) throw ParseError(context + ": \"model\" must not be empty");
    if (cfg.timeout_s < 1) throw ParseError(context + ": \"timeout_s\" must be >= 1");
    return cfg;
}

inline HttpBackendConfig load_http_backend_config(const std::string& path,
                                                  const std::string& default_auth_env = "") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open backend config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_http_backend_config(j, path, default_auth_env);
}

class HttpBackend : public Backend {
  public:
    explicit HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}

    std::string id() const override { return cfg_.id; }

    CompletionResponse complete(const CompletionRequest& req) override {
        validate_completion_request(req);
        return chat(render_llm_prompt(req), req.max_tokens);
    }

    CompletionResponse chat(const std::string& prompt, int max_tokens) override {
        json body{{"model", cfg_.model},
                  {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
                  {"temperature", cfg_.temperature},
                  {"max_tokens", max_tokens}};

        // One client per call: workers may call concurrently and the harness
        // already bounds how many are in flight.
        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(cfg_.timeout_s, 0);
        client.set_read_timeout(cfg_.timeout_s, 0);
        client.set_write_timeout(cfg_.timeout_s, 0);
        httplib::Headers headers;
        if (!cfg_.auth_env.empty()) {
            const char* token = std::getenv(cfg_.auth_env.c_str());
            if (token && *token)
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        CompletionResponse out;
        auto start = std::chrono::steady_clock::now();
        httplib::Result res = client.Post(cfg_.path, headers, body.dump(), "application/json");
        out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();

        if (!res) {
            out.finish_reason = FinishReason::TransportError;
            out.diagnostic = "transport: " + httplib::to_string(res.error());
            return out;
        }
        if (res->status < 200 || res->status > 299) {
            out.finish_reason = FinishReason::TransportError;
            out.diagnostic = "HTTP " + std::to_string(res->status);
            if (!res->body.empty()) out.diagnostic += ": " + res->body.substr(0, 200);
            return out;
        }

        json reply;
        try {
            reply = json::parse(res->body);
            const json& choice = reply.at("choices").at(0);
            out.raw_text = choice.at("message").at("content").get<std::string>();
            std::string finish =
                choice.contains("finish_reason") && choice.at("finish_reason").is_string()
                    ? choice.at("finish_reason").get<std::string>()
                    : "stop";
            if (finish == "length") {
                out.finish_reason = FinishReason::LengthCapped;
            } else if (finish == "content_filter") {
                out.finish_reason = FinishReason::Filtered;
            } else {
                out.finish_reason = FinishReason::Complete;
            }
        } catch (const json::exception& e) {
            out.raw_text.clear();
            out.finish_reason = FinishReason::TransportError;
            out.diagnostic = std::string("malformed response body: ") + e.what();
        }
        return out;
    }

  private:
    HttpBackendConfig cfg_;
};

}  // namespace redteam
