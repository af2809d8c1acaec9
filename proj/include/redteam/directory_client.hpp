#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include <httplib.h>

#include "redteam/evaluate.hpp"

namespace redteam {

class DirectoryError : public std::runtime_error {
  public:
    explicit DirectoryError(const std::string& what) : std::runtime_error(what) {}
};

struct DirectoryClientConfig {
    std::string base_url = "https://api.github.com";
    std::string path_template = "/users/{login}";
    std::string cache_dir;  // required: audits must be re-runnable offline
    std::int64_t politeness_delay_ms = 0;
    std::string token_env = "REDTEAM_DIRECTORY_TOKEN";
    int timeout_s = 30;
    std::string user_agent = "redteam-audit";
};

inline DirectoryClientConfig parse_directory_client_config(const json& j,
                                                           const std::string& context) {
    DirectoryClientConfig cfg;
    try {
        cfg.cache_dir = j.at("cache_dir").get<std::string>();
        if (j.contains("base_url")) cfg.base_url = j.at("base_url").get<std::string>();
        if (j.contains("path_template"))
            cfg.path_template = j.at("path_template").get<std::string>();
        if (j.contains("politeness_delay_ms"))
            cfg.politeness_delay_ms = j.at("politeness_delay_ms").get<std::int64_t>();
        if (j.contains("token_env")) cfg.token_env = j.at("token_env").get<std::string>();
        if (j.contains("timeout_s")) cfg.timeout_s = j.at("timeout_s").get<int>();
        if (j.contains("user_agent")) cfg.user_agent = j.at("user_agent").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    if (cfg.cache_dir.empty()) throw ParseError(context + ": \"cache_dir\" must not be empty");
    if (cfg.path_template.find("{login}") == std::string::npos)
        throw ParseError(context + ": \"path_template\" must contain {login}");
    if (cfg.timeout_s < 1) throw ParseError(context + ": \"timeout_s\" must be >= 1");
    return cfg;
}

inline DirectoryClientConfig load_directory_client_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open directory config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_directory_client_config(j, path);
}

// Looks handles up against the platform's public user endpoint, writing one
// cache file per handle (negative results included) so a later audit run
// never repeats a request.
class LiveDirectory : public UserDirectory {
  public:
    explicit LiveDirectory(DirectoryClientConfig cfg) : cfg_(std::move(cfg)) {
        std::filesystem::create_directories(cfg_.cache_dir);
    }

    std::optional<UserRecord> lookup(const std::string& login) override {
        std::string key = text::ascii_lower(login);
        if (!valid_platform_handle(key)) return std::nullopt;

        std::lock_guard lock(mutex_);
        auto memo = memo_.find(key);
        if (memo != memo_.end()) return memo->second;
        if (auto cached = read_cache(key)) {
            memo_[key] = *cached;
            return *cached;
        }
        std::optional<UserRecord> fetched = fetch(key);
        write_cache(key, fetched);
        memo_[key] = fetched;
        return fetched;
    }

    size_t requests_made() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }

  private:
    std::string cache_path(const std::string& key) const {
        return (std::filesystem::path(cfg_.cache_dir) / (key + ".json")).string();
    }

    std::optional<std::optional<UserRecord>> read_cache(const std::string& key) const {
        std::ifstream in(cache_path(key), std::ios::binary);
        if (!in) return std::nullopt;
        json j;
        try {
            in >> j;
            if (!j.at("found").get<bool>()) return std::optional<UserRecord>{};
            const json& rec = j.at("record");
            UserRecord record;
            record.login = rec.at("login").get<std::string>();
            if (rec.contains("email") && rec.at("email").is_string())
                record.email = rec.at("email").get<std::string>();
            if (rec.contains("location") && rec.at("location").is_string())
                record.location = rec.at("location").get<std::string>();
            return std::optional<UserRecord>{record};
        } catch (const json::exception& e) {
            throw ParseError(cache_path(key) + ": corrupt cache entry: " + e.what());
        }
    }

    void write_cache(const std::string& key, const std::optional<UserRecord>& record) const {
        json j;
        if (record) {
            json rec{{"login", record->login}};
            if (record->email) rec["email"] = *record->email;
            if (record->location) rec["location"] = *record->location;
            j = json{{"found", true}, {"record", rec}};
        } else {
            j = json{{"found", false}};
        }
        std::ofstream out(cache_path(key), std::ios::trunc | std::ios::binary);
        out << j.dump(2) << '\n';
    }

    std::optional<UserRecord> fetch(const std::string& key) const {
        if (cfg_.politeness_delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg_.politeness_delay_ms));

        std::string path = cfg_.path_template;
        path.replace(path.find("{login}"), 7, key);

        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(cfg_.timeout_s, 0);
        client.set_read_timeout(cfg_.timeout_s, 0);
        httplib::Headers headers{{"User-Agent", cfg_.user_agent},
                                 {"Accept", "application/json"}};
        if (!cfg_.token_env.empty()) {
            const char* token = std::getenv(cfg_.token_env.c_str());
            if (token && *token)
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        ++requests_;
        httplib::Result res = client.Get(path, headers);
        if (!res)
            throw DirectoryError("directory lookup for \"" + key +
                                 "\" failed: " + httplib::to_string(res.error()));
        if (res->status == 404) return std::nullopt;
        if (res->status < 200 || res->status > 299)
            throw DirectoryError("directory lookup for \"" + key + "\" failed: HTTP " +
                                 std::to_string(res->status));
        try {
            json j = json::parse(res->body);
            UserRecord record;
            record.login = j.at("login").get<std::string>();
            if (j.contains("email") && j.at("email").is_string())
                record.email = j.at("email").get<std::string>();
            if (j.contains("location") && j.at("location").is_string())
                record.location = j.at("location").get<std::string>();
            return record;
        } catch (const json::exception& e) {
            throw DirectoryError("directory lookup for \"" + key +
                                 "\" returned malformed JSON: " + e.what());
        }
    }

    DirectoryClientConfig cfg_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::optional<UserRecord>> memo_;
    mutable size_t requests_ = 0;
};

}  // namespace redteam
