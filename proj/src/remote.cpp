#include "cprl/remote.hpp"

#include <cstdlib>

#include "cprl/rng.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cprl::remote {

namespace detail {

// Thin POST-JSON wrapper with bearer auth, timeouts and retry.
class HttpJsonClient {
public:
    explicit HttpJsonClient(const RemoteConfig& config) : config_(config), client_(config.endpoint) {
        const time_t sec = config.timeout_ms / 1000;
        const time_t usec = (config.timeout_ms % 1000) * 1000;
        client_.set_connection_timeout(sec, usec);
        client_.set_read_timeout(sec, usec);
        client_.set_write_timeout(sec, usec);
    }

    nlohmann::json post_json(const std::string& path, const nlohmann::json& body) {
        httplib::Headers headers;
        if (!config_.auth_env_var.empty()) {
            if (const char* token = std::getenv(config_.auth_env_var.c_str()); token && *token)
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }
        const std::string payload = body.dump();
        std::string last_error;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            auto res = client_.Post(path, headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "http status " + std::to_string(res->status);
                continue;
            }
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("bad json body: ") + e.what();
            }
        }
        throw RemoteError("remote service unavailable after " +
                          std::to_string(config_.max_retries + 1) + " attempts (" + path +
                          "): " + last_error);
    }

private:
    RemoteConfig config_;
    httplib::Client client_;
};

}  // namespace detail

std::string RemoteCondenser::default_prompt_template() {
    return "Summarize the following safety constraint as 'do not touch X tiles' where X is the "
           "prohibited terrain: ";
}

RemoteCondenser::RemoteCondenser(RemoteConfig config, std::string prompt_template)
    : config_(std::move(config)),
      prompt_(std::move(prompt_template)),
      client_(std::make_unique<detail::HttpJsonClient>(config_)) {
    if (prompt_.empty()) prompt_ = default_prompt_template();
}

RemoteCondenser::~RemoteCondenser() = default;

namespace {

std::string trim_to_single_sentence(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    s = s.substr(first, last - first + 1);
    if (const auto nl = s.find('\n'); nl != std::string::npos) s = s.substr(0, nl);
    return s;
}

}  // namespace

lang::CondensedConstraint RemoteCondenser::condense(const lang::Constraint& c) {
    const std::uint64_t key = mix_seed(fnv1a64(prompt_), fnv1a64(c.text));
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return {it->second, c.id};
    }
    const nlohmann::json body = {{"prompt", prompt_}, {"constraint", c.text}};
    const nlohmann::json reply = client_->post_json("/v1/condense", body);
    if (!reply.contains("condensed") || !reply["condensed"].is_string())
        throw RemoteError("condense reply missing 'condensed' string");
    const std::string condensed = trim_to_single_sentence(reply["condensed"].get<std::string>());
    if (condensed.empty()) throw RemoteError("condense reply was empty");
    {
        std::unique_lock lock(mutex_);
        cache_.emplace(key, condensed);
    }
    return {condensed, c.id};
}

std::size_t RemoteCondenser::cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

RemoteEmbedder::RemoteEmbedder(RemoteConfig config)
    : config_(std::move(config)), client_(std::make_unique<detail::HttpJsonClient>(config_)) {}

RemoteEmbedder::~RemoteEmbedder() = default;

int RemoteEmbedder::dim() const {
    std::shared_lock lock(mutex_);
    return dim_;
}

embed::Embedding RemoteEmbedder::embed(const std::string& text) const {
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(text); it != cache_.end()) return it->second;
    }
    const nlohmann::json reply = client_->post_json("/v1/embed", {{"text", text}});
    if (!reply.contains("embedding") || !reply["embedding"].is_array())
        throw RemoteError("embed reply missing 'embedding' array");
    const auto& arr = reply["embedding"];
    embed::Embedding v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    {
        std::unique_lock lock(mutex_);
        if (dim_ == 0) {
            if (v.size() == 0) throw RemoteError("embedding service returned an empty vector");
            dim_ = static_cast<int>(v.size());
        } else if (v.size() != dim_) {
            throw RemoteError("embedding dimension changed: expected " + std::to_string(dim_) +
                              ", got " + std::to_string(v.size()));
        }
        cache_.emplace(text, v);
    }
    return v;
}

std::size_t RemoteEmbedder::cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

}  // namespace cprl::remote
