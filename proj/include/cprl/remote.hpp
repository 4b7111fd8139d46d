#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cprl/constraints.hpp"
#include "cprl/embedding.hpp"

namespace cprl::remote {

// Shared client settings for the condenser and embedding services. The auth
// token is read from the named environment variable at call time and sent as
// a bearer header; it is never written to reports.
struct RemoteConfig {
    std::string endpoint;      // e.g. "http://127.0.0.1:8642"
    std::string auth_env_var;  // empty -> unauthenticated
    int timeout_ms = 5000;
    int max_retries = 2;  // retries after the first attempt
};

class RemoteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
class HttpJsonClient;
}

// Decoder-service condenser. POSTs {"prompt", "constraint"} to /v1/condense
// and expects {"condensed": "..."}; results are cached by
// (prompt-hash, constraint-hash). All transport failures, timeouts and empty
// completions surface as RemoteError after max_retries further attempts.
class RemoteCondenser {
public:
    RemoteCondenser(RemoteConfig config, std::string prompt_template);
    ~RemoteCondenser();

    lang::CondensedConstraint condense(const lang::Constraint& c);

    std::size_t cache_size() const;
    const std::string& prompt_template() const { return prompt_; }

    static std::string default_prompt_template();

private:
    RemoteConfig config_;
    std::string prompt_;
    std::unique_ptr<detail::HttpJsonClient> client_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, std::string> cache_;
};

// Embedding-service backend. POSTs {"text"} to /v1/embed and expects
// {"embedding": [..]}. The vector is returned verbatim; its dimension is
// validated against the first-seen dimension. Responses are cached by text.
class RemoteEmbedder final : public embed::TextEncoder {
public:
    explicit RemoteEmbedder(RemoteConfig config);
    ~RemoteEmbedder();

    // 0 until the first successful call establishes the service dimension.
    int dim() const override;
    embed::Embedding embed(const std::string& text) const override;

    std::size_t cache_size() const;

private:
    RemoteConfig config_;
    std::unique_ptr<detail::HttpJsonClient> client_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::string, embed::Embedding> cache_;
    mutable int dim_ = 0;
};

}  // namespace cprl::remote
