#include "dart/rephrase.hpp"

#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <random>
#include <semaphore>
#include <thread>

#include "dart/hash.hpp"
#include "dart/util.hpp"

namespace dart::rephrase {

namespace fs = std::filesystem;

size_t word_count(const std::string& text) {
    return util::split_whitespace(text).size();
}

std::string build_rephrase_prompt(const std::string& text) {
    if (util::trim(text).empty()) {
        throw RephraseError("cannot build a rephrase prompt for empty text");
    }
    return "Please rewrite the following paragraph in " + std::to_string(word_count(text)) +
           " words: " + text;
}

std::string paragraph_of_prompt(const std::string& prompt) {
    static const std::string prefix = "Please rewrite the following paragraph in ";
    if (prompt.rfind(prefix, 0) != 0) return prompt;
    size_t i = prefix.size();
    size_t digits = 0;
    while (i < prompt.size() && prompt[i] >= '0' && prompt[i] <= '9') i++, digits++;
    static const std::string infix = " words: ";
    if (digits == 0 || prompt.compare(i, infix.size(), infix) != 0) return prompt;
    return prompt.substr(i + infix.size());
}

MockKind parse_mock_kind(const std::string& name) {
    if (name == "identity") return MockKind::Identity;
    if (name == "truncate") return MockKind::TruncateLastSentence;
    if (name == "shuffle") return MockKind::ShuffleSynonym;
    throw RephraseError("unknown mock kind: \"" + name + "\" (expected identity|truncate|shuffle)");
}

std::string mock_kind_name(MockKind kind) {
    switch (kind) {
        case MockKind::Identity: return "identity";
        case MockKind::TruncateLastSentence: return "truncate";
        case MockKind::ShuffleSynonym: default: return "shuffle";
    }
}

MockChatClient::MockChatClient(MockKind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

std::string MockChatClient::model_id(MockKind kind, std::uint64_t seed) {
    return "mock-" + mock_kind_name(kind) + "-" + std::to_string(seed);
}

namespace {

std::string drop_last_sentence(const std::string& text) {
    std::vector<std::string> sentences = util::split_sentences(text);
    if (sentences.size() <= 1) return text;
    sentences.pop_back();
    return util::join(sentences, " ");
}

// Tiny synonym table plus seeded adjacent swaps; a stand-in for lexical
// variation, not a real paraphraser.
std::string shuffle_synonyms(const std::string& text, std::uint64_t seed) {
    static const std::pair<const char*, const char*> synonyms[] = {
        {"big", "large"},   {"small", "little"}, {"fast", "quick"},  {"begin", "start"},
        {"show", "reveal"}, {"make", "build"},   {"good", "fine"},   {"result", "outcome"},
        {"study", "survey"}, {"people", "folks"},
    };
    std::vector<std::string> words = util::split_whitespace(text);
    std::string h = hash::sha256_hex(text).substr(0, 16);
    std::uint64_t mix = seed;
    for (char c : h) mix = mix * 131 + static_cast<unsigned char>(c);
    std::mt19937_64 rng(mix);
    for (std::string& w : words) {
        for (auto [from, to] : synonyms) {
            if (w == from) w = to;
        }
    }
    for (size_t i = 0; i + 1 < words.size(); i++) {
        if (util::bounded(rng(), 5) == 0) std::swap(words[i], words[i + 1]);
    }
    return util::join(words, " ");
}

}  // namespace

std::string MockChatClient::complete(const std::string& prompt) {
    calls_.fetch_add(1);
    std::string paragraph = paragraph_of_prompt(prompt);
    switch (kind_) {
        case MockKind::Identity:
            return paragraph;
        case MockKind::TruncateLastSentence:
            return drop_last_sentence(paragraph);
        case MockKind::ShuffleSynonym:
        default:
            return shuffle_synonyms(paragraph, seed_);
    }
}

struct HttpChatClient::Impl {
    explicit Impl(int max_in_flight) : slots(max_in_flight) {}
    std::counting_semaphore<4096> slots;
};

HttpChatClient::HttpChatClient(RephraserConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
    if (config_.max_in_flight < 1) throw RephraseError("max_in_flight must be >= 1");
    if (config_.retry.max_attempts < 1) throw RephraseError("max_attempts must be >= 1");
    impl_ = std::make_unique<Impl>(config_.max_in_flight);
}

HttpChatClient::~HttpChatClient() = default;

std::string HttpChatClient::complete_once(const std::string& prompt) {
    size_t scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw RephraseError("invalid endpoint: " + config_.endpoint);
    }
    size_t path_start = config_.endpoint.find('/', scheme_end + 3);
    std::string base =
        path_start == std::string::npos ? config_.endpoint : config_.endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);

    nlohmann::json body = {
        {"model", config_.model_id},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };

    httplib::Client client(base);
    client.set_read_timeout(300, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        throw RephraseError("transport error: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw RephraseError("status " + std::to_string(res->status) + ": " +
                            res->body.substr(0, 200));
    }
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
        !j["choices"][0].contains("message")) {
        throw RephraseError("malformed completion response");
    }
    return j["choices"][0]["message"].value("content", "");
}

std::string HttpChatClient::complete(const std::string& prompt) {
    impl_->slots.acquire();
    struct Release {
        Impl* impl;
        ~Release() { impl->slots.release(); }
    } release{impl_.get()};

    std::string last_error;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; attempt++) {
        try {
            return complete_once(prompt);
        } catch (const std::exception& e) {
            last_error = e.what();
            if (attempt < config_.retry.max_attempts) {
                std::this_thread::sleep_for(config_.retry.base_backoff * (1 << (attempt - 1)));
            }
        }
    }
    throw RephraseError("chat completion failed after " +
                        std::to_string(config_.retry.max_attempts) +
                        " attempts; last error: " + last_error);
}

std::string cache_path(const RephraserConfig& config, const std::string& prompt) {
    return (fs::path(config.cache_dir) / config.model_id / (hash::sha256_hex(prompt) + ".txt"))
        .string();
}

namespace {

std::string cached_complete(const std::string& prompt, ChatClient& client,
                            const RephraserConfig& config) {
    std::string path;
    if (!config.cache_dir.empty()) {
        path = cache_path(config, prompt);
        std::error_code ec;
        if (fs::exists(path, ec)) return util::read_file(path);
    }
    std::string completion = client.complete(prompt);
    if (util::trim(completion).empty()) {
        throw RephraseError("client returned an empty completion");
    }
    if (!path.empty()) {
        fs::create_directories(fs::path(path).parent_path());
        util::write_file_atomic(path, completion);
    }
    return completion;
}

}  // namespace

RephraseChain rephrase_chain(const std::string& text, ChatClient& client,
                             const RephraserConfig& config) {
    if (util::trim(text).empty()) throw RephraseError("cannot rephrase empty text");

    RephraseChain chain;
    chain.t0 = text;
    chain.model_id = config.model_id;
    chain.word_target_t1 = word_count(chain.t0);
    try {
        chain.t1 = cached_complete(build_rephrase_prompt(chain.t0), client, config);
    } catch (const std::exception& e) {
        throw RephraseError(std::string("rephrase step T0->T1 failed: ") + e.what());
    }
    chain.word_target_t2 = word_count(chain.t1);
    try {
        chain.t2 = cached_complete(build_rephrase_prompt(chain.t1), client, config);
    } catch (const std::exception& e) {
        throw RephraseError(std::string("rephrase step T1->T2 failed: ") + e.what());
    }
    return chain;
}

}  // namespace dart::rephrase
