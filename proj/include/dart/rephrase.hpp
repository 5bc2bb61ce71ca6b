#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace dart::rephrase {

class RephraseError : public std::runtime_error {
  public:
    explicit RephraseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Number of whitespace-delimited words; 0 for empty text.
size_t word_count(const std::string& text);

/// "Please rewrite the following paragraph in {n} words: {paragraph}" with
/// n = word_count(text). Throws on empty text.
std::string build_rephrase_prompt(const std::string& text);

/// If `prompt` is a rephrase prompt, returns the embedded paragraph;
/// otherwise returns the prompt unchanged. Lets mock clients act on the text
/// itself.
std::string paragraph_of_prompt(const std::string& prompt);

/// Chat-completion capability. `complete` may be called from several workers
/// at once; implementations bound their own in-flight requests and retry
/// internally.
class ChatClient {
  public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_backoff{250};
};

struct RephraserConfig {
    std::string model_id = "gpt-4o-2024-05-13";
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    int max_in_flight = 4;
    RetryPolicy retry;
    std::string cache_dir;  // empty disables the on-disk cache
};

enum class MockKind { Identity, TruncateLastSentence, ShuffleSynonym };

MockKind parse_mock_kind(const std::string& name);
std::string mock_kind_name(MockKind kind);

/// Deterministic offline stand-in for the rephraser LLM. Output is a pure
/// function of (kind, seed, prompt), so cached and uncached runs agree.
class MockChatClient : public ChatClient {
  public:
    MockChatClient(MockKind kind, std::uint64_t seed);

    std::string complete(const std::string& prompt) override;
    size_t calls() const { return calls_.load(); }

    static std::string model_id(MockKind kind, std::uint64_t seed);

  private:
    MockKind kind_;
    std::uint64_t seed_;
    std::atomic<size_t> calls_{0};
};

/// OpenAI-compatible chat completion client. Requests carry
/// {"model", "messages"}; the completion is choices[0].message.content.
/// Enforces max_in_flight with a semaphore and retries with exponential
/// backoff; the final error carries the attempt count and last status.
class HttpChatClient : public ChatClient {
  public:
    HttpChatClient(RephraserConfig config, std::string api_key);
    ~HttpChatClient() override;

    std::string complete(const std::string& prompt) override;

  private:
    std::string complete_once(const std::string& prompt);

    RephraserConfig config_;
    std::string api_key_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// T0 -> T1 -> T2. T2 is always generated from T1.
struct RephraseChain {
    std::string t0;
    std::string t1;
    std::string t2;
    std::string model_id;
    size_t word_target_t1 = 0;  // n in T1's prompt = word_count(t0)
    size_t word_target_t2 = 0;  // n in T2's prompt = word_count(t1)
};

/// Completion cache path: {cache_dir}/{model_id}/{sha256(prompt)}.txt
std::string cache_path(const RephraserConfig& config, const std::string& prompt);

/// Runs the two-step chain through the cache; cache hits never re-call the
/// client. Empty completions are an error and are never cached.
RephraseChain rephrase_chain(const std::string& text, ChatClient& client,
                             const RephraserConfig& config);

}  // namespace dart::rephrase
