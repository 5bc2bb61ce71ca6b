#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dart::corpus {

class CorpusError : public std::runtime_error {
  public:
    explicit CorpusError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Origin of a text: human, one of the four candidate LLMs, or a named
/// extension. The named variants serialize to the exact wire strings below;
/// extensions serialize as "other:{name}". Ordering (and every tie-break that
/// depends on it) is lexicographic on the serialized string.
class Origin {
  public:
    static Origin human() { return Origin("human"); }
    static Origin gpt35_turbo() { return Origin("gpt-3.5-turbo"); }
    static Origin gpt4o() { return Origin("gpt-4o"); }
    static Origin llama3_70b() { return Origin("llama3-70b"); }
    static Origin gemini15_flash() { return Origin("gemini-1.5-flash"); }
    static Origin other(const std::string& name);

    /// Accepts the five wire strings or "other:{name}"; anything else throws.
    static Origin parse(const std::string& s);

    const std::string& str() const { return repr_; }
    bool is_human() const { return repr_ == "human"; }

    /// The four named candidate LLMs, in serialization order.
    static const std::vector<Origin>& candidate_llms();

    friend bool operator==(const Origin& a, const Origin& b) { return a.repr_ == b.repr_; }
    friend bool operator!=(const Origin& a, const Origin& b) { return a.repr_ != b.repr_; }
    friend bool operator<(const Origin& a, const Origin& b) { return a.repr_ < b.repr_; }

  private:
    explicit Origin(std::string repr) : repr_(std::move(repr)) {}
    std::string repr_;
};

/// Source dataset of a text. Same serialization scheme as Origin.
class Domain {
  public:
    static Domain xsum() { return Domain("xsum"); }
    static Domain squad() { return Domain("squad"); }
    static Domain reddit() { return Domain("reddit"); }
    static Domain pubmedqa() { return Domain("pubmedqa"); }
    static Domain other(const std::string& name);

    static Domain parse(const std::string& s);

    const std::string& str() const { return repr_; }
    bool is_pubmedqa() const { return repr_ == "pubmedqa"; }

    static const std::vector<Domain>& named_domains();

    friend bool operator==(const Domain& a, const Domain& b) { return a.repr_ == b.repr_; }
    friend bool operator!=(const Domain& a, const Domain& b) { return a.repr_ != b.repr_; }
    friend bool operator<(const Domain& a, const Domain& b) { return a.repr_ < b.repr_; }

  private:
    explicit Domain(std::string repr) : repr_(std::move(repr)) {}
    std::string repr_;
};

struct TextRecord {
    std::string id;
    std::string text;
    Origin origin = Origin::human();
    Domain domain = Domain::xsum();
    std::optional<std::string> question;  // pubmedqa only
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

/// One TextRecord per JSONL line, order preserved. Errors carry 1-based line
/// numbers; duplicate ids name both offending lines.
std::vector<TextRecord> load_corpus(const std::string& path);

std::string serialize_record(const TextRecord& record);
void save_corpus(const std::vector<TextRecord>& records, const std::string& path);

/// Deterministic index split: Fisher-Yates under the seed, first
/// floor(train_fraction * n) indices become the training set.
std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(size_t n, const SplitSpec& spec);

std::pair<std::vector<TextRecord>, std::vector<TextRecord>> split_train_val(
    const std::vector<TextRecord>& records, const SplitSpec& spec);

/// First min(k, token_count) whitespace tokens, rejoined by single spaces.
std::string truncate_first_tokens(const std::string& text, size_t k);

enum class PromptFamily { Gpt, LlamaOrGemini };

/// The AIGT-generation prompt for one record. Continuation prompts carry the
/// first 30 tokens of the text; pubmedqa records use their question instead.
/// The Llama/Gemini form appends the no-prefix constraint block.
std::string build_generation_prompt(const TextRecord& record, PromptFamily family);

}  // namespace dart::corpus
