#include "dart/corpus.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <random>

#include "dart/util.hpp"

namespace dart::corpus {

using nlohmann::ordered_json;

namespace {
const char* kOtherPrefix = "other:";

constexpr size_t kGenerationPrefixTokens = 30;
}  // namespace

Origin Origin::other(const std::string& name) {
    if (util::trim(name).empty()) throw CorpusError("Origin::other requires a non-empty name");
    return Origin(kOtherPrefix + name);
}

Origin Origin::parse(const std::string& s) {
    for (const Origin& o : {human(), gpt35_turbo(), gpt4o(), llama3_70b(), gemini15_flash()}) {
        if (s == o.str()) return o;
    }
    if (s.rfind(kOtherPrefix, 0) == 0) return other(s.substr(6));
    throw CorpusError("unknown origin string: \"" + s + "\"");
}

const std::vector<Origin>& Origin::candidate_llms() {
    static const std::vector<Origin> llms = {gemini15_flash(), gpt35_turbo(), gpt4o(),
                                             llama3_70b()};
    return llms;
}

Domain Domain::other(const std::string& name) {
    if (util::trim(name).empty()) throw CorpusError("Domain::other requires a non-empty name");
    return Domain(kOtherPrefix + name);
}

Domain Domain::parse(const std::string& s) {
    for (const Domain& d : {xsum(), squad(), reddit(), pubmedqa()}) {
        if (s == d.str()) return d;
    }
    if (s.rfind(kOtherPrefix, 0) == 0) return other(s.substr(6));
    throw CorpusError("unknown domain string: \"" + s + "\"");
}

const std::vector<Domain>& Domain::named_domains() {
    static const std::vector<Domain> domains = {pubmedqa(), reddit(), squad(), xsum()};
    return domains;
}

namespace {

TextRecord parse_record_json(const ordered_json& j, size_t line_no) {
    auto fail = [line_no](const std::string& what) -> CorpusError {
        return CorpusError("line " + std::to_string(line_no) + ": " + what);
    };
    if (!j.is_object()) throw fail("record is not a JSON object");
    for (const char* field : {"id", "text", "origin", "domain"}) {
        if (!j.contains(field)) throw fail(std::string("missing \"") + field + "\" field");
        if (!j.at(field).is_string()) throw fail(std::string("\"") + field + "\" is not a string");
    }
    TextRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.text = j.at("text").get<std::string>();
    if (rec.id.empty()) throw fail("empty id");
    if (util::trim(rec.text).empty()) throw fail("empty text");
    try {
        rec.origin = Origin::parse(j.at("origin").get<std::string>());
        rec.domain = Domain::parse(j.at("domain").get<std::string>());
    } catch (const CorpusError& e) {
        throw fail(e.what());
    }
    if (j.contains("question")) {
        if (!j.at("question").is_string()) throw fail("\"question\" is not a string");
        if (!rec.domain.is_pubmedqa()) throw fail("\"question\" present on non-pubmedqa record");
        rec.question = j.at("question").get<std::string>();
    }
    return rec;
}

}  // namespace

std::vector<TextRecord> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file: " + path);

    std::vector<TextRecord> records;
    std::map<std::string, size_t> seen_ids;  // id -> 1-based line
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (util::trim(line).empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw CorpusError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        TextRecord rec = parse_record_json(j, line_no);
        auto [it, inserted] = seen_ids.emplace(rec.id, line_no);
        if (!inserted) {
            throw CorpusError("duplicate id \"" + rec.id + "\" at lines " +
                              std::to_string(it->second) + " and " + std::to_string(line_no));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::string serialize_record(const TextRecord& record) {
    ordered_json j;
    j["id"] = record.id;
    j["text"] = record.text;
    j["origin"] = record.origin.str();
    j["domain"] = record.domain.str();
    if (record.question) j["question"] = *record.question;
    return j.dump();
}

void save_corpus(const std::vector<TextRecord>& records, const std::string& path) {
    std::string out;
    for (const TextRecord& rec : records) {
        out += serialize_record(rec);
        out += '\n';
    }
    util::write_file(path, out);
}

std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(size_t n,
                                                                  const SplitSpec& spec) {
    if (n == 0) throw CorpusError("cannot split an empty record sequence");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw CorpusError("train_fraction must lie in (0,1)");
    }
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; i++) idx[i] = i;

    // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is not pinned by
    // the standard, and split determinism must hold across platforms.
    std::mt19937_64 rng(spec.seed);
    for (size_t i = n - 1; i > 0; i--) {
        size_t j = static_cast<size_t>(util::bounded(rng(), i + 1));
        std::swap(idx[i], idx[j]);
    }

    size_t train_n = static_cast<size_t>(spec.train_fraction * static_cast<double>(n));
    std::vector<size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_n));
    std::vector<size_t> val(idx.begin() + static_cast<std::ptrdiff_t>(train_n), idx.end());
    return {train, val};
}

std::pair<std::vector<TextRecord>, std::vector<TextRecord>> split_train_val(
    const std::vector<TextRecord>& records, const SplitSpec& spec) {
    auto [train_idx, val_idx] = split_indices(records.size(), spec);
    std::vector<TextRecord> train, val;
    train.reserve(train_idx.size());
    val.reserve(val_idx.size());
    for (size_t i : train_idx) train.push_back(records[i]);
    for (size_t i : val_idx) val.push_back(records[i]);
    return {train, val};
}

std::string truncate_first_tokens(const std::string& text, size_t k) {
    if (k < 1) throw CorpusError("truncate_first_tokens requires k >= 1");
    std::vector<std::string> tokens = util::split_whitespace(text);
    if (tokens.empty()) throw CorpusError("cannot truncate an empty text");
    if (tokens.size() > k) tokens.resize(k);
    return util::join(tokens, " ");
}

std::string build_generation_prompt(const TextRecord& record, PromptFamily family) {
    std::string base;
    if (record.domain.is_pubmedqa()) {
        if (!record.question) {
            throw CorpusError("pubmedqa record \"" + record.id + "\" has no question");
        }
        base = "Please answer the question: " + *record.question;
    } else {
        base = "Please provide a continuation for the following content to make it coherent: " +
               truncate_first_tokens(record.text, kGenerationPrefixTokens);
    }
    if (family == PromptFamily::LlamaOrGemini) {
        base += "\nProvide the continuation without any prefix.\n------\nanswer:";
    }
    return base;
}

}  // namespace dart::corpus
