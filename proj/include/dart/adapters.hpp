#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "dart/amr.hpp"

namespace dart::amr {

class AdapterError : public std::runtime_error {
  public:
    explicit AdapterError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bridge to an external text->AMR semantic parser. One document per call;
/// the returned text may hold several PENMAN graphs (one per sentence).
class ParserAdapter {
  public:
    virtual ~ParserAdapter() = default;
    virtual std::string kind() const = 0;
    virtual std::string parse_document(const std::string& text) = 0;
};

/// Lookup table from sha256(text) to a PENMAN file, loaded from a JSONL
/// manifest of {"text_sha256": ..., "penman_path": ...}. Relative paths
/// resolve against the manifest's directory.
class FixtureAdapter : public ParserAdapter {
  public:
    explicit FixtureAdapter(const std::string& manifest_path);
    /// In-memory table, mainly for tests: sha256(text) -> PENMAN text.
    explicit FixtureAdapter(std::map<std::string, std::string> penman_by_hash);

    std::string kind() const override { return "fixture"; }
    std::string parse_document(const std::string& text) override;

  private:
    std::map<std::string, std::string> path_by_hash_;
    std::map<std::string, std::string> penman_by_hash_;
};

/// Runs a shell command with the document on stdin; PENMAN is read from
/// stdout and the process must exit 0.
class CommandAdapter : public ParserAdapter {
  public:
    explicit CommandAdapter(std::string command);

    std::string kind() const override { return "command"; }
    std::string parse_document(const std::string& text) override;

  private:
    std::string command_;
};

/// POSTs the document to an HTTP endpoint; a 200 response body is the PENMAN.
class HttpAdapter : public ParserAdapter {
  public:
    explicit HttpAdapter(std::string endpoint);

    std::string kind() const override { return "http"; }
    std::string parse_document(const std::string& text) override;

  private:
    std::string endpoint_;
};

/// Full adapter round trip: obtain PENMAN, parse it, and merge multi-graph
/// output under a synthetic root.
AmrGraph parse_text_to_amr(const std::string& text, ParserAdapter& adapter);

}  // namespace dart::amr
