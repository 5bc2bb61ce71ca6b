#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dart::amr {

class AmrError : public std::runtime_error {
  public:
    explicit AmrError(const std::string& msg) : std::runtime_error(msg) {}
};

/// PENMAN syntax error. Every kind carries the byte offset it was detected at.
class PenmanError : public std::runtime_error {
  public:
    enum class Kind {
        EmptyInput,
        UnbalancedParenthesis,
        MissingSlash,
        DuplicateVariable,
        UndefinedVariable,
        UnterminatedString,
        TrailingContent,
        Unexpected,
    };

    PenmanError(Kind kind, size_t offset, const std::string& msg)
        : std::runtime_error(msg), kind_(kind), offset_(offset) {}

    Kind kind() const { return kind_; }
    size_t offset() const { return offset_; }

  private:
    Kind kind_;
    size_t offset_;
};

/// Value position of a PENMAN relation: a variable reference, a constant
/// (kept byte-exact, quotes included for strings), or a bare concept.
struct NodeRef {
    enum class Kind { Var, Const, Concept };
    Kind kind = Kind::Var;
    std::string value;

    static NodeRef var(std::string v) { return {Kind::Var, std::move(v)}; }
    static NodeRef constant(std::string v) { return {Kind::Const, std::move(v)}; }
    static NodeRef concept(std::string v) { return {Kind::Concept, std::move(v)}; }

    friend bool operator==(const NodeRef& a, const NodeRef& b) {
        return a.kind == b.kind && a.value == b.value;
    }
};

struct Edge {
    std::string source;  // variable
    std::string role;    // keeps its leading ":"
    NodeRef target;

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.source == b.source && a.role == b.role && a.target == b.target;
    }
};

/// Rooted, labeled, possibly re-entrant directed graph. Re-entrancy is a
/// repeated variable reference, never a duplicate node.
struct AmrGraph {
    std::map<std::string, std::string> nodes;  // variable -> concept
    std::vector<Edge> edges;
    std::string root;

    const std::string& concept_of(const std::string& var) const;

    /// Checks the graph invariants (root defined, endpoints defined, every
    /// node reachable from the root). Throws AmrError on violation.
    void validate() const;
};

/// Structural equality up to edge order normalization.
bool structurally_equal(const AmrGraph& a, const AmrGraph& b);

/// Parses a single PENMAN s-expression.
///
/// Dialect notes: an unquoted value token is a variable reference and must be
/// defined somewhere in the same graph (forward references are fine);
/// constants are quoted strings, numbers, and the bare "-" / "+" tokens.
AmrGraph parse_penman(const std::string& text);

/// Parses a whitespace-separated sequence of PENMAN graphs (each with its own
/// variable scope), as emitted by document-level parsers.
std::vector<AmrGraph> parse_penman_many(const std::string& text);

/// Canonical single-line form: depth-first from the root, children in stored
/// edge order, re-entrancies as bare variable references.
std::string serialize_penman(const AmrGraph& graph);

/// Joins several graphs under a synthetic "multi-sentence" root with
/// :snt1..:sntN edges, renaming colliding variables.
AmrGraph merge_graphs(const std::vector<AmrGraph>& graphs);

/// Concept-level semantic unit: the root concept, a concept-role-concept
/// edge, or a concept-role-constant edge. No variables, so matching needs no
/// alignment.
struct Triple {
    enum class Kind { Top, Rel, Attr };
    Kind kind = Kind::Top;
    std::string parent;  // concept (the root concept for Top)
    std::string role;    // empty for Top
    std::string child;   // concept (Rel) or constant literal (Attr); empty for Top

    static Triple top(std::string concept) { return {Kind::Top, std::move(concept), "", ""}; }
    static Triple rel(std::string parent, std::string role, std::string child) {
        return {Kind::Rel, std::move(parent), std::move(role), std::move(child)};
    }
    static Triple attr(std::string parent, std::string role, std::string constant) {
        return {Kind::Attr, std::move(parent), std::move(role), std::move(constant)};
    }

    std::string key() const;

    friend bool operator==(const Triple& a, const Triple& b) {
        return a.kind == b.kind && a.parent == b.parent && a.role == b.role && a.child == b.child;
    }
    friend bool operator<(const Triple& a, const Triple& b) { return a.key() < b.key(); }
};

struct TripleOptions {
    /// Rewrite ":ROLE-of" edges to their direct form (child as parent).
    bool normalize_inverse_roles = false;
    /// Drop trailing "-NN" sense labels from concepts (want-01 -> want).
    bool strip_sense_suffix = false;
};

/// One Top for the root plus one Rel/Attr per edge; duplicates preserved.
/// |result| == 1 + |edges| always.
std::vector<Triple> extract_triples(const AmrGraph& graph, const TripleOptions& options = {});

}  // namespace dart::amr
