#include "dart/amr.hpp"

#include <set>
#include <unordered_set>

namespace dart::amr {

namespace {

struct Token {
    enum class Kind { LParen, RParen, Slash, Role, String, Plain };
    Kind kind;
    std::string text;  // raw bytes (strings keep their quotes)
    size_t offset;
};

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_delim(char c) {
    return is_space(c) || c == '(' || c == ')' || c == '/' || c == '"';
}

bool is_number(const std::string& t) {
    size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) i++;
    size_t digits = 0;
    while (i < t.size() && t[i] >= '0' && t[i] <= '9') i++, digits++;
    if (i < t.size() && t[i] == '.') {
        i++;
        while (i < t.size() && t[i] >= '0' && t[i] <= '9') i++, digits++;
    }
    if (digits == 0) return false;
    if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
        i++;
        if (i < t.size() && (t[i] == '+' || t[i] == '-')) i++;
        size_t exp_digits = 0;
        while (i < t.size() && t[i] >= '0' && t[i] <= '9') i++, exp_digits++;
        if (exp_digits == 0) return false;
    }
    return i == t.size();
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (is_space(c)) {
            i++;
            continue;
        }
        if (c == '(') {
            tokens.push_back({Token::Kind::LParen, "(", i++});
        } else if (c == ')') {
            tokens.push_back({Token::Kind::RParen, ")", i++});
        } else if (c == '/') {
            tokens.push_back({Token::Kind::Slash, "/", i++});
        } else if (c == '"') {
            size_t start = i++;
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\\' && i + 1 < text.size()) i++;
                i++;
            }
            if (i >= text.size()) {
                throw PenmanError(PenmanError::Kind::UnterminatedString, start,
                                  "unterminated string at offset " + std::to_string(start));
            }
            i++;  // closing quote
            tokens.push_back({Token::Kind::String, text.substr(start, i - start), start});
        } else {
            size_t start = i;
            while (i < text.size() && !is_delim(text[i])) i++;
            std::string t = text.substr(start, i - start);
            tokens.push_back({t[0] == ':' ? Token::Kind::Role : Token::Kind::Plain, t, start});
        }
    }
    return tokens;
}

class GroupParser {
  public:
    GroupParser(const std::vector<Token>& tokens, size_t begin, size_t end, size_t text_size)
        : tokens_(tokens), pos_(begin), end_(end), text_size_(text_size) {
        // Pass 1: collect every variable defined in this graph so that bare
        // tokens (including forward references) can be classified.
        for (size_t i = begin; i + 2 < end; i++) {
            if (tokens_[i].kind == Token::Kind::LParen &&
                tokens_[i + 1].kind == Token::Kind::Plain &&
                tokens_[i + 2].kind == Token::Kind::Slash) {
                declared_vars_.insert(tokens_[i + 1].text);
            }
        }
    }

    AmrGraph parse() {
        graph_.root = parse_node();
        return std::move(graph_);
    }

  private:
    [[noreturn]] void eof_error() const {
        throw PenmanError(PenmanError::Kind::UnbalancedParenthesis, text_size_,
                          "unbalanced parenthesis at offset " + std::to_string(text_size_));
    }

    const Token& peek() const {
        if (pos_ >= end_) eof_error();
        return tokens_[pos_];
    }

    const Token& next() {
        if (pos_ >= end_) eof_error();
        return tokens_[pos_++];
    }

    std::string parse_node() {
        const Token& open = next();
        if (open.kind != Token::Kind::LParen) {
            throw PenmanError(PenmanError::Kind::Unexpected, open.offset,
                              "expected '(' at offset " + std::to_string(open.offset));
        }
        const Token& var_tok = next();
        if (var_tok.kind != Token::Kind::Plain || is_number(var_tok.text)) {
            throw PenmanError(PenmanError::Kind::Unexpected, var_tok.offset,
                              "expected variable at offset " + std::to_string(var_tok.offset));
        }
        if (graph_.nodes.count(var_tok.text)) {
            throw PenmanError(PenmanError::Kind::DuplicateVariable, var_tok.offset,
                              "duplicate variable definition '" + var_tok.text + "' at offset " +
                                  std::to_string(var_tok.offset));
        }
        const Token& slash = next();
        if (slash.kind != Token::Kind::Slash) {
            throw PenmanError(PenmanError::Kind::MissingSlash, slash.offset,
                              "missing '/' at offset " + std::to_string(slash.offset));
        }
        const Token& concept_tok = next();
        if (concept_tok.kind != Token::Kind::Plain) {
            throw PenmanError(PenmanError::Kind::Unexpected, concept_tok.offset,
                              "expected concept at offset " + std::to_string(concept_tok.offset));
        }
        graph_.nodes[var_tok.text] = concept_tok.text;

        while (true) {
            const Token& t = peek();
            if (t.kind == Token::Kind::RParen) {
                pos_++;
                return var_tok.text;
            }
            if (t.kind != Token::Kind::Role || t.text.size() < 2) {
                throw PenmanError(PenmanError::Kind::Unexpected, t.offset,
                                  "expected role or ')' at offset " + std::to_string(t.offset));
            }
            std::string role = t.text;
            pos_++;
            graph_.edges.push_back({var_tok.text, role, parse_value()});
        }
    }

    NodeRef parse_value() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::LParen:
                return NodeRef::var(parse_node());
            case Token::Kind::String:
                pos_++;
                return NodeRef::constant(t.text);
            case Token::Kind::Plain: {
                pos_++;
                if (declared_vars_.count(t.text)) return NodeRef::var(t.text);
                if (is_number(t.text) || t.text == "-" || t.text == "+") {
                    return NodeRef::constant(t.text);
                }
                throw PenmanError(PenmanError::Kind::UndefinedVariable, t.offset,
                                  "reference to undefined variable '" + t.text + "' at offset " +
                                      std::to_string(t.offset));
            }
            default:
                throw PenmanError(PenmanError::Kind::Unexpected, t.offset,
                                  "expected value at offset " + std::to_string(t.offset));
        }
    }

    const std::vector<Token>& tokens_;
    size_t pos_;
    size_t end_;
    size_t text_size_;
    std::unordered_set<std::string> declared_vars_;
    AmrGraph graph_;
};

/// Splits the token stream into balanced top-level groups, reporting
/// unbalanced parentheses and stray top-level tokens.
std::vector<std::pair<size_t, size_t>> split_groups(const std::vector<Token>& tokens,
                                                    size_t text_size) {
    std::vector<std::pair<size_t, size_t>> groups;
    size_t i = 0;
    while (i < tokens.size()) {
        if (tokens[i].kind != Token::Kind::LParen) {
            if (tokens[i].kind == Token::Kind::RParen) {
                throw PenmanError(PenmanError::Kind::UnbalancedParenthesis, tokens[i].offset,
                                  "unbalanced parenthesis at offset " +
                                      std::to_string(tokens[i].offset));
            }
            throw PenmanError(PenmanError::Kind::Unexpected, tokens[i].offset,
                              "expected '(' at offset " + std::to_string(tokens[i].offset));
        }
        size_t begin = i;
        int depth = 0;
        while (i < tokens.size()) {
            if (tokens[i].kind == Token::Kind::LParen) depth++;
            if (tokens[i].kind == Token::Kind::RParen) depth--;
            i++;
            if (depth == 0) break;
        }
        if (depth != 0) {
            throw PenmanError(PenmanError::Kind::UnbalancedParenthesis, text_size,
                              "unbalanced parenthesis at offset " + std::to_string(text_size));
        }
        groups.emplace_back(begin, i);
    }
    return groups;
}

}  // namespace

const std::string& AmrGraph::concept_of(const std::string& var) const {
    auto it = nodes.find(var);
    if (it == nodes.end()) throw AmrError("unknown variable '" + var + "'");
    return it->second;
}

void AmrGraph::validate() const {
    if (nodes.empty()) throw AmrError("graph has no nodes");
    if (!nodes.count(root)) throw AmrError("root variable '" + root + "' is not defined");
    for (const Edge& e : edges) {
        if (!nodes.count(e.source)) {
            throw AmrError("edge source '" + e.source + "' is not defined");
        }
        if (e.target.kind == NodeRef::Kind::Var && !nodes.count(e.target.value)) {
            throw AmrError("edge target '" + e.target.value + "' is not defined");
        }
        if (e.role.empty() || e.role[0] != ':') {
            throw AmrError("role '" + e.role + "' must start with ':'");
        }
    }
    // Reachability: PENMAN cannot express disconnected nodes.
    std::set<std::string> seen{root};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Edge& e : edges) {
            if (e.target.kind == NodeRef::Kind::Var && seen.count(e.source) &&
                !seen.count(e.target.value)) {
                seen.insert(e.target.value);
                grew = true;
            }
        }
    }
    if (seen.size() != nodes.size()) {
        throw AmrError("graph has nodes unreachable from the root");
    }
}

bool structurally_equal(const AmrGraph& a, const AmrGraph& b) {
    if (a.root != b.root || a.nodes != b.nodes) return false;
    auto edge_key = [](const Edge& e) {
        return e.source + "\x01" + e.role + "\x01" + std::to_string(static_cast<int>(e.target.kind)) +
               "\x01" + e.target.value;
    };
    std::multiset<std::string> ea, eb;
    for (const Edge& e : a.edges) ea.insert(edge_key(e));
    for (const Edge& e : b.edges) eb.insert(edge_key(e));
    return ea == eb;
}

AmrGraph parse_penman(const std::string& text) {
    std::vector<Token> tokens = tokenize(text);
    if (tokens.empty()) {
        throw PenmanError(PenmanError::Kind::EmptyInput, 0, "empty input at offset 0");
    }
    auto groups = split_groups(tokens, text.size());
    if (groups.size() > 1) {
        size_t off = tokens[groups[1].first].offset;
        throw PenmanError(PenmanError::Kind::TrailingContent, off,
                          "trailing content at offset " + std::to_string(off));
    }
    AmrGraph g = GroupParser(tokens, groups[0].first, groups[0].second, text.size()).parse();
    g.validate();
    return g;
}

std::vector<AmrGraph> parse_penman_many(const std::string& text) {
    std::vector<Token> tokens = tokenize(text);
    if (tokens.empty()) {
        throw PenmanError(PenmanError::Kind::EmptyInput, 0, "empty input at offset 0");
    }
    std::vector<AmrGraph> graphs;
    for (auto [begin, end] : split_groups(tokens, text.size())) {
        AmrGraph g = GroupParser(tokens, begin, end, text.size()).parse();
        g.validate();
        graphs.push_back(std::move(g));
    }
    return graphs;
}

std::string serialize_penman(const AmrGraph& graph) {
    graph.validate();
    std::set<std::string> emitted;
    std::string out;

    // Emits the node definition at the first visit; later references print as
    // bare variables (re-entrancy).
    auto emit = [&](auto&& self, const std::string& var) -> void {
        emitted.insert(var);
        out += "(" + var + " / " + graph.concept_of(var);
        for (const Edge& e : graph.edges) {
            if (e.source != var) continue;
            out += " " + e.role + " ";
            switch (e.target.kind) {
                case NodeRef::Kind::Var:
                    if (emitted.count(e.target.value)) {
                        out += e.target.value;
                    } else {
                        self(self, e.target.value);
                    }
                    break;
                case NodeRef::Kind::Const:
                case NodeRef::Kind::Concept:
                    out += e.target.value;
                    break;
            }
        }
        out += ")";
    };
    emit(emit, graph.root);
    return out;
}

AmrGraph merge_graphs(const std::vector<AmrGraph>& graphs) {
    if (graphs.empty()) throw AmrError("cannot merge an empty graph list");
    if (graphs.size() == 1) return graphs[0];

    AmrGraph out;
    std::set<std::string> used;
    std::vector<std::string> roots;
    for (const AmrGraph& g : graphs) {
        std::map<std::string, std::string> rename;
        for (const auto& [var, concept] : g.nodes) {
            std::string name = var;
            size_t k = 2;
            while (used.count(name)) name = var + "_" + std::to_string(k++);
            used.insert(name);
            rename[var] = name;
            out.nodes[name] = concept;
        }
        for (const Edge& e : g.edges) {
            NodeRef target = e.target;
            if (target.kind == NodeRef::Kind::Var) target.value = rename.at(target.value);
            out.edges.push_back({rename.at(e.source), e.role, target});
        }
        roots.push_back(rename.at(g.root));
    }

    std::string root = "m";
    size_t k = 2;
    while (used.count(root)) root = "m_" + std::to_string(k++);
    out.nodes[root] = "multi-sentence";
    out.root = root;
    // Sentence edges go in front so the canonical form reads root-first.
    std::vector<Edge> snt_edges;
    for (size_t i = 0; i < roots.size(); i++) {
        snt_edges.push_back({root, ":snt" + std::to_string(i + 1), NodeRef::var(roots[i])});
    }
    out.edges.insert(out.edges.begin(), snt_edges.begin(), snt_edges.end());
    out.validate();
    return out;
}

std::string Triple::key() const {
    switch (kind) {
        case Kind::Top:
            return "T\x01" + parent;
        case Kind::Rel:
            return "R\x01" + parent + "\x01" + role + "\x01" + child;
        case Kind::Attr:
        default:
            return "A\x01" + parent + "\x01" + role + "\x01" + child;
    }
}

namespace {
std::string maybe_strip_sense(const std::string& concept, bool strip) {
    if (!strip) return concept;
    size_t dash = concept.find_last_of('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == concept.size()) return concept;
    for (size_t i = dash + 1; i < concept.size(); i++) {
        if (concept[i] < '0' || concept[i] > '9') return concept;
    }
    return concept.substr(0, dash);
}
}  // namespace

std::vector<Triple> extract_triples(const AmrGraph& graph, const TripleOptions& options) {
    const bool strip = options.strip_sense_suffix;
    std::vector<Triple> out;
    out.reserve(1 + graph.edges.size());
    out.push_back(Triple::top(maybe_strip_sense(graph.concept_of(graph.root), strip)));
    for (const Edge& e : graph.edges) {
        std::string parent = maybe_strip_sense(graph.concept_of(e.source), strip);
        switch (e.target.kind) {
            case NodeRef::Kind::Var: {
                std::string child = maybe_strip_sense(graph.concept_of(e.target.value), strip);
                if (options.normalize_inverse_roles && e.role.size() > 3 &&
                    e.role.compare(e.role.size() - 3, 3, "-of") == 0) {
                    out.push_back(Triple::rel(child, e.role.substr(0, e.role.size() - 3), parent));
                } else {
                    out.push_back(Triple::rel(parent, e.role, child));
                }
                break;
            }
            case NodeRef::Kind::Const:
                out.push_back(Triple::attr(parent, e.role, e.target.value));
                break;
            case NodeRef::Kind::Concept:
                out.push_back(
                    Triple::rel(parent, e.role, maybe_strip_sense(e.target.value, strip)));
                break;
        }
    }
    return out;
}

}  // namespace dart::amr
