#include "dart/sema.hpp"

#include <fstream>
#include <unordered_map>

#include "dart/util.hpp"

namespace dart::sema {

void GapFeatures::validate() const {
    for (double v : as_array()) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw SemaError("gap feature " + std::to_string(v) + " outside [0,1]");
        }
    }
}

size_t match_count(const std::vector<amr::Triple>& candidate,
                   const std::vector<amr::Triple>& reference) {
    std::unordered_map<std::string, size_t> pool;
    for (const amr::Triple& t : reference) pool[t.key()]++;
    size_t matches = 0;
    for (const amr::Triple& t : candidate) {
        auto it = pool.find(t.key());
        if (it != pool.end() && it->second > 0) {
            it->second--;
            matches++;
        }
    }
    return matches;
}

Score score(const amr::AmrGraph& candidate, const amr::AmrGraph& reference,
            const SemaConfig& config) {
    std::vector<amr::Triple> ct = amr::extract_triples(candidate, config.triples);
    std::vector<amr::Triple> rt = amr::extract_triples(reference, config.triples);
    double m = static_cast<double>(match_count(ct, rt));
    return {m / static_cast<double>(ct.size()), m / static_cast<double>(rt.size())};
}

GapFeatures gap_features(const amr::AmrGraph& a0, const amr::AmrGraph& a1,
                         const amr::AmrGraph& a2, const SemaConfig& config) {
    Score s1 = score(a1, a0, config);
    Score s2 = score(a2, a0, config);
    GapFeatures f{s1.precision, s2.precision, s1.recall, s2.recall};
    f.validate();
    return f;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); i++) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    i++;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string feature_row_csv(const FeatureRow& row) {
    return csv_escape(row.id) + "," + csv_escape(row.origin.str()) + "," +
           csv_escape(row.domain.str()) + "," + util::fmt_fixed6(row.features.p1) + "," +
           util::fmt_fixed6(row.features.p2) + "," + util::fmt_fixed6(row.features.r1) + "," +
           util::fmt_fixed6(row.features.r2);
}

std::vector<FeatureRow> read_features_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SemaError("cannot open features CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw SemaError("features CSV is empty: " + path);

    std::vector<std::string> header = split_csv_line(line);
    const std::vector<std::string> expected = {"id", "origin", "domain", "p1", "p2", "r1", "r2"};
    for (const std::string& col : expected) {
        bool found = false;
        for (const std::string& h : header) {
            if (util::trim(h) == col) found = true;
        }
        if (!found) throw SemaError("features CSV missing column \"" + col + "\"");
    }
    std::vector<size_t> col_index(expected.size());
    for (size_t c = 0; c < expected.size(); c++) {
        for (size_t h = 0; h < header.size(); h++) {
            if (util::trim(header[h]) == expected[c]) col_index[c] = h;
        }
    }

    std::vector<FeatureRow> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (util::trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < header.size()) {
            throw SemaError("features CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        FeatureRow row;
        row.id = fields[col_index[0]];
        try {
            row.origin = corpus::Origin::parse(fields[col_index[1]]);
            row.domain = corpus::Domain::parse(fields[col_index[2]]);
            row.features.p1 = std::stod(fields[col_index[3]]);
            row.features.p2 = std::stod(fields[col_index[4]]);
            row.features.r1 = std::stod(fields[col_index[5]]);
            row.features.r2 = std::stod(fields[col_index[6]]);
            row.features.validate();
        } catch (const std::exception& e) {
            throw SemaError("features CSV line " + std::to_string(line_no) + ": " + e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_features_csv(const std::vector<FeatureRow>& rows, const std::string& path) {
    std::string out = features_csv_header();
    out += '\n';
    for (const FeatureRow& row : rows) {
        out += feature_row_csv(row);
        out += '\n';
    }
    util::write_file(path, out);
}

}  // namespace dart::sema
