#pragma once

#include <array>
#include <string>
#include <vector>

#include "dart/amr.hpp"
#include "dart/corpus.hpp"

namespace dart::sema {

class SemaError : public std::runtime_error {
  public:
    explicit SemaError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The DART feature vector v = [p1, p2, r1, r2]: precision/recall of each
/// rephrased graph against the original. All values lie in [0,1].
struct GapFeatures {
    double p1 = 0, p2 = 0, r1 = 0, r2 = 0;

    std::array<double, 4> as_array() const { return {p1, p2, r1, r2}; }
    static GapFeatures from_array(const std::array<double, 4>& a) {
        return {a[0], a[1], a[2], a[3]};
    }
    void validate() const;
};

struct SemaConfig {
    amr::TripleOptions triples;
};

/// Size of the exact multiset intersection: each reference triple is consumed
/// by at most one identical candidate triple.
size_t match_count(const std::vector<amr::Triple>& candidate,
                   const std::vector<amr::Triple>& reference);

struct Score {
    double precision = 0;
    double recall = 0;
};

/// precision = matches / |candidate triples|, recall = matches / |reference
/// triples|. Triple sets are never empty (Top always exists).
Score score(const amr::AmrGraph& candidate, const amr::AmrGraph& reference,
            const SemaConfig& config = {});

/// (p1, r1) scores A1 against A0; (p2, r2) scores A2 against A0.
GapFeatures gap_features(const amr::AmrGraph& a0, const amr::AmrGraph& a1,
                         const amr::AmrGraph& a2, const SemaConfig& config = {});

struct FeatureRow {
    std::string id;
    corpus::Origin origin = corpus::Origin::human();
    corpus::Domain domain = corpus::Domain::xsum();
    GapFeatures features;
};

inline const char* features_csv_header() { return "id,origin,domain,p1,p2,r1,r2"; }

std::string feature_row_csv(const FeatureRow& row);
std::vector<FeatureRow> read_features_csv(const std::string& path);
void write_features_csv(const std::vector<FeatureRow>& rows, const std::string& path);

}  // namespace dart::sema
