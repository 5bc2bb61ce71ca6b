#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dart/corpus.hpp"
#include "dart/sema.hpp"

namespace dart::classify {

struct LabeledExample;

struct GammaSpec {
    enum class Kind { Scale, Fixed };
    Kind kind = Kind::Scale;
    double value = 1.0;  // used when kind == Fixed

    static GammaSpec scale() { return {Kind::Scale, 0.0}; }
    static GammaSpec fixed(double v) { return {Kind::Fixed, v}; }
};

struct SvmConfig {
    double c = 1.0;
    GammaSpec gamma;
    double kkt_tolerance = 1e-3;
    /// Z-score features before training/prediction. Off by default; gap
    /// features already live in [0,1].
    bool standardize = false;
};

double rbf_kernel(const std::array<double, 4>& a, const std::array<double, 4>& b, double gamma);

/// One-vs-one binary machine for classes (pos, neg); pos is the
/// lower-ordered class and wins decision values >= 0.
struct BinaryMachine {
    int class_pos = 0;
    int class_neg = 0;
    std::vector<std::array<double, 4>> support_vectors;
    std::vector<double> dual_coefs;  // alpha_i * y_i, each in [-C, C]
    double bias = 0.0;
    double kkt_residual = 0.0;  // max KKT violation over training data at convergence
};

struct SvmModel {
    std::vector<corpus::Origin> classes;
    double c = 1.0;
    double gamma = 1.0;  // resolved numeric value
    bool standardized = false;
    std::array<double, 4> feature_mean{0, 0, 0, 0};
    std::array<double, 4> feature_scale{1, 1, 1, 1};
    std::vector<BinaryMachine> machines;  // pairs (i,j), i<j, in class order

    std::string to_text() const;
    static SvmModel from_text(const std::string& text);
};

/// RBF-kernel SVM trained per class pair with SMO to the configured KKT
/// tolerance. gamma = scale resolves to 1 / (4 * variance of all feature
/// values). Deterministic: scan order is fixed, so the seed is unused.
SvmModel train_svm(const std::vector<LabeledExample>& examples, const SvmConfig& config = {},
                   std::uint64_t seed = 0);

double decision_value(const SvmModel& model, const BinaryMachine& machine,
                      const sema::GapFeatures& features);

/// One-vs-one majority vote; ties go to the lowest-ordered class.
corpus::Origin predict_svm(const SvmModel& model, const sema::GapFeatures& features);

}  // namespace dart::classify
