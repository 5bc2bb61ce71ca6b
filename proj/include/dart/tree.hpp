#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dart/corpus.hpp"
#include "dart/sema.hpp"

namespace dart::classify {

struct LabeledExample;

/// Gini impurity 1 - sum((c_i / N)^2). Counts must not all be zero.
double gini(const std::vector<long long>& class_counts);

struct TreeNode {
    bool is_leaf = true;
    int feature = -1;        // split: feature index 0..3
    double threshold = 0.0;  // go left when value <= threshold
    int left = -1;
    int right = -1;
    int label = -1;  // leaf: index into TreeModel::classes
    std::vector<long long> class_counts;
};

/// CART decision tree with Gini impurity and midpoint thresholds. nodes[0]
/// is the root; children link by index.
struct TreeModel {
    std::vector<corpus::Origin> classes;
    std::vector<TreeNode> nodes;
    int max_depth = 5;

    std::string to_text() const;
    static TreeModel from_text(const std::string& text);
};

/// Deterministic CART: candidate thresholds are midpoints of consecutive
/// distinct sorted feature values; ties break toward the lowest feature
/// index, then the lowest threshold. The seed is accepted for interface
/// stability; training never consults it.
TreeModel train_tree(const std::vector<LabeledExample>& examples, int max_depth = 5,
                     std::uint64_t seed = 0);

corpus::Origin predict_tree(const TreeModel& model, const sema::GapFeatures& features);

/// Longest root-to-leaf path, in edges.
int tree_depth(const TreeModel& model);

}  // namespace dart::classify
