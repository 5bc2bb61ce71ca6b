#include "dart/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dart/classify.hpp"
#include "dart/util.hpp"

namespace dart::classify {

std::vector<corpus::Origin> class_list(const std::vector<LabeledExample>& examples) {
    std::vector<corpus::Origin> classes;
    for (const LabeledExample& e : examples) {
        if (std::find(classes.begin(), classes.end(), e.label) == classes.end()) {
            classes.push_back(e.label);
        }
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

double gini(const std::vector<long long>& class_counts) {
    long long total = 0;
    for (long long c : class_counts) {
        if (c < 0) throw ClassifyError("negative class count");
        total += c;
    }
    if (total == 0) throw ClassifyError("gini of all-zero class counts");
    double sum_sq = 0.0;
    for (long long c : class_counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

struct Builder {
    const std::vector<std::array<double, 4>>& x;
    const std::vector<int>& y;
    int n_classes;
    int max_depth;
    std::vector<TreeNode> nodes;

    int majority(const std::vector<long long>& counts) const {
        int best = 0;
        for (int c = 1; c < n_classes; c++) {
            if (counts[c] > counts[best]) best = c;
        }
        return best;
    }

    int build(const std::vector<size_t>& idx, int depth) {
        std::vector<long long> counts(n_classes, 0);
        for (size_t i : idx) counts[y[i]]++;

        int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_id].class_counts = counts;

        int present = 0;
        for (long long c : counts) present += c > 0;
        if (depth >= max_depth || present <= 1 || idx.size() < 2) {
            nodes[node_id].label = majority(counts);
            return node_id;
        }

        double parent_impurity = gini(counts);
        double n = static_cast<double>(idx.size());

        // Impurity is weighted by fractions, not raw counts, so training is
        // invariant under duplicating the whole set.
        bool found = false;
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = 0.0;

        std::vector<std::pair<double, int>> column(idx.size());
        for (int f = 0; f < 4; f++) {
            for (size_t k = 0; k < idx.size(); k++) {
                column[k] = {x[idx[k]][f], y[idx[k]]};
            }
            std::sort(column.begin(), column.end());

            std::vector<long long> left(n_classes, 0);
            std::vector<long long> right = counts;
            for (size_t k = 0; k + 1 < column.size(); k++) {
                left[column[k].second]++;
                right[column[k].second]--;
                if (column[k].first == column[k + 1].first) continue;
                double threshold = (column[k].first + column[k + 1].first) / 2.0;
                double nl = static_cast<double>(k + 1);
                double nr = n - nl;
                double weighted = (nl / n) * gini(left) + (nr / n) * gini(right);
                if (!found || weighted < best_impurity) {
                    found = true;
                    best_feature = f;
                    best_threshold = threshold;
                    best_impurity = weighted;
                }
            }
        }

        if (!found || best_impurity >= parent_impurity - 1e-12) {
            nodes[node_id].label = majority(counts);
            return node_id;
        }

        std::vector<size_t> left_idx, right_idx;
        for (size_t i : idx) {
            (x[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
        }
        nodes[node_id].is_leaf = false;
        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        nodes[node_id].label = -1;
        int left_id = build(left_idx, depth + 1);
        int right_id = build(right_idx, depth + 1);
        nodes[node_id].left = left_id;
        nodes[node_id].right = right_id;
        return node_id;
    }
};

}  // namespace

TreeModel train_tree(const std::vector<LabeledExample>& examples, int max_depth,
                     std::uint64_t seed) {
    (void)seed;
    if (examples.empty()) throw ClassifyError("cannot train a tree on an empty example set");
    if (max_depth < 0) throw ClassifyError("max_depth must be >= 0");

    TreeModel model;
    model.classes = class_list(examples);
    model.max_depth = max_depth;

    std::vector<std::array<double, 4>> x(examples.size());
    std::vector<int> y(examples.size());
    for (size_t i = 0; i < examples.size(); i++) {
        x[i] = examples[i].features.as_array();
        auto it = std::lower_bound(model.classes.begin(), model.classes.end(), examples[i].label);
        y[i] = static_cast<int>(it - model.classes.begin());
    }

    Builder builder{x, y, static_cast<int>(model.classes.size()), max_depth, {}};
    std::vector<size_t> all(examples.size());
    for (size_t i = 0; i < all.size(); i++) all[i] = i;
    builder.build(all, 0);
    model.nodes = std::move(builder.nodes);
    return model;
}

corpus::Origin predict_tree(const TreeModel& model, const sema::GapFeatures& features) {
    if (model.nodes.empty()) throw ClassifyError("empty tree model");
    std::array<double, 4> v = features.as_array();
    int node = 0;
    while (!model.nodes[node].is_leaf) {
        const TreeNode& s = model.nodes[node];
        node = v[s.feature] <= s.threshold ? s.left : s.right;
    }
    return model.classes[model.nodes[node].label];
}

namespace {
int depth_below(const TreeModel& model, int node) {
    const TreeNode& n = model.nodes[node];
    if (n.is_leaf) return 0;
    return 1 + std::max(depth_below(model, n.left), depth_below(model, n.right));
}

std::string counts_str(const std::vector<long long>& counts) {
    std::string out;
    for (size_t i = 0; i < counts.size(); i++) {
        if (i) out += ",";
        out += std::to_string(counts[i]);
    }
    return out;
}
}  // namespace

int tree_depth(const TreeModel& model) {
    if (model.nodes.empty()) return 0;
    return depth_below(model, 0);
}

std::string TreeModel::to_text() const {
    std::string out = "dart-model v1\nkind: tree\n";
    out += "max_depth: " + std::to_string(max_depth) + "\n";
    out += "classes: " + std::to_string(classes.size()) + "\n";
    for (const corpus::Origin& c : classes) out += "class: " + c.str() + "\n";
    out += "nodes: " + std::to_string(nodes.size()) + "\n";
    for (size_t i = 0; i < nodes.size(); i++) {
        const TreeNode& n = nodes[i];
        if (n.is_leaf) {
            out += "node: " + std::to_string(i) + " leaf label=" + std::to_string(n.label) +
                   " counts=" + counts_str(n.class_counts) + "\n";
        } else {
            out += "node: " + std::to_string(i) + " split feature=" + std::to_string(n.feature) +
                   " threshold=" + util::fmt_g17(n.threshold) + " left=" + std::to_string(n.left) +
                   " right=" + std::to_string(n.right) + " counts=" + counts_str(n.class_counts) +
                   "\n";
        }
    }
    return out;
}

namespace {

std::vector<long long> parse_counts(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

std::string expect_prefix(const std::string& line, const std::string& prefix) {
    if (line.rfind(prefix, 0) != 0) {
        throw ClassifyError("model parse error: expected \"" + prefix + "\" got \"" + line + "\"");
    }
    return line.substr(prefix.size());
}

std::string field(const std::string& line, const std::string& name) {
    std::string needle = name + "=";
    size_t pos = line.find(needle);
    if (pos == std::string::npos) {
        throw ClassifyError("model parse error: missing field " + name + " in \"" + line + "\"");
    }
    size_t start = pos + needle.size();
    size_t end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

TreeModel TreeModel::from_text(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    auto next_line = [&]() -> std::string {
        if (!std::getline(ss, line)) throw ClassifyError("model parse error: truncated file");
        return line;
    };

    expect_prefix(next_line(), "dart-model v1");
    expect_prefix(next_line(), "kind: tree");
    TreeModel model;
    model.max_depth = std::stoi(expect_prefix(next_line(), "max_depth: "));
    size_t n_classes = std::stoul(expect_prefix(next_line(), "classes: "));
    for (size_t i = 0; i < n_classes; i++) {
        model.classes.push_back(corpus::Origin::parse(expect_prefix(next_line(), "class: ")));
    }
    size_t n_nodes = std::stoul(expect_prefix(next_line(), "nodes: "));
    for (size_t i = 0; i < n_nodes; i++) {
        std::string body = expect_prefix(next_line(), "node: ");
        TreeNode node;
        if (body.find(" leaf ") != std::string::npos) {
            node.is_leaf = true;
            node.label = std::stoi(field(body, "label"));
        } else {
            node.is_leaf = false;
            node.feature = std::stoi(field(body, "feature"));
            node.threshold = std::stod(field(body, "threshold"));
            node.left = std::stoi(field(body, "left"));
            node.right = std::stoi(field(body, "right"));
        }
        node.class_counts = parse_counts(field(body, "counts"));
        model.nodes.push_back(std::move(node));
    }
    if (model.nodes.empty()) throw ClassifyError("model parse error: no nodes");
    return model;
}

}  // namespace dart::classify
