#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dart/corpus.hpp"
#include "dart/sema.hpp"

namespace dart::classify {

class ClassifyError : public std::runtime_error {
  public:
    explicit ClassifyError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LabeledExample {
    sema::GapFeatures features;
    corpus::Origin label = corpus::Origin::human();
    std::string record_id;
};

/// Distinct labels in serialization order; every tie-break in training and
/// prediction resolves toward the front of this list.
std::vector<corpus::Origin> class_list(const std::vector<LabeledExample>& examples);

struct TreeModel;
struct SvmModel;

}  // namespace dart::classify

#include "dart/svm.hpp"
#include "dart/tree.hpp"

namespace dart::classify {

using AnyModel = std::variant<TreeModel, SvmModel>;

corpus::Origin predict(const AnyModel& model, const sema::GapFeatures& features);

/// Reads a serialized model file, dispatching on its "kind:" line.
AnyModel load_model(const std::string& path);
void save_model(const AnyModel& model, const std::string& path);

}  // namespace dart::classify
