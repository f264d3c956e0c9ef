#include <cmath>

#include "pstat/classifiers.hpp"
#include "pstat/errors.hpp"

namespace pstat::ml {

void require_trainable(const LabeledDataset& dataset) {
  dataset.require_both_labels();
  for (const auto& r : dataset.rows) {
    for (double v : r.scores) {
      if (!std::isfinite(v)) throw DomainError("training features must be finite");
    }
  }
}

const std::vector<std::string>& classifier_names() {
  static const std::vector<std::string> names{"dtree", "rforest", "gnb", "svm", "knn", "gbt"};
  return names;
}

ClassifierSpec ClassifierSpec::defaults(std::string_view name) {
  if (name == "knn") return {"knn", KnnParams{}};
  if (name == "gnb") return {"gnb", GnbParams{}};
  if (name == "dtree") return {"dtree", TreeParams{}};
  if (name == "rforest") return {"rforest", ForestParams{}};
  if (name == "svm") return {"svm", SvmParams{}};
  if (name == "gbt" || name == "xgb") return {"gbt", GbtParams{}};
  throw ConfigError("unknown classifier '" + std::string(name) +
                    "'; expected one of dtree, rforest, gnb, svm, knn, gbt");
}

ClassifierSpec ClassifierSpec::with_seed(std::uint64_t seed) const {
  ClassifierSpec copy = *this;
  if (auto* p = std::get_if<ForestParams>(&copy.params)) p->seed = seed;
  if (auto* p = std::get_if<SvmParams>(&copy.params)) p->seed = seed;
  return copy;
}

nlohmann::json ClassifierSpec::params_json() const {
  return std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KnnParams>) {
          return {{"k", p.k}};
        } else if constexpr (std::is_same_v<T, GnbParams>) {
          return {{"variance_floor", p.variance_floor}};
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          return {{"max_depth", p.max_depth}, {"min_samples_leaf", p.min_samples_leaf}};
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          return {{"n_trees", p.n_trees},
                  {"bootstrap", p.bootstrap},
                  {"max_features", p.max_features},
                  {"max_depth", p.tree.max_depth},
                  {"min_samples_leaf", p.tree.min_samples_leaf},
                  {"seed", p.seed}};
        } else if constexpr (std::is_same_v<T, SvmParams>) {
          return {{"lambda", p.lambda}, {"epochs", p.epochs}, {"seed", p.seed}};
        } else {
          return {{"rounds", p.rounds},
                  {"max_depth", p.max_depth},
                  {"learning_rate", p.learning_rate},
                  {"l2", p.l2},
                  {"min_samples_leaf", p.min_samples_leaf}};
        }
      },
      params);
}

namespace {

template <typename Params, auto TrainFn>
class SimpleClassifier final : public Classifier {
 public:
  SimpleClassifier(std::string name, Params params)
      : name_(std::move(name)), params_(params) {}
  std::string name() const override { return name_; }
  std::unique_ptr<TrainedModel> train(const LabeledDataset& dataset) const override {
    return TrainFn(dataset, params_);
  }

 private:
  std::string name_;
  Params params_;
};

}  // namespace

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  return std::visit(
      [&](const auto& p) -> std::unique_ptr<Classifier> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KnnParams>) {
          return std::make_unique<SimpleClassifier<T, &train_knn>>(spec.name, p);
        } else if constexpr (std::is_same_v<T, GnbParams>) {
          return std::make_unique<SimpleClassifier<T, &train_gnb>>(spec.name, p);
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          return std::make_unique<SimpleClassifier<T, &train_dtree>>(spec.name, p);
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          return std::make_unique<SimpleClassifier<T, &train_rforest>>(spec.name, p);
        } else if constexpr (std::is_same_v<T, SvmParams>) {
          return std::make_unique<SimpleClassifier<T, &train_linear_svm>>(spec.name, p);
        } else {
          return std::make_unique<SimpleClassifier<T, &train_gbt>>(spec.name, p);
        }
      },
      spec.params);
}

}  // namespace pstat::ml
