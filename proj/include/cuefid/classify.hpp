#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cuefid/corpus.hpp"
#include "cuefid/labels.hpp"
#include "cuefid/lexicon.hpp"

namespace cuefid {

struct Prediction {
  CueLabel label = CueLabel::kNone;
  std::array<double, kNumLabels> probabilities{};
  std::optional<std::string> matched_entry;
};

// Classifier contract shared by the rule classifier and the trained model.
// Implementations are immutable and safe to call concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual Prediction classify(std::string_view cleaned_text) const = 0;

  // Short tag recorded in reports, e.g. "rule" or "baseline".
  virtual std::string classifier_id() const = 0;

  // Digest identifying the lexicon or model that produced the predictions.
  virtual std::string version_hash() const = 0;
};

// Label of the first match in match_utterance order; None when no entry
// matches. Probabilities are one-hot.
Prediction rule_classify(const CompiledLexicon& lexicon, std::string_view text);

class RuleClassifier final : public Classifier {
 public:
  explicit RuleClassifier(CompiledLexicon lexicon)
      : lexicon_(std::move(lexicon)) {}

  Prediction classify(std::string_view cleaned_text) const override {
    return rule_classify(lexicon_, cleaned_text);
  }
  std::string classifier_id() const override { return "rule"; }
  std::string version_hash() const override {
    return lexicon_.version_hash();
  }

  const CompiledLexicon& lexicon() const { return lexicon_; }

 private:
  CompiledLexicon lexicon_;
};

// Splits cleaned text on spaces; empty text gives no tokens.
std::vector<std::string> tokenize(std::string_view text);

inline constexpr std::int32_t kPaddingId = 0;
inline constexpr std::int32_t kUnknownId = 1;
inline constexpr std::size_t kDefaultMaxSequenceLength = 64;

class Vocabulary {
 public:
  Vocabulary() = default;

  // Tokens in id order starting at id 2.
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::size_t min_frequency = 1);

  std::int32_t id(std::string_view token) const;
  // Token for `id`; "<pad>" and "<unk>" for the reserved ids.
  const std::string& token(std::int32_t id) const;

  // Number of ids including the two reserved ones.
  std::size_t size() const { return tokens_.size() + 2; }
  std::size_t min_frequency() const { return min_frequency_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.min_frequency_ == b.min_frequency_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
  std::size_t min_frequency_ = 1;
};

// Tokens with frequency >= min_frequency, ordered by descending frequency then
// lexicographically.
Vocabulary build_vocab(const Corpus& corpus, std::size_t min_frequency);

struct EncodedSequence {
  std::vector<std::int32_t> ids;
  std::size_t true_length = 0;
};

EncodedSequence encode(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab,
                       std::size_t max_sequence_length = kDefaultMaxSequenceLength);

struct Hyperparameters {
  std::size_t epochs = 4;
  std::size_t batch_size = 64;
  double learning_rate = 0.1;
  double l2_penalty = 1e-4;
  std::size_t min_frequency = 1;
  std::size_t max_sequence_length = kDefaultMaxSequenceLength;
};

// Sparse feature vector: (feature index, count), sorted by index.
using FeatureVector = std::vector<std::pair<std::size_t, double>>;

// Bag of uni-grams and bi-grams over an encoded window. Uni-gram features
// are indexed by token id; bi-grams seen at training time follow at
// vocab.size() + k. Unseen bi-grams are dropped.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  FeatureSpace(Vocabulary vocab, std::vector<std::pair<std::int32_t, std::int32_t>> bigrams);

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<std::pair<std::int32_t, std::int32_t>>& bigrams() const {
    return bigrams_;
  }
  std::size_t dimension() const { return vocab_.size() + bigrams_.size(); }

  FeatureVector features(const EncodedSequence& seq) const;

 private:
  Vocabulary vocab_;
  std::vector<std::pair<std::int32_t, std::int32_t>> bigrams_;
  std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> bigram_index_;
};

// Linear softmax over bag-of-n-gram counts.
struct BaselineModel {
  FeatureSpace space;
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;
  // Row-major [kNumLabels x dimension].
  std::vector<double> weights;
  std::array<double, kNumLabels> bias{};
  std::vector<double> loss_history;

  double weight(std::size_t label, std::size_t feature) const {
    return weights[label * space.dimension() + feature];
  }

  FeatureVector featurize(std::string_view cleaned_text) const;
  std::array<double, kNumLabels> scores(const FeatureVector& x) const;
};

// Model with N(0, scale^2) weights and bias, for gradient checking.
BaselineModel random_model(FeatureSpace space, std::uint64_t seed,
                           double scale = 0.1);

// Mini-batch gradient descent on mean cross-entropy plus
// (l2_penalty / 2) * ||weights||^2. Every label must occur in `train`.
BaselineModel train_baseline(const Corpus& train,
                             const Hyperparameters& hyperparameters,
                             std::uint64_t seed);

// Softmax prediction; ties resolve to the earlier label in canonical order.
// Throws InvalidInputError when the text is empty after cleaning.
Prediction predict(const BaselineModel& model, std::string_view text);

// Maximum relative error between the analytic gradient of the regularized
// cross-entropy for one example and central finite differences, over every
// weight the example touches and the bias.
double gradient_check(const BaselineModel& model, const GoldExample& example,
                      double epsilon = 1e-5);

// Per-example objective and its gradient; exposed for testing.
struct ExampleGradient {
  double loss = 0.0;
  // (label, feature, d loss / d weight) for touched weights.
  std::vector<std::tuple<std::size_t, std::size_t, double>> weight_grad;
  std::array<double, kNumLabels> bias_grad{};
};
ExampleGradient example_gradient(const BaselineModel& model,
                                 const FeatureVector& x, CueLabel gold);
double example_objective(const BaselineModel& model, const FeatureVector& x,
                         CueLabel gold);

// Versioned JSON container; doubles round-trip exactly.
std::string save_model(const BaselineModel& model);
BaselineModel load_model(std::string_view content);

class BaselineClassifier final : public Classifier {
 public:
  explicit BaselineClassifier(BaselineModel model);

  Prediction classify(std::string_view cleaned_text) const override {
    return predict(model_, cleaned_text);
  }
  std::string classifier_id() const override { return "baseline"; }
  std::string version_hash() const override { return hash_; }

  const BaselineModel& model() const { return model_; }

 private:
  BaselineModel model_;
  std::string hash_;
};

}  // namespace cuefid
