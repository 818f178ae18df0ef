#include "cuefid/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>

#include "cuefid/error.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

constexpr std::string_view kModelFormat = "cuefid-baseline-model";
constexpr int kModelVersion = 1;

const std::string kPadToken = "<pad>";
const std::string kUnknownToken = "<unk>";

std::array<double, kNumLabels> softmax(const std::array<double, kNumLabels>& s) {
  const double peak = *std::max_element(s.begin(), s.end());
  std::array<double, kNumLabels> p{};
  double total = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    p[c] = std::exp(s[c] - peak);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

// Ties go to the earlier label.
CueLabel argmax_label(const std::array<double, kNumLabels>& values) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c) {
    if (values[c] > values[best]) best = c;
  }
  return kAllLabels[best];
}

double squared_norm(const std::vector<double>& w) {
  double total = 0.0;
  for (double v : w) total += v * v;
  return total;
}

}  // namespace

Prediction rule_classify(const CompiledLexicon& lexicon, std::string_view text) {
  Prediction p;
  const std::vector<Match> matches = match_utterance(lexicon, text);
  if (matches.empty()) {
    p.label = CueLabel::kNone;
  } else {
    p.label = matches.front().label;
    p.matched_entry = matches.front().entry_id;
  }
  p.probabilities[label_index(p.label)] = 1.0;
  return p;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (std::string_view token : split(text, ' ')) {
    if (!token.empty()) tokens.emplace_back(token);
  }
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::size_t min_frequency)
    : tokens_(std::move(tokens)), min_frequency_(min_frequency) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw InvalidInputError("empty vocabulary token");
    if (!ids_.emplace(tokens_[i], static_cast<std::int32_t>(i + 2)).second) {
      throw InvalidInputError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

std::int32_t Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnknownId : it->second;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id == kPaddingId) return kPadToken;
  if (id == kUnknownId) return kUnknownToken;
  if (id < 0 || static_cast<std::size_t>(id) >= size()) {
    throw InvalidInputError("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id) - 2];
}

Vocabulary build_vocab(const Corpus& corpus, std::size_t min_frequency) {
  if (corpus.examples.empty()) throw InvalidInputError("build_vocab: empty corpus");
  std::map<std::string, std::size_t> frequency;
  for (const GoldExample& e : corpus.examples) {
    for (std::string& token : tokenize(e.text)) ++frequency[std::move(token)];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [token, count] : frequency) {
    if (count >= std::max<std::size_t>(min_frequency, 1)) kept.emplace_back(token, count);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [token, count] : kept) tokens.push_back(std::move(token));
  return Vocabulary(std::move(tokens), min_frequency);
}

EncodedSequence encode(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab,
                       std::size_t max_sequence_length) {
  if (max_sequence_length < 1) {
    throw InvalidInputError("max_sequence_length must be at least 1");
  }
  EncodedSequence seq;
  seq.ids.assign(max_sequence_length, kPaddingId);
  seq.true_length = std::min(tokens.size(), max_sequence_length);
  for (std::size_t i = 0; i < seq.true_length; ++i) {
    seq.ids[i] = vocab.id(tokens[i]);
  }
  return seq;
}

FeatureSpace::FeatureSpace(
    Vocabulary vocab, std::vector<std::pair<std::int32_t, std::int32_t>> bigrams)
    : vocab_(std::move(vocab)), bigrams_(std::move(bigrams)) {
  for (std::size_t k = 0; k < bigrams_.size(); ++k) {
    if (!bigram_index_.emplace(bigrams_[k], vocab_.size() + k).second) {
      throw InvalidInputError("duplicate bigram feature");
    }
  }
}

FeatureVector FeatureSpace::features(const EncodedSequence& seq) const {
  std::map<std::size_t, double> counts;
  for (std::size_t i = 0; i < seq.true_length; ++i) {
    counts[static_cast<std::size_t>(seq.ids[i])] += 1.0;
    if (i + 1 < seq.true_length) {
      const auto it = bigram_index_.find({seq.ids[i], seq.ids[i + 1]});
      if (it != bigram_index_.end()) counts[it->second] += 1.0;
    }
  }
  return {counts.begin(), counts.end()};
}

FeatureVector BaselineModel::featurize(std::string_view cleaned_text) const {
  return space.features(encode(tokenize(cleaned_text), space.vocab(),
                               hyperparameters.max_sequence_length));
}

std::array<double, kNumLabels> BaselineModel::scores(const FeatureVector& x) const {
  std::array<double, kNumLabels> s = bias;
  const std::size_t dim = space.dimension();
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    for (const auto& [f, value] : x) s[c] += weights[c * dim + f] * value;
  }
  return s;
}

BaselineModel random_model(FeatureSpace space, std::uint64_t seed, double scale) {
  BaselineModel model;
  model.space = std::move(space);
  model.seed = seed;
  Rng rng(seed);
  model.weights.resize(kNumLabels * model.space.dimension());
  for (double& w : model.weights) w = scale * rng.normal();
  for (double& b : model.bias) b = scale * rng.normal();
  return model;
}

double example_objective(const BaselineModel& model, const FeatureVector& x,
                         CueLabel gold) {
  const auto s = model.scores(x);
  const double peak = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (double v : s) total += std::exp(v - peak);
  const double log_partition = peak + std::log(total);
  return log_partition - s[label_index(gold)] +
         0.5 * model.hyperparameters.l2_penalty * squared_norm(model.weights);
}

ExampleGradient example_gradient(const BaselineModel& model,
                                 const FeatureVector& x, CueLabel gold) {
  ExampleGradient g;
  const auto p = softmax(model.scores(x));
  const std::size_t y = label_index(gold);
  const double l2 = model.hyperparameters.l2_penalty;
  g.loss = -std::log(std::max(p[y], std::numeric_limits<double>::min())) +
           0.5 * l2 * squared_norm(model.weights);
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const double residual = p[c] - (c == y ? 1.0 : 0.0);
    g.bias_grad[c] = residual;
    for (const auto& [f, value] : x) {
      g.weight_grad.emplace_back(c, f, residual * value + l2 * model.weight(c, f));
    }
  }
  return g;
}

BaselineModel train_baseline(const Corpus& train,
                             const Hyperparameters& hyperparameters,
                             std::uint64_t seed) {
  for (CueLabel label : kAllLabels) {
    if (train.count(label) == 0) {
      throw InvalidInputError("training data has no " +
                              std::string(label_name(label)) +
                              " examples; all three labels are required");
    }
  }
  if (hyperparameters.epochs < 1 || hyperparameters.batch_size < 1) {
    throw InvalidInputError("epochs and batch_size must be at least 1");
  }
  if (!(hyperparameters.learning_rate > 0.0) ||
      !(hyperparameters.l2_penalty >= 0.0)) {
    throw InvalidInputError("learning_rate must be positive and l2_penalty non-negative");
  }

  Vocabulary vocab = build_vocab(train, hyperparameters.min_frequency);
  std::vector<EncodedSequence> encoded;
  std::set<std::pair<std::int32_t, std::int32_t>> bigram_set;
  for (const GoldExample& e : train.examples) {
    encoded.push_back(encode(tokenize(e.text), vocab,
                             hyperparameters.max_sequence_length));
    const EncodedSequence& seq = encoded.back();
    for (std::size_t i = 0; i + 1 < seq.true_length; ++i) {
      bigram_set.emplace(seq.ids[i], seq.ids[i + 1]);
    }
  }

  BaselineModel model;
  model.space = FeatureSpace(
      std::move(vocab), std::vector<std::pair<std::int32_t, std::int32_t>>(
                            bigram_set.begin(), bigram_set.end()));
  model.hyperparameters = hyperparameters;
  model.seed = seed;
  const std::size_t dim = model.space.dimension();
  model.weights.assign(kNumLabels * dim, 0.0);

  std::vector<FeatureVector> features;
  features.reserve(encoded.size());
  for (const EncodedSequence& seq : encoded) features.push_back(model.space.features(seq));

  const std::size_t n = train.examples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> grad(model.weights.size());
  Rng rng(seed);
  const double lr = hyperparameters.learning_rate;
  const double l2 = hyperparameters.l2_penalty;

  for (std::size_t epoch = 0; epoch < hyperparameters.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < n; begin += hyperparameters.batch_size) {
      const std::size_t end = std::min(n, begin + hyperparameters.batch_size);
      const double batch_n = static_cast<double>(end - begin);
      std::fill(grad.begin(), grad.end(), 0.0);
      std::array<double, kNumLabels> bias_grad{};
      double cross_entropy = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const FeatureVector& x = features[order[k]];
        const std::size_t y = label_index(train.examples[order[k]].label);
        const auto p = softmax(model.scores(x));
        cross_entropy -= std::log(std::max(p[y], std::numeric_limits<double>::min()));
        for (std::size_t c = 0; c < kNumLabels; ++c) {
          const double residual = p[c] - (c == y ? 1.0 : 0.0);
          bias_grad[c] += residual;
          for (const auto& [f, value] : x) grad[c * dim + f] += residual * value;
        }
      }
      const double objective =
          cross_entropy / batch_n + 0.5 * l2 * squared_norm(model.weights);
      epoch_loss += objective * batch_n;
      for (std::size_t i = 0; i < model.weights.size(); ++i) {
        model.weights[i] -= lr * (grad[i] / batch_n + l2 * model.weights[i]);
      }
      for (std::size_t c = 0; c < kNumLabels; ++c) {
        model.bias[c] -= lr * bias_grad[c] / batch_n;
      }
    }
    model.loss_history.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

Prediction predict(const BaselineModel& model, std::string_view text) {
  const std::string cleaned = clean_text(text);
  if (cleaned.empty()) {
    throw InvalidInputError("cannot classify text that is empty after cleaning");
  }
  Prediction p;
  p.probabilities = softmax(model.scores(model.featurize(cleaned)));
  p.label = argmax_label(p.probabilities);
  return p;
}

double gradient_check(const BaselineModel& model, const GoldExample& example,
                      double epsilon) {
  const FeatureVector x = model.featurize(clean_text(example.text));
  const ExampleGradient analytic = example_gradient(model, x, example.label);

  const auto relative_error = [](double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
  };

  BaselineModel probe = model;
  const std::size_t dim = model.space.dimension();
  double worst = 0.0;
  for (const auto& [c, f, value] : analytic.weight_grad) {
    double& w = probe.weights[c * dim + f];
    const double saved = w;
    w = saved + epsilon;
    const double up = example_objective(probe, x, example.label);
    w = saved - epsilon;
    const double down = example_objective(probe, x, example.label);
    w = saved;
    worst = std::max(worst, relative_error(value, (up - down) / (2.0 * epsilon)));
  }
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    double& b = probe.bias[c];
    const double saved = b;
    b = saved + epsilon;
    const double up = example_objective(probe, x, example.label);
    b = saved - epsilon;
    const double down = example_objective(probe, x, example.label);
    b = saved;
    worst = std::max(worst, relative_error(analytic.bias_grad[c],
                                           (up - down) / (2.0 * epsilon)));
  }
  return worst;
}

std::string save_model(const BaselineModel& model) {
  using nlohmann::json;
  const Hyperparameters& hp = model.hyperparameters;
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["seed"] = model.seed;
  doc["hyperparameters"] = {{"epochs", hp.epochs},
                            {"batch_size", hp.batch_size},
                            {"learning_rate", hp.learning_rate},
                            {"l2_penalty", hp.l2_penalty},
                            {"min_frequency", hp.min_frequency},
                            {"max_sequence_length", hp.max_sequence_length}};
  doc["vocabulary"] = {{"min_frequency", model.space.vocab().min_frequency()},
                       {"tokens", model.space.vocab().tokens()}};
  json bigrams = json::array();
  for (const auto& [a, b] : model.space.bigrams()) bigrams.push_back({a, b});
  doc["bigrams"] = std::move(bigrams);
  doc["bias"] = model.bias;
  const std::size_t dim = model.space.dimension();
  json weights = json::array();
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    weights.push_back(std::vector<double>(model.weights.begin() + c * dim,
                                          model.weights.begin() + (c + 1) * dim));
  }
  doc["weights"] = std::move(weights);
  doc["loss_history"] = model.loss_history;
  return doc.dump() + "\n";
}

BaselineModel load_model(std::string_view content) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    throw FormatError(0, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw FormatError(0, "not a baseline model file");
    }
    if (doc.at("version").get<int>() != kModelVersion) {
      throw FormatError(0, "unsupported model version " +
                               doc.at("version").dump());
    }
    BaselineModel model;
    model.seed = doc.at("seed").get<std::uint64_t>();
    const json& hp = doc.at("hyperparameters");
    model.hyperparameters.epochs = hp.at("epochs").get<std::size_t>();
    model.hyperparameters.batch_size = hp.at("batch_size").get<std::size_t>();
    model.hyperparameters.learning_rate = hp.at("learning_rate").get<double>();
    model.hyperparameters.l2_penalty = hp.at("l2_penalty").get<double>();
    model.hyperparameters.min_frequency = hp.at("min_frequency").get<std::size_t>();
    model.hyperparameters.max_sequence_length =
        hp.at("max_sequence_length").get<std::size_t>();

    const json& vocab = doc.at("vocabulary");
    std::vector<std::pair<std::int32_t, std::int32_t>> bigrams;
    for (const json& pair : doc.at("bigrams")) {
      bigrams.emplace_back(pair.at(0).get<std::int32_t>(),
                           pair.at(1).get<std::int32_t>());
    }
    model.space = FeatureSpace(
        Vocabulary(vocab.at("tokens").get<std::vector<std::string>>(),
                   vocab.at("min_frequency").get<std::size_t>()),
        std::move(bigrams));
    model.bias = doc.at("bias").get<std::array<double, kNumLabels>>();
    const json& weights = doc.at("weights");
    const std::size_t dim = model.space.dimension();
    if (weights.size() != kNumLabels) throw FormatError(0, "weights: expected 3 rows");
    for (const json& row : weights) {
      auto values = row.get<std::vector<double>>();
      if (values.size() != dim) {
        throw FormatError(0, "weights: row length " + std::to_string(values.size()) +
                                 " does not match feature dimension " +
                                 std::to_string(dim));
      }
      model.weights.insert(model.weights.end(), values.begin(), values.end());
    }
    model.loss_history = doc.at("loss_history").get<std::vector<double>>();
    return model;
  } catch (const json::exception& e) {
    throw FormatError(0, std::string("malformed model file: ") + e.what());
  }
}

BaselineClassifier::BaselineClassifier(BaselineModel model)
    : model_(std::move(model)), hash_(sha256_hex(save_model(model_))) {}

}  // namespace cuefid
