#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "di/corpus_io.hpp"

namespace di::classify {

struct LabeledDataset {
  Task task = Task::kSentiment;
  EmbeddingMatrix features;
  std::vector<std::string> labels;  // aligned to feature rows
};

void validate(const LabeledDataset& ds);

// Pairs each document carrying a label from the task's class set with its
// embedding row. Documents whose label belongs to another task are skipped.
LabeledDataset labeled_from_corpus(const DocumentSet& docs, const EmbeddingMatrix& emb, Task task);

// |train| = round(ratio * count), rounding half away from zero.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds, double ratio, std::uint64_t seed);

struct TrainConfig {
  double learning_rate = 1e-4;
  double weight_decay = 0.01;
  long long warmup_steps = -1;  // < 0: min(10000, max_steps / 10)
  long long max_steps = 1000;
  long long eval_every = 100;
  int patience = 5;
  std::size_t batch_size = 0;  // 0: full batch
  std::uint64_t seed = 0;

  long long effective_warmup() const;
};

void validate(const TrainConfig& c);

// Linear warmup to learning_rate, then linear decay to zero at max_steps.
double learning_rate_at(const TrainConfig& c, long long step);

struct Metrics {
  std::vector<std::string> classes;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f_score;
  std::vector<long long> support;
  std::vector<std::vector<long long>> confusion;  // [gold][predicted]
  double accuracy = 0.0;
  long long total = 0;
};

// Softmax regression: logits = W x + b, W is classes x dim (row-major).
struct Model {
  Task task = Task::kSentiment;
  std::vector<std::string> classes;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  TrainConfig config;
  Metrics val_metrics;
  double val_loss = 0.0;
  long long best_step = 0;
  long long steps_run = 0;
  int evaluations = 0;
  bool stopped_early = false;

  std::vector<double> probabilities(std::span<const double> x) const;
};

Model zero_model(Task task, std::size_t dim);

// Mean cross-entropy over the rows in `rows` plus (weight_decay / 2) * |W|^2.
// `grad_w` / `grad_b` are overwritten with the analytic gradient.
double loss_and_gradient(const Model& model, const EmbeddingMatrix& x, const std::vector<int>& y,
                         const std::vector<std::size_t>& rows, double weight_decay, std::vector<double>& grad_w,
                         std::vector<double>& grad_b);

double loss(const Model& model, const EmbeddingMatrix& x, const std::vector<int>& y, double weight_decay);

// Gradient descent with the warmup/decay schedule. Validation loss is
// measured at step 0 and every eval_every steps; training stops once
// `patience` consecutive evaluations fail to improve it and the best
// parameters are returned. An empty validation set falls back to the
// training set for these evaluations.
Model train_linear_head(const LabeledDataset& train, const LabeledDataset& val, const TrainConfig& config);

PredictionSet predict(const Model& model, const EmbeddingMatrix& features);

// Predictions and gold labels must cover the same ids.
Metrics evaluate(const PredictionSet& predictions, const std::map<std::string, std::string>& gold);
Metrics evaluate_labels(const std::vector<std::string>& classes, const std::vector<std::string>& predicted,
                        const std::vector<std::string>& gold);

nlohmann::json to_json(const Metrics& m);
Metrics metrics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

}  // namespace di::classify
