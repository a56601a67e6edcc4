#include "di/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "di/error.hpp"

namespace di::classify {

using nlohmann::json;

namespace {

int class_index(const std::vector<std::string>& classes, const std::string& label) {
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) fail(ErrorKind::kInvalidInput, "unknown class label '" + label + "'");
  return static_cast<int>(it - classes.begin());
}

std::vector<int> encode_labels(const LabeledDataset& ds) {
  const auto& classes = class_set(ds.task);
  std::vector<int> y;
  y.reserve(ds.labels.size());
  for (const auto& l : ds.labels) y.push_back(class_index(classes, l));
  return y;
}

LabeledDataset subset(const LabeledDataset& ds, std::span<const std::size_t> rows) {
  LabeledDataset out;
  out.task = ds.task;
  out.features.dim = ds.features.dim;
  out.features.count = rows.size();
  out.features.values.reserve(rows.size() * ds.features.dim);
  for (std::size_t r : rows) {
    const auto row = ds.features.row(r);
    out.features.values.insert(out.features.values.end(), row.begin(), row.end());
    out.features.doc_ids.push_back(ds.features.doc_ids[r]);
    out.labels.push_back(ds.labels[r]);
  }
  return out;
}

// Numerically stable softmax of W x + b into `p`.
void softmax_row(const Model& m, std::span<const double> x, std::vector<double>& p) {
  const std::size_t k = m.classes.size();
  p.assign(k, 0.0);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    double z = m.bias[c];
    const double* w = m.weights.data() + c * m.dim;
    for (std::size_t d = 0; d < m.dim; ++d) z += w[d] * x[d];
    p[c] = z;
    max_logit = std::max(max_logit, z);
  }
  double sum = 0.0;
  for (auto& v : p) {
    v = std::exp(v - max_logit);
    sum += v;
  }
  for (auto& v : p) v /= sum;
}

}  // namespace

void validate(const LabeledDataset& ds) {
  if (ds.labels.size() != ds.features.count) {
    fail(ErrorKind::kInvalidInput, "labels are not aligned to feature rows");
  }
  for (const auto& l : ds.labels) {
    if (!is_class_of(ds.task, l)) {
      fail(ErrorKind::kInvalidInput, "label '" + l + "' is not a " + std::string(to_string(ds.task)) + " class");
    }
  }
}

LabeledDataset labeled_from_corpus(const DocumentSet& docs, const EmbeddingMatrix& emb, Task task) {
  std::unordered_map<std::string_view, std::size_t> rows;
  for (std::size_t i = 0; i < emb.count; ++i) rows.emplace(emb.doc_ids[i], i);
  std::vector<std::size_t> picked;
  LabeledDataset all;
  all.task = task;
  all.features = emb;
  all.labels.assign(emb.count, {});
  for (const auto& d : docs.documents) {
    if (!d.label || !is_class_of(task, *d.label)) continue;
    const auto it = rows.find(d.id);
    if (it == rows.end()) fail(ErrorKind::kInvalidInput, "no embedding row for labeled document '" + d.id + "'");
    all.labels[it->second] = *d.label;
    picked.push_back(it->second);
  }
  return subset(all, picked);
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds, double ratio, std::uint64_t seed) {
  validate(ds);
  if (ds.features.count < 2) fail(ErrorKind::kInvalidInput, "split needs at least 2 items");
  if (!(ratio > 0.0 && ratio <= 1.0)) fail(ErrorKind::kInvalidInput, "split ratio must be in (0, 1]");
  std::vector<std::size_t> order(ds.features.count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(order.size())));
  const std::span<const std::size_t> all(order);
  return {subset(ds, all.first(n_train)), subset(ds, all.subspan(n_train))};
}

long long TrainConfig::effective_warmup() const {
  if (warmup_steps >= 0) return std::min(warmup_steps, max_steps);
  return std::min<long long>(10000, max_steps / 10);
}

void validate(const TrainConfig& c) {
  if (!(c.learning_rate > 0.0)) fail(ErrorKind::kInvalidInput, "learning_rate must be > 0");
  if (c.weight_decay < 0.0) fail(ErrorKind::kInvalidInput, "weight_decay must be >= 0");
  if (c.max_steps < 0) fail(ErrorKind::kInvalidInput, "max_steps must be >= 0");
  if (c.eval_every < 1) fail(ErrorKind::kInvalidInput, "eval_every must be >= 1");
  if (c.patience < 1) fail(ErrorKind::kInvalidInput, "patience must be >= 1");
}

double learning_rate_at(const TrainConfig& c, long long step) {
  const long long warmup = c.effective_warmup();
  if (step < warmup) return c.learning_rate * static_cast<double>(step + 1) / static_cast<double>(warmup);
  const long long decay_span = c.max_steps - warmup;
  if (decay_span <= 0) return 0.0;
  return c.learning_rate * static_cast<double>(c.max_steps - step) / static_cast<double>(decay_span);
}

std::vector<double> Model::probabilities(std::span<const double> x) const {
  std::vector<double> p;
  softmax_row(*this, x, p);
  return p;
}

Model zero_model(Task task, std::size_t dim) {
  Model m;
  m.task = task;
  m.classes = class_set(task);
  m.dim = dim;
  m.weights.assign(m.classes.size() * dim, 0.0);
  m.bias.assign(m.classes.size(), 0.0);
  return m;
}

double loss_and_gradient(const Model& model, const EmbeddingMatrix& x, const std::vector<int>& y,
                         const std::vector<std::size_t>& rows, double weight_decay, std::vector<double>& grad_w,
                         std::vector<double>& grad_b) {
  const std::size_t k = model.classes.size();
  grad_w.assign(model.weights.size(), 0.0);
  grad_b.assign(k, 0.0);
  if (rows.empty()) return 0.0;
  double total = 0.0;
  std::vector<double> p;
  for (std::size_t r : rows) {
    const auto xr = x.row(r);
    softmax_row(model, xr, p);
    total -= std::log(std::max(p[static_cast<std::size_t>(y[r])], std::numeric_limits<double>::min()));
    for (std::size_t c = 0; c < k; ++c) {
      const double delta = p[c] - (static_cast<int>(c) == y[r] ? 1.0 : 0.0);
      double* g = grad_w.data() + c * model.dim;
      for (std::size_t d = 0; d < model.dim; ++d) g[d] += delta * xr[d];
      grad_b[c] += delta;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  double l2 = 0.0;
  for (std::size_t i = 0; i < grad_w.size(); ++i) {
    grad_w[i] = grad_w[i] * inv_n + weight_decay * model.weights[i];
    l2 += model.weights[i] * model.weights[i];
  }
  for (auto& g : grad_b) g *= inv_n;
  return total * inv_n + 0.5 * weight_decay * l2;
}

double loss(const Model& model, const EmbeddingMatrix& x, const std::vector<int>& y, double weight_decay) {
  std::vector<std::size_t> rows(x.count);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> gw, gb;
  return loss_and_gradient(model, x, y, rows, weight_decay, gw, gb);
}

Model train_linear_head(const LabeledDataset& train, const LabeledDataset& val, const TrainConfig& config) {
  validate(config);
  validate(train);
  validate(val);
  if (train.features.count == 0) fail(ErrorKind::kInvalidInput, "empty training set");
  if (val.features.count > 0 && val.features.dim != train.features.dim) {
    fail(ErrorKind::kInvalidInput, "train/val feature dimensions differ");
  }
  const std::vector<int> y_train = encode_labels(train);
  if (std::set<int>(y_train.begin(), y_train.end()).size() < 2) {
    fail(ErrorKind::kInvalidInput, "training set contains a single class");
  }
  const LabeledDataset& eval_set = val.features.count > 0 ? val : train;
  const std::vector<int> y_eval = encode_labels(eval_set);

  Model model = zero_model(train.task, train.features.dim);
  model.config = config;

  auto eval_loss = [&](const Model& m) {
    const double l = loss(m, eval_set.features, y_eval, 0.0);
    if (!std::isfinite(l)) fail(ErrorKind::kNumeric, "non-finite validation loss");
    return l;
  };

  Model best = model;
  double best_loss = eval_loss(model);
  int evaluations = 1;
  int stale = 0;
  long long steps_run = 0;
  bool stopped_early = false;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> all_rows(train.features.count);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<std::size_t> batch;
  std::size_t cursor = all_rows.size();
  std::vector<double> gw, gb;

  for (long long step = 0; step < config.max_steps; ++step) {
    if (config.batch_size == 0 || config.batch_size >= all_rows.size()) {
      batch = all_rows;
    } else {
      batch.clear();
      while (batch.size() < config.batch_size) {
        if (cursor == all_rows.size()) {
          std::shuffle(all_rows.begin(), all_rows.end(), rng);
          cursor = 0;
        }
        batch.push_back(all_rows[cursor++]);
      }
    }
    const double l = loss_and_gradient(model, train.features, y_train, batch, config.weight_decay, gw, gb);
    if (!std::isfinite(l)) fail(ErrorKind::kNumeric, "non-finite training loss at step " + std::to_string(step));
    const double lr = learning_rate_at(config, step);
    for (std::size_t i = 0; i < gw.size(); ++i) model.weights[i] -= lr * gw[i];
    for (std::size_t c = 0; c < gb.size(); ++c) model.bias[c] -= lr * gb[c];
    steps_run = step + 1;

    if (steps_run % config.eval_every == 0 || steps_run == config.max_steps) {
      const double vl = eval_loss(model);
      ++evaluations;
      if (vl < best_loss) {
        best_loss = vl;
        best = model;
        best.best_step = steps_run;
        stale = 0;
      } else if (++stale >= config.patience) {
        stopped_early = true;
        break;
      }
    }
  }

  best.config = config;
  best.val_loss = best_loss;
  best.steps_run = steps_run;
  best.evaluations = evaluations;
  best.stopped_early = stopped_early;
  const PredictionSet preds = predict(best, eval_set.features);
  std::vector<std::string> predicted;
  predicted.reserve(preds.records.size());
  for (const auto& r : preds.records) predicted.push_back(r.label);
  best.val_metrics = evaluate_labels(best.classes, predicted, eval_set.labels);
  return best;
}

PredictionSet predict(const Model& model, const EmbeddingMatrix& features) {
  if (features.count > 0 && features.dim != model.dim) {
    fail(ErrorKind::kInvalidInput, "feature dim " + std::to_string(features.dim) + " does not match model dim " +
                                       std::to_string(model.dim));
  }
  PredictionSet out;
  out.task = model.task;
  out.records.reserve(features.count);
  std::vector<double> p;
  for (std::size_t i = 0; i < features.count; ++i) {
    softmax_row(model, features.row(i), p);
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    out.records.push_back({features.doc_ids[i], model.classes[best], p[best]});
  }
  return out;
}

Metrics evaluate_labels(const std::vector<std::string>& classes, const std::vector<std::string>& predicted,
                        const std::vector<std::string>& gold) {
  if (predicted.size() != gold.size()) fail(ErrorKind::kInvalidInput, "prediction/gold size mismatch");
  const std::size_t k = classes.size();
  Metrics m;
  m.classes = classes;
  m.confusion.assign(k, std::vector<long long>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++m.confusion[static_cast<std::size_t>(class_index(classes, gold[i]))]
                 [static_cast<std::size_t>(class_index(classes, predicted[i]))];
  }
  m.total = static_cast<long long>(gold.size());
  long long correct = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const long long tp = m.confusion[c][c];
    long long predicted_c = 0;
    long long gold_c = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted_c += m.confusion[o][c];
      gold_c += m.confusion[c][o];
    }
    correct += tp;
    const double p = predicted_c ? static_cast<double>(tp) / static_cast<double>(predicted_c) : 0.0;
    const double r = gold_c ? static_cast<double>(tp) / static_cast<double>(gold_c) : 0.0;
    m.precision.push_back(p);
    m.recall.push_back(r);
    m.f_score.push_back(p + r > 0 ? 2 * p * r / (p + r) : 0.0);
    m.support.push_back(gold_c);
  }
  m.accuracy = m.total ? static_cast<double>(correct) / static_cast<double>(m.total) : 0.0;
  return m;
}

Metrics evaluate(const PredictionSet& predictions, const std::map<std::string, std::string>& gold) {
  if (predictions.records.size() != gold.size()) {
    fail(ErrorKind::kInvalidInput, "prediction ids do not match gold ids (" +
                                       std::to_string(predictions.records.size()) + " vs " +
                                       std::to_string(gold.size()) + ")");
  }
  std::vector<std::string> predicted;
  std::vector<std::string> truth;
  for (const auto& rec : predictions.records) {
    const auto it = gold.find(rec.doc_id);
    if (it == gold.end()) fail(ErrorKind::kInvalidInput, "no gold label for '" + rec.doc_id + "'");
    predicted.push_back(rec.label);
    truth.push_back(it->second);
  }
  return evaluate_labels(class_set(predictions.task), predicted, truth);
}

json to_json(const Metrics& m) {
  json per_class = json::object();
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    per_class[m.classes[c]] = {{"precision", m.precision[c]},
                               {"recall", m.recall[c]},
                               {"f_score", m.f_score[c]},
                               {"support", m.support[c]}};
  }
  return {{"classes", m.classes},
          {"per_class", std::move(per_class)},
          {"accuracy", m.accuracy},
          {"total", m.total},
          {"confusion", m.confusion}};
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.classes = j.at("classes").get<std::vector<std::string>>();
  for (const auto& c : m.classes) {
    const auto& pc = j.at("per_class").at(c);
    m.precision.push_back(pc.at("precision").get<double>());
    m.recall.push_back(pc.at("recall").get<double>());
    m.f_score.push_back(pc.at("f_score").get<double>());
    m.support.push_back(pc.at("support").get<long long>());
  }
  m.accuracy = j.at("accuracy").get<double>();
  m.total = j.at("total").get<long long>();
  m.confusion = j.at("confusion").get<std::vector<std::vector<long long>>>();
  return m;
}

json to_json(const Model& m) {
  const auto& c = m.config;
  return {{"task", to_string(m.task)},
          {"classes", m.classes},
          {"dim", m.dim},
          {"weights", m.weights},
          {"bias", m.bias},
          {"config",
           {{"learning_rate", c.learning_rate},
            {"weight_decay", c.weight_decay},
            {"warmup_steps", c.effective_warmup()},
            {"max_steps", c.max_steps},
            {"eval_every", c.eval_every},
            {"patience", c.patience},
            {"batch_size", c.batch_size},
            {"seed", c.seed},
            {"optimizer", "gradient_descent"}}},
          {"val_metrics", to_json(m.val_metrics)},
          {"val_loss", m.val_loss},
          {"best_step", m.best_step},
          {"steps_run", m.steps_run},
          {"evaluations", m.evaluations},
          {"stopped_early", m.stopped_early}};
}

Model model_from_json(const json& j) {
  try {
    Model m;
    m.task = parse_task(j.at("task").get<std::string>());
    m.classes = j.at("classes").get<std::vector<std::string>>();
    if (m.classes != class_set(m.task)) fail(ErrorKind::kInvalidInput, "model classes do not match its task");
    m.dim = j.at("dim").get<std::size_t>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<std::vector<double>>();
    if (m.weights.size() != m.classes.size() * m.dim || m.bias.size() != m.classes.size()) {
      fail(ErrorKind::kInvalidInput, "model parameter shapes do not match classes x dim");
    }
    const auto& c = j.at("config");
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.weight_decay = c.at("weight_decay").get<double>();
    m.config.warmup_steps = c.at("warmup_steps").get<long long>();
    m.config.max_steps = c.at("max_steps").get<long long>();
    m.config.eval_every = c.at("eval_every").get<long long>();
    m.config.patience = c.at("patience").get<int>();
    m.config.batch_size = c.at("batch_size").get<std::size_t>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.val_metrics = metrics_from_json(j.at("val_metrics"));
    m.val_loss = j.at("val_loss").get<double>();
    m.best_step = j.at("best_step").get<long long>();
    m.steps_run = j.at("steps_run").get<long long>();
    m.evaluations = j.at("evaluations").get<int>();
    m.stopped_early = j.at("stopped_early").get<bool>();
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("malformed model file: ") + e.what());
  }
}

}  // namespace di::classify
