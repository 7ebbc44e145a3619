#include "topoprobe/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "topoprobe/io.hpp"
#include "topoprobe/rng.hpp"

namespace topo {

namespace {

using json = nlohmann::json;

Eigen::MatrixXd apply_activation(Activation a, const Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::kReLU:
      return z.cwiseMax(0.0);
    case Activation::kTanh:
      return z.array().tanh();
    case Activation::kSigmoid:
      return (1.0 / (1.0 + (-z.array()).exp())).matrix();
  }
  throw ParameterError("unknown activation");
}

// Derivative expressed through the activation output.
Eigen::ArrayXXd activation_grad_from_output(Activation a, const Eigen::MatrixXd& out) {
  switch (a) {
    case Activation::kReLU:
      return (out.array() > 0.0).cast<double>();
    case Activation::kTanh:
      return 1.0 - out.array().square();
    case Activation::kSigmoid:
      return out.array() * (1.0 - out.array());
  }
  throw ParameterError("unknown activation");
}

void check_chain(const NetworkParams& params, std::int64_t input_dim) {
  if (params.layers.empty()) throw ParameterError("network has no layers");
  std::int64_t d = input_dim;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const Layer& l = params.layers[i];
    if (l.W.cols() != d)
      throw ShapeError("layer " + std::to_string(i + 1) + " expects input dim " +
                       std::to_string(l.W.cols()) + ", got " + std::to_string(d));
    if (l.b.size() != l.W.rows())
      throw ShapeError("layer " + std::to_string(i + 1) + " bias size mismatch");
    d = l.W.rows();
  }
}

// Forward pass storing every post-activation matrix; no finiteness checks
// (training monitors the loss instead).
std::vector<Eigen::MatrixXd> forward_raw(const NetworkParams& params,
                                         const Eigen::MatrixXd& input) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(params.layers.size());
  const Eigen::MatrixXd* prev = &input;
  for (const Layer& l : params.layers) {
    Eigen::MatrixXd z = (*prev) * l.W.transpose();
    z.rowwise() += l.b.transpose();
    acts.push_back(apply_activation(l.activation, z));
    prev = &acts.back();
  }
  return acts;
}

constexpr double kProbClamp = 1e-7;

double clamped_bce(const Eigen::ArrayXd& p, const Eigen::ArrayXd& y) {
  const Eigen::ArrayXd q = p.max(kProbClamp).min(1.0 - kProbClamp);
  return -(y * q.log() + (1.0 - y) * (1.0 - q).log()).mean();
}

Eigen::ArrayXd labels_as_array(const std::vector<std::int32_t>& labels) {
  Eigen::ArrayXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    y(static_cast<Eigen::Index>(i)) = labels[i] ? 1.0 : 0.0;
  return y;
}

void require_classifier_head(const NetworkParams& params) {
  const Layer& last = params.layers.back();
  if (last.activation != Activation::kSigmoid || last.W.rows() != 1)
    throw ParameterError("binary cross-entropy needs a width-1 Sigmoid output layer");
}

}  // namespace

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kReLU: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

Activation activation_from_name(std::string_view name) {
  if (name == "relu") return Activation::kReLU;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ParameterError("unknown activation '" + std::string(name) + "'");
}

ForwardResult forward(const NetworkParams& params, const PointCloud& input) {
  check_chain(params, input.dim());
  auto acts = forward_raw(params, input.points);
  for (const auto& a : acts)
    if (!a.allFinite())
      throw NumericError("non-finite activation in forward pass");

  ForwardResult result;
  result.output = acts.back();
  result.representations.reserve(acts.size());
  for (std::size_t i = 0; i < acts.size(); ++i)
    result.representations.push_back({static_cast<int>(i) + 1, std::move(acts[i])});
  return result;
}

std::vector<LayerRepresentation> extract_representations(const NetworkParams& params,
                                                         const PointCloud& cloud) {
  return forward(params, cloud).representations;
}

Gradients gradients(const NetworkParams& params, const LabeledDataset& batch) {
  check_chain(params, batch.cloud.dim());
  require_classifier_head(params);
  const std::int64_t n = batch.cloud.size();
  if (n < 1) throw ParameterError("gradient of an empty batch");
  if (static_cast<std::int64_t>(batch.labels.size()) != n)
    throw ShapeError("label count does not match batch size");

  const auto acts = forward_raw(params, batch.cloud.points);
  const std::size_t L = params.layers.size();

  Gradients grads;
  grads.dW.resize(L);
  grads.db.resize(L);

  // d(mean BCE)/dz for the sigmoid head is (p - y)/n; the loss clamp only
  // affects reported values, not the gradient.
  const Eigen::ArrayXd y = labels_as_array(batch.labels);
  Eigen::MatrixXd delta = ((acts.back().col(0).array() - y) / static_cast<double>(n))
                              .matrix();

  for (std::size_t li = L; li-- > 0;) {
    const Eigen::MatrixXd& below = li == 0 ? batch.cloud.points : acts[li - 1];
    grads.dW[li] = delta.transpose() * below;
    grads.db[li] = delta.colwise().sum().transpose();
    if (li > 0) {
      Eigen::MatrixXd up = delta * params.layers[li].W;
      delta = (up.array() * activation_grad_from_output(params.layers[li - 1].activation,
                                                        acts[li - 1]))
                  .matrix();
    }
  }
  return grads;
}

double evaluate_loss(const NetworkParams& params, const LabeledDataset& dataset) {
  check_chain(params, dataset.cloud.dim());
  require_classifier_head(params);
  const auto acts = forward_raw(params, dataset.cloud.points);
  return clamped_bce(acts.back().col(0).array(), labels_as_array(dataset.labels));
}

double evaluate_accuracy(const NetworkParams& params, const LabeledDataset& dataset) {
  check_chain(params, dataset.cloud.dim());
  require_classifier_head(params);
  const auto acts = forward_raw(params, dataset.cloud.points);
  const Eigen::ArrayXd p = acts.back().col(0).array();
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < dataset.cloud.size(); ++i)
    if ((p(i) >= 0.5) == (dataset.labels[static_cast<std::size_t>(i)] != 0)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(dataset.cloud.size());
}

AdamState make_adam_state(const NetworkParams& params, double lr, double beta1,
                          double beta2, double eps) {
  if (!(lr > 0.0) || !(eps > 0.0) || beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 ||
      beta2 >= 1.0)
    throw ParameterError("Adam requires lr > 0, eps > 0, 0 <= beta < 1");
  AdamState state;
  state.lr = lr;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.eps = eps;
  for (const Layer& l : params.layers) {
    state.mW.push_back(Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()));
    state.vW.push_back(Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()));
    state.mb.push_back(Eigen::VectorXd::Zero(l.b.size()));
    state.vb.push_back(Eigen::VectorXd::Zero(l.b.size()));
  }
  return state;
}

void adam_step(AdamState& state, NetworkParams& params, const Gradients& grads) {
  const std::size_t L = params.layers.size();
  if (grads.dW.size() != L || state.mW.size() != L)
    throw ShapeError("Adam state/gradient layer count mismatch");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  for (std::size_t i = 0; i < L; ++i) {
    if (grads.dW[i].rows() != params.layers[i].W.rows() ||
        grads.dW[i].cols() != params.layers[i].W.cols())
      throw ShapeError("gradient shape mismatch at layer " + std::to_string(i + 1));
    state.mW[i] = state.beta1 * state.mW[i] + (1.0 - state.beta1) * grads.dW[i];
    state.vW[i] = state.beta2 * state.vW[i] +
                  (1.0 - state.beta2) * grads.dW[i].array().square().matrix();
    state.mb[i] = state.beta1 * state.mb[i] + (1.0 - state.beta1) * grads.db[i];
    state.vb[i] = state.beta2 * state.vb[i] +
                  (1.0 - state.beta2) * grads.db[i].array().square().matrix();

    params.layers[i].W.array() -= state.lr * (state.mW[i].array() / bc1) /
                                  ((state.vW[i].array() / bc2).sqrt() + state.eps);
    params.layers[i].b.array() -= state.lr * (state.mb[i].array() / bc1) /
                                  ((state.vb[i].array() / bc2).sqrt() + state.eps);
  }
}

NetworkParams init_network(const std::vector<LayerSpec>& arch, std::uint64_t seed) {
  if (arch.empty()) throw ParameterError("architecture is empty");
  for (std::size_t i = 0; i + 1 < arch.size(); ++i)
    if (arch[i].out_dim != arch[i + 1].in_dim)
      throw ShapeError("layer dims do not chain at layer " + std::to_string(i + 1));

  SplitMix64 rng(seed);
  NetworkParams params;
  for (const LayerSpec& spec : arch) {
    if (spec.in_dim < 1 || spec.out_dim < 1)
      throw ParameterError("layer dims must be positive");
    const double fan_in = spec.in_dim, fan_out = spec.out_dim;
    const double limit = spec.activation == Activation::kReLU
                             ? std::sqrt(6.0 / fan_in)
                             : std::sqrt(6.0 / (fan_in + fan_out));
    Layer l;
    l.activation = spec.activation;
    l.W.resize(spec.out_dim, spec.in_dim);
    for (int r = 0; r < spec.out_dim; ++r)
      for (int c = 0; c < spec.in_dim; ++c) l.W(r, c) = rng.uniform(-limit, limit);
    l.b = Eigen::VectorXd::Zero(spec.out_dim);
    params.layers.push_back(std::move(l));
  }
  return params;
}

TrainResult train(const LabeledDataset& dataset, const std::vector<LayerSpec>& arch,
                  const TrainConfig& config) {
  const std::int64_t n = dataset.cloud.size();
  if (n < 1) throw ParameterError("cannot train on an empty dataset");
  if (static_cast<std::int64_t>(dataset.labels.size()) != n)
    throw ShapeError("label count does not match dataset size");
  if (arch.empty() || arch.front().in_dim != dataset.cloud.dim())
    throw ShapeError("architecture input dim does not match the dataset");
  if (arch.back().activation != Activation::kSigmoid || arch.back().out_dim != 1)
    throw ParameterError("last layer must be Sigmoid with out_dim 1");
  if (config.epochs < 0 || config.batch_size < 1)
    throw ParameterError("epochs must be >= 0 and batch_size >= 1");
  if (config.validation_fraction < 0.0 || config.validation_fraction >= 1.0)
    throw ParameterError("validation_fraction must be in [0, 1)");

  TrainResult result;
  result.params = init_network(arch, derive_seed(config.seed, "init"));

  // Deterministic 80/20-style split; training only ever sees the train part.
  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  SplitMix64 split_rng(derive_seed(config.seed, "split"));
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(
        split_rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  const std::int64_t n_val =
      static_cast<std::int64_t>(std::floor(config.validation_fraction * static_cast<double>(n)));
  const std::int64_t n_train = n - n_val;
  if (n_train < 1) throw ParameterError("validation split leaves no training rows");

  auto gather = [&](std::int64_t begin, std::int64_t count) {
    LabeledDataset part;
    part.cloud.points.resize(count, dataset.cloud.dim());
    part.labels.resize(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
      const std::int64_t src = perm[static_cast<std::size_t>(begin + i)];
      part.cloud.points.row(i) = dataset.cloud.points.row(src);
      part.labels[static_cast<std::size_t>(i)] = dataset.labels[static_cast<std::size_t>(src)];
    }
    return part;
  };
  const LabeledDataset train_split = gather(n_val, n_train);
  const LabeledDataset val_split = gather(0, n_val);

  AdamState adam = make_adam_state(result.params, config.lr);
  SplitMix64 shuffle_rng(derive_seed(config.seed, "shuffle"));
  std::vector<std::int64_t> order(static_cast<std::size_t>(n_train));
  for (std::int64_t i = 0; i < n_train; ++i) order[static_cast<std::size_t>(i)] = i;

  LabeledDataset batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::int64_t i = n_train - 1; i > 0; --i) {
      const auto j = static_cast<std::int64_t>(
          shuffle_rng.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (std::int64_t start = 0; start < n_train; start += config.batch_size) {
      const std::int64_t count = std::min<std::int64_t>(config.batch_size, n_train - start);
      batch.cloud.points.resize(count, train_split.cloud.dim());
      batch.labels.resize(static_cast<std::size_t>(count));
      for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t src = order[static_cast<std::size_t>(start + i)];
        batch.cloud.points.row(i) = train_split.cloud.points.row(src);
        batch.labels[static_cast<std::size_t>(i)] =
            train_split.labels[static_cast<std::size_t>(src)];
      }
      adam_step(adam, result.params, gradients(result.params, batch));
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = evaluate_loss(result.params, train_split);
    stats.accuracy = evaluate_accuracy(result.params, train_split);
    if (!std::isfinite(stats.loss)) throw DivergenceError(epoch);
    result.history.push_back(stats);
  }

  if (n_val > 0)
    result.validation_accuracy = evaluate_accuracy(result.params, val_split);
  return result;
}

HomeoDiagnostic homeomorphism_diagnostic(const Layer& layer) {
  HomeoDiagnostic diag;
  diag.square = layer.W.rows() == layer.W.cols();
  if (diag.square && layer.W.rows() > 0) {
    const double norm = layer.W.norm();
    if (norm > 0.0) {
      // |det| of the norm-scaled matrix, so the tolerance is scale-free.
      const double det = Eigen::FullPivLU<Eigen::MatrixXd>(layer.W / norm).determinant();
      diag.invertible = std::abs(det) > 1e-10;
    }
  }
  diag.bijective_activation = layer.activation == Activation::kTanh;
  diag.sigmoid_bijective_onto_image = layer.activation == Activation::kSigmoid;
  diag.possibly_homeomorphic = diag.square && diag.invertible && diag.bijective_activation;
  return diag;
}

void save_network_json(const NetworkParams& params, const std::filesystem::path& path) {
  json doc;
  doc["layers"] = json::array();
  for (const Layer& l : params.layers) {
    json jl;
    jl["activation"] = activation_name(l.activation);
    jl["in_dim"] = l.W.cols();
    jl["out_dim"] = l.W.rows();
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(l.W.size()));
    for (Eigen::Index r = 0; r < l.W.rows(); ++r)
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) w.push_back(l.W(r, c));
    jl["weights"] = w;
    jl["bias"] = std::vector<double>(l.b.data(), l.b.data() + l.b.size());
    doc["layers"].push_back(std::move(jl));
  }
  write_text_file(path, doc.dump(2) + "\n");
}

NetworkParams load_network_json(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw IoError("invalid network JSON: " + std::string(e.what()));
  }
  NetworkParams params;
  for (const auto& jl : doc.at("layers")) {
    Layer l;
    l.activation = activation_from_name(jl.at("activation").get<std::string>());
    const auto rows = jl.at("out_dim").get<Eigen::Index>();
    const auto cols = jl.at("in_dim").get<Eigen::Index>();
    const auto w = jl.at("weights").get<std::vector<double>>();
    const auto b = jl.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols ||
        static_cast<Eigen::Index>(b.size()) != rows)
      throw IoError("network JSON layer sizes are inconsistent");
    l.W.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        l.W(r, c) = w[static_cast<std::size_t>(r * cols + c)];
    l.b = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
    params.layers.push_back(std::move(l));
  }
  if (params.layers.empty()) throw IoError("network JSON has no layers");
  return params;
}

void write_history_csv(const std::vector<EpochStats>& history, std::ostream& os) {
  os << "epoch,loss,accuracy\n";
  for (const EpochStats& s : history)
    os << s.epoch << ',' << format_double(s.loss) << ',' << format_double(s.accuracy)
       << '\n';
}

}  // namespace topo
