#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "topoprobe/point_cloud.hpp"

namespace topo {

enum class Activation { kReLU, kTanh, kSigmoid };

const char* activation_name(Activation a);
Activation activation_from_name(std::string_view name);

struct LayerSpec {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::kReLU;
};

struct Layer {
  Eigen::MatrixXd W;  // out_dim x in_dim
  Eigen::VectorXd b;  // out_dim
  Activation activation = Activation::kReLU;
};

struct NetworkParams {
  std::vector<Layer> layers;
};

// Post-activation output of one layer over a whole cloud; layer_index is
// 1-based and counts every layer including the output.
struct LayerRepresentation {
  int layer_index = 0;
  Eigen::MatrixXd values;  // n x out_dim
};

struct ForwardResult {
  Eigen::MatrixXd output;  // final representation (n x out_dim of last layer)
  std::vector<LayerRepresentation> representations;
};

ForwardResult forward(const NetworkParams& params, const PointCloud& input);

// forward()'s representation list: hidden layers and the output, not the
// input itself.
std::vector<LayerRepresentation> extract_representations(const NetworkParams& params,
                                                         const PointCloud& cloud);

struct Gradients {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

// Exact gradient of mean binary cross-entropy over the batch w.r.t. every
// W and b. The network must end in a width-1 Sigmoid layer.
Gradients gradients(const NetworkParams& params, const LabeledDataset& batch);

// Mean binary cross-entropy; predictions are clamped to [1e-7, 1-1e-7]
// inside the logs.
double evaluate_loss(const NetworkParams& params, const LabeledDataset& dataset);
// Fraction of rows with (p >= 0.5) == label.
double evaluate_accuracy(const NetworkParams& params, const LabeledDataset& dataset);

struct AdamState {
  std::int64_t step = 0;
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState make_adam_state(const NetworkParams& params, double lr = 1e-3,
                          double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

// One bias-corrected Adam update, applied in place.
void adam_step(AdamState& state, NetworkParams& params, const Gradients& grads);

// He-uniform init for ReLU layers, Xavier-uniform for Tanh/Sigmoid; zero bias.
NetworkParams init_network(const std::vector<LayerSpec>& arch, std::uint64_t seed);

struct TrainConfig {
  int epochs = 300;
  int batch_size = 64;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double validation_fraction = 0.2;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;      // train-split mean BCE after the epoch
  double accuracy = 0.0;  // train-split accuracy after the epoch
};

struct TrainResult {
  NetworkParams params;
  std::vector<EpochStats> history;
  std::optional<double> validation_accuracy;  // absent when the split is empty
};

// Minimizes mean binary cross-entropy with Adam over shuffled minibatches.
// Deterministic given seed. Throws DivergenceError when the loss goes
// non-finite, naming the epoch.
TrainResult train(const LabeledDataset& dataset, const std::vector<LayerSpec>& arch,
                  const TrainConfig& config);

// Theorem-style layer diagnostic: a layer can only be a homeomorphism onto
// its image if W is square and invertible and the activation is a bijection.
struct HomeoDiagnostic {
  bool square = false;
  bool invertible = false;            // square and |det| above tolerance
  bool bijective_activation = false;  // Tanh only
  bool possibly_homeomorphic = false;
  // Sigmoid is a bijection onto (0,1), not onto all of R; reported as a
  // side note rather than as bijectivity.
  bool sigmoid_bijective_onto_image = false;
};

HomeoDiagnostic homeomorphism_diagnostic(const Layer& layer);

// Portable JSON: row-major weights, bias array, activation tag per layer.
void save_network_json(const NetworkParams& params, const std::filesystem::path& path);
NetworkParams load_network_json(const std::filesystem::path& path);

// CSV "epoch,loss,accuracy".
void write_history_csv(const std::vector<EpochStats>& history, std::ostream& os);

}  // namespace topo
