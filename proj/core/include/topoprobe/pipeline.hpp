#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "topoprobe/config.hpp"
#include "topoprobe/filtration.hpp"
#include "topoprobe/mlp.hpp"
#include "topoprobe/point_cloud.hpp"

namespace topo {

inline constexpr const char* kVersion = "0.1.0";

struct ClusterPolicy {
  std::optional<double> eps;  // fixed; otherwise the kNN-percentile policy below
  int eps_knn = 10;
  double eps_percentile = 50.0;
  int min_pts = 10;
  std::int64_t min_cluster_size = 20;  // smaller clusters skip persistence
};

// The full experiment: generate -> train -> extract -> per-layer analysis ->
// raw-data persistence, one activation variant per run.
struct ExperimentConfig {
  std::uint64_t master_seed = 42;
  std::filesystem::path output_dir = "out";

  double torus_major_radius = 3.0;
  double torus_tube_scale = 1.0;
  std::int64_t torus_points = 4900;
  std::int64_t noise_points = 4900;
  double noise_margin = 0.5;

  Activation hidden_activation = Activation::kReLU;
  std::vector<int> hidden_units = {10, 30, 10};
  int epochs = 300;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double validation_fraction = 0.2;

  int max_dim = 1;
  std::optional<double> threshold;  // absent => enclosing radius per diagram
  std::int64_t landmarks = 400;
  std::int64_t simplex_cap = kDefaultSimplexCap;

  ClusterPolicy clustering;
  int pca_components = 3;
  int analysis_layers = 3;  // hidden layers fed to clustering/persistence/PCA
};

ExperimentConfig experiment_config_from_map(const KeyValueMap& map);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
KeyValueMap experiment_config_to_map(const ExperimentConfig& config);

// Table-style architecture: input dim 4 through the hidden widths with the
// configured activation, then a width-1 Sigmoid head.
std::vector<LayerSpec> architecture_of(const ExperimentConfig& config);

struct ClusterReport {
  std::int32_t cluster = 0;
  std::int64_t size = 0;
  bool analyzed = false;  // false = below the persistence size threshold
  std::uint64_t landmark_seed = 0;
  std::string points_csv;
  std::string diagram_csv;  // empty when not analyzed
  std::string diagram_svg;
};

struct LayerReport {
  int layer = 0;
  double eps = 0.0;
  std::int64_t cluster_count = 0;
  std::int64_t noise_count = 0;
  std::int64_t analyzed_clusters = 0;
  std::int64_t skipped_small_clusters = 0;
  std::vector<ClusterReport> clusters;
  std::string assignment_csv;
  std::string clusters_svg;
  std::string pca_csv;
  std::string pca_svg;
};

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct TrainingSummary {
  int epochs = 0;
  double final_loss = 0.0;
  double final_accuracy = 0.0;
  double best_accuracy = 0.0;
  std::optional<double> validation_accuracy;
};

struct RunManifest {
  std::string version = kVersion;
  std::string status = "ok";  // or "failed"
  std::string error;
  std::string failed_stage;
  std::uint64_t seed = 0;
  KeyValueMap config_echo;
  std::map<std::string, std::string> stage_seeds;
  std::vector<StageTiming> timings;
  TrainingSummary training;
  std::vector<LayerReport> layers;
  std::string dataset_csv;
  std::string params_json;
  std::string history_csv;
  std::string raw_diagram_csv;
  std::string raw_diagram_svg;
  // FNV-1a over every deterministic output file, independent of timings.
  std::string content_hash;
};

// Runs the experiment end to end, writing every artifact under
// config.output_dir and the manifest last. Any stage failure writes a
// manifest with status "failed" and rethrows as StageError.
RunManifest run_experiment(const ExperimentConfig& config);

void write_manifest_json(const RunManifest& manifest, const std::filesystem::path& path);

// Runs `items` on a small worker pool. Thread count: TOPOPROBE_THREADS, with
// 0 or unset meaning auto. Rethrows the first exception after joining.
void run_parallel(const std::vector<std::function<void()>>& items);
int worker_thread_cap();

}  // namespace topo
