#include "topoprobe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "topoprobe/analysis.hpp"
#include "topoprobe/geometry.hpp"
#include "topoprobe/io.hpp"
#include "topoprobe/oracle.hpp"
#include "topoprobe/persistence.hpp"
#include "topoprobe/rng.hpp"
#include "topoprobe/svg.hpp"

namespace topo {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::int64_t to_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::int64_t out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' needs an integer, got '" + v + "'");
  }
}

double to_double(const std::string& v, const std::string& key) {
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' needs a number, got '" + v + "'");
  }
}

std::vector<int> to_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<int>(to_int(item, key)));
  if (out.empty()) throw ConfigError("config key '" + key + "' needs at least one value");
  return out;
}

}  // namespace

ExperimentConfig experiment_config_from_map(const KeyValueMap& map) {
  ExperimentConfig c;
  for (const auto& [key, value] : map) {
    if (key == "seed") c.master_seed = static_cast<std::uint64_t>(to_int(value, key));
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "torus.major_radius") c.torus_major_radius = to_double(value, key);
    else if (key == "torus.tube_scale") c.torus_tube_scale = to_double(value, key);
    else if (key == "torus.points") c.torus_points = to_int(value, key);
    else if (key == "noise.points") c.noise_points = to_int(value, key);
    else if (key == "noise.margin") c.noise_margin = to_double(value, key);
    else if (key == "mlp.hidden_activation") c.hidden_activation = activation_from_name(value);
    else if (key == "mlp.hidden_units") c.hidden_units = to_int_list(value, key);
    else if (key == "mlp.epochs") c.epochs = static_cast<int>(to_int(value, key));
    else if (key == "mlp.batch_size") c.batch_size = static_cast<int>(to_int(value, key));
    else if (key == "mlp.learning_rate") c.learning_rate = to_double(value, key);
    else if (key == "mlp.validation_fraction") c.validation_fraction = to_double(value, key);
    else if (key == "filtration.max_dim") c.max_dim = static_cast<int>(to_int(value, key));
    else if (key == "filtration.threshold") {
      if (value == "enclosing") c.threshold.reset();
      else c.threshold = to_double(value, key);
    } else if (key == "filtration.landmarks") c.landmarks = to_int(value, key);
    else if (key == "filtration.simplex_cap") c.simplex_cap = to_int(value, key);
    else if (key == "cluster.eps") {
      if (value == "auto") c.clustering.eps.reset();
      else c.clustering.eps = to_double(value, key);
    } else if (key == "cluster.eps_knn") c.clustering.eps_knn = static_cast<int>(to_int(value, key));
    else if (key == "cluster.eps_percentile") c.clustering.eps_percentile = to_double(value, key);
    else if (key == "cluster.min_pts") c.clustering.min_pts = static_cast<int>(to_int(value, key));
    else if (key == "cluster.min_cluster_size") c.clustering.min_cluster_size = to_int(value, key);
    else if (key == "pca.components") c.pca_components = static_cast<int>(to_int(value, key));
    else if (key == "analysis.layers") c.analysis_layers = static_cast<int>(to_int(value, key));
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config_from_map(load_config_file(path));
}

KeyValueMap experiment_config_to_map(const ExperimentConfig& c) {
  KeyValueMap m;
  m["seed"] = std::to_string(c.master_seed);
  m["output_dir"] = c.output_dir.string();
  m["torus.major_radius"] = format_double(c.torus_major_radius);
  m["torus.tube_scale"] = format_double(c.torus_tube_scale);
  m["torus.points"] = std::to_string(c.torus_points);
  m["noise.points"] = std::to_string(c.noise_points);
  m["noise.margin"] = format_double(c.noise_margin);
  m["mlp.hidden_activation"] = activation_name(c.hidden_activation);
  std::string units;
  for (int u : c.hidden_units) {
    if (!units.empty()) units += ',';
    units += std::to_string(u);
  }
  m["mlp.hidden_units"] = units;
  m["mlp.epochs"] = std::to_string(c.epochs);
  m["mlp.batch_size"] = std::to_string(c.batch_size);
  m["mlp.learning_rate"] = format_double(c.learning_rate);
  m["mlp.validation_fraction"] = format_double(c.validation_fraction);
  m["filtration.max_dim"] = std::to_string(c.max_dim);
  m["filtration.threshold"] = c.threshold ? format_double(*c.threshold) : "enclosing";
  m["filtration.landmarks"] = std::to_string(c.landmarks);
  m["filtration.simplex_cap"] = std::to_string(c.simplex_cap);
  m["cluster.eps"] = c.clustering.eps ? format_double(*c.clustering.eps) : "auto";
  m["cluster.eps_knn"] = std::to_string(c.clustering.eps_knn);
  m["cluster.eps_percentile"] = format_double(c.clustering.eps_percentile);
  m["cluster.min_pts"] = std::to_string(c.clustering.min_pts);
  m["cluster.min_cluster_size"] = std::to_string(c.clustering.min_cluster_size);
  m["pca.components"] = std::to_string(c.pca_components);
  m["analysis.layers"] = std::to_string(c.analysis_layers);
  return m;
}

std::vector<LayerSpec> architecture_of(const ExperimentConfig& config) {
  if (config.hidden_units.empty())
    throw ConfigError("at least one hidden layer is required");
  std::vector<LayerSpec> arch;
  int in = 4;
  for (int width : config.hidden_units) {
    arch.push_back({in, width, config.hidden_activation});
    in = width;
  }
  arch.push_back({in, 1, Activation::kSigmoid});
  return arch;
}

int worker_thread_cap() {
  const char* env = std::getenv("TOPOPROBE_THREADS");
  int cap = 0;
  if (env && *env) {
    try {
      cap = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("TOPOPROBE_THREADS must be an integer");
    }
    if (cap < 0) throw ConfigError("TOPOPROBE_THREADS must be >= 0");
  }
  if (cap == 0) cap = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, cap);
}

void run_parallel(const std::vector<std::function<void()>>& items) {
  if (items.empty()) return;
  const int threads = std::min<int>(worker_thread_cap(),
                                    static_cast<int>(items.size()));
  if (threads <= 1) {
    for (const auto& item : items) item();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        items[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_files(const fs::path& root, const std::vector<std::string>& rel_paths) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const std::string& rel : rel_paths) {
    h = fnv1a(h, rel.data(), rel.size());
    const std::string contents = read_text_file(root / rel);
    h = fnv1a(h, contents.data(), contents.size());
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct StageClock {
  std::vector<StageTiming>& timings;
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~StageClock() {
    timings.push_back(
        {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                   .count()});
  }
};

PersistenceDiagram cluster_diagram(const PointCloud& cloud, std::int64_t landmarks,
                                   std::uint64_t seed, const ExperimentConfig& config) {
  const std::int64_t k = std::min<std::int64_t>(landmarks, cloud.size());
  const LandmarkResult lm = landmark_subsample(cloud, k, seed);
  const DistanceMatrix dm = build_distance_matrix(lm.cloud);
  const double threshold = config.threshold ? *config.threshold : enclosing_radius(dm);
  return compute_persistence(dm, config.max_dim, threshold, config.simplex_cap);
}

void write_diagram_files(const PersistenceDiagram& diagram, const fs::path& csv,
                         const fs::path& svg) {
  std::ofstream csv_out(csv);
  if (!csv_out) throw IoError("cannot open for writing: " + csv.string());
  write_diagram_csv(diagram, csv_out);
  std::ofstream svg_out(svg);
  if (!svg_out) throw IoError("cannot open for writing: " + svg.string());
  write_diagram_svg(diagram, svg_out);
}

// Cluster scatter in data space: first two coordinates as axes, the two
// largest clusters highlighted, the rest gray.
void write_clusters_svg(const std::vector<ClusterCloud>& clusters, const fs::path& path) {
  std::vector<std::size_t> order(clusters.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (clusters[a].cloud.size() != clusters[b].cloud.size())
      return clusters[a].cloud.size() > clusters[b].cloud.size();
    return clusters[a].cluster < clusters[b].cluster;
  });

  static const char* kHighlight[] = {"#1f77b4", "#d62728"};
  std::vector<SvgSeries> series;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const ClusterCloud& cc = clusters[order[rank]];
    SvgSeries s;
    s.name = "cluster " + std::to_string(cc.cluster) + " (n=" +
             std::to_string(cc.cloud.size()) + ")";
    s.marker = 0;
    s.color = rank < 2 ? kHighlight[rank] : "#bbbbbb";
    for (std::int64_t r = 0; r < cc.cloud.size(); ++r) {
      s.x.push_back(cc.cloud.points(r, 0));
      s.y.push_back(cc.cloud.points(r, std::min<std::int64_t>(1, cc.cloud.dim() - 1)));
    }
    series.push_back(std::move(s));
  }
  SvgOptions opts;
  opts.x_label = "x0";
  opts.y_label = "x1";
  opts.title = "clusters (data space)";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_scatter_svg(out, series, opts);
}

// PCA scatter: first two components as axes, third (when present) as size.
void write_pca_svg(const PointCloud& proj, const fs::path& path) {
  SvgSeries s;
  s.name = "";
  s.marker = 0;
  double lo3 = 0.0, hi3 = 0.0;
  if (proj.dim() >= 3 && proj.size() > 0) {
    lo3 = proj.points.col(2).minCoeff();
    hi3 = proj.points.col(2).maxCoeff();
  }
  for (std::int64_t r = 0; r < proj.size(); ++r) {
    s.x.push_back(proj.points(r, 0));
    s.y.push_back(proj.dim() >= 2 ? proj.points(r, 1) : 0.0);
    if (proj.dim() >= 3) {
      const double t = hi3 > lo3 ? (proj.points(r, 2) - lo3) / (hi3 - lo3) : 0.5;
      s.size.push_back(1.5 + 3.0 * t);
    }
  }
  SvgOptions opts;
  opts.x_label = "pc1";
  opts.y_label = "pc2";
  opts.title = "PCA projection";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_scatter_svg(out, {s}, opts);
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
  RunManifest manifest;
  manifest.seed = config.master_seed;
  manifest.config_echo = experiment_config_to_map(config);

  const fs::path root = config.output_dir;
  std::string current_stage = "setup";
  try {
    fs::create_directories(root / "data");
    fs::create_directories(root / "model");
    fs::create_directories(root / "layers");
    fs::create_directories(root / "diagrams");
    fs::create_directories(root / "projections");

    // ---- generate ----------------------------------------------------
    current_stage = "generate";
    PointCloud torus, noise;
    LabeledDataset dataset;
    {
      StageClock clock{manifest.timings, current_stage};
      TwistedTorusParams tp;
      tp.major_radius = config.torus_major_radius;
      tp.tube_scale = config.torus_tube_scale;
      tp.n_points = config.torus_points;
      tp.sampling = SamplingMode::kUniformRandom;
      tp.seed = derive_seed(config.master_seed, "torus");
      manifest.stage_seeds["torus"] = std::to_string(tp.seed);
      torus = sample_twisted_torus(tp);

      NoiseParams np;
      np.n_points = config.noise_points;
      np.bounds = bounding_box(torus, config.noise_margin);
      np.seed = derive_seed(config.master_seed, "noise");
      manifest.stage_seeds["noise"] = std::to_string(np.seed);
      noise = sample_uniform_noise(np);

      const std::uint64_t assemble_seed = derive_seed(config.master_seed, "assemble");
      manifest.stage_seeds["assemble"] = std::to_string(assemble_seed);
      dataset = assemble_dataset(torus, noise, assemble_seed);

      write_point_cloud_csv(root / "data" / "torus.csv", torus);
      write_point_cloud_csv(root / "data" / "noise.csv", noise);
      write_labeled_csv(root / "data" / "dataset.csv", dataset);
      manifest.dataset_csv = "data/dataset.csv";
    }

    // ---- train --------------------------------------------------------
    current_stage = "train";
    TrainResult trained;
    {
      StageClock clock{manifest.timings, current_stage};
      TrainConfig tc;
      tc.epochs = config.epochs;
      tc.batch_size = config.batch_size;
      tc.lr = config.learning_rate;
      tc.validation_fraction = config.validation_fraction;
      tc.seed = derive_seed(config.master_seed, "train");
      manifest.stage_seeds["train"] = std::to_string(tc.seed);
      trained = train(dataset, architecture_of(config), tc);

      save_network_json(trained.params, root / "model" / "params.json");
      std::ofstream hist(root / "model" / "history.csv");
      if (!hist) throw IoError("cannot open model/history.csv");
      write_history_csv(trained.history, hist);
      manifest.params_json = "model/params.json";
      manifest.history_csv = "model/history.csv";

      manifest.training.epochs = static_cast<int>(trained.history.size());
      if (!trained.history.empty()) {
        manifest.training.final_loss = trained.history.back().loss;
        manifest.training.final_accuracy = trained.history.back().accuracy;
        for (const EpochStats& s : trained.history)
          manifest.training.best_accuracy =
              std::max(manifest.training.best_accuracy, s.accuracy);
      }
      manifest.training.validation_accuracy = trained.validation_accuracy;
    }

    // ---- extract ------------------------------------------------------
    current_stage = "extract";
    PointCloud manifold;
    std::vector<LayerRepresentation> reps;
    int n_layers = 0;
    {
      StageClock clock{manifest.timings, current_stage};
      std::int64_t n_manifold = 0;
      for (std::int32_t label : dataset.labels) n_manifold += label == 1;
      manifold.points.resize(n_manifold, dataset.cloud.dim());
      std::int64_t w = 0;
      for (std::int64_t r = 0; r < dataset.cloud.size(); ++r)
        if (dataset.labels[static_cast<std::size_t>(r)] == 1)
          manifold.points.row(w++) = dataset.cloud.points.row(r);

      reps = extract_representations(trained.params, manifold);
      n_layers = std::min<int>(config.analysis_layers,
                               static_cast<int>(config.hidden_units.size()));
      for (int layer = 1; layer <= n_layers; ++layer) {
        const fs::path dir = root / "layers" / std::to_string(layer);
        fs::create_directories(dir);
        write_point_cloud_csv(dir / "representation.csv",
                              PointCloud{reps[static_cast<std::size_t>(layer - 1)].values});
      }
    }

    // ---- analyze ------------------------------------------------------
    current_stage = "analyze";
    {
      StageClock clock{manifest.timings, current_stage};
      manifest.layers.resize(static_cast<std::size_t>(n_layers));
      std::vector<std::function<void()>> tasks;

      for (int layer = 1; layer <= n_layers; ++layer) {
        LayerReport& report = manifest.layers[static_cast<std::size_t>(layer - 1)];
        report.layer = layer;
        const PointCloud rep{reps[static_cast<std::size_t>(layer - 1)].values};
        const fs::path layer_dir = root / "layers" / std::to_string(layer);

        const double eps = config.clustering.eps
                               ? *config.clustering.eps
                               : suggest_dbscan_eps(rep, config.clustering.eps_knn,
                                                    config.clustering.eps_percentile);
        report.eps = eps;
        const ClusterAssignment assignment =
            dbscan(rep, {eps, config.clustering.min_pts});
        {
          std::ofstream out(layer_dir / "assignment.csv");
          if (!out) throw IoError("cannot open assignment.csv");
          write_assignment_csv(assignment, out);
        }
        report.assignment_csv = "layers/" + std::to_string(layer) + "/assignment.csv";
        report.cluster_count = assignment.k;
        for (std::int32_t label : assignment.labels) report.noise_count += label < 0;

        const auto clusters = project_clusters_to_data(assignment, manifold);
        write_clusters_svg(clusters, layer_dir / "clusters.svg");
        report.clusters_svg = "layers/" + std::to_string(layer) + "/clusters.svg";

        report.clusters.resize(clusters.size());
        for (const ClusterCloud& cc : clusters) {
          const std::string rel_dir =
              "layers/" + std::to_string(layer) + "/clusters/" + std::to_string(cc.cluster);
          fs::create_directories(root / rel_dir);
          write_point_cloud_csv(root / rel_dir / "points.csv", cc.cloud);

          ClusterReport& cr = report.clusters[static_cast<std::size_t>(cc.cluster)];
          cr.cluster = cc.cluster;
          cr.size = cc.cloud.size();
          cr.points_csv = rel_dir + "/points.csv";
          cr.analyzed = cc.cloud.size() >= config.clustering.min_cluster_size;
          if (!cr.analyzed) {
            ++report.skipped_small_clusters;
            continue;
          }
          ++report.analyzed_clusters;

          const std::string label =
              "landmarks/layer" + std::to_string(layer) + "/cluster" + std::to_string(cc.cluster);
          cr.landmark_seed = derive_seed(config.master_seed, label);
          const std::string diagram_rel =
              "diagrams/layer" + std::to_string(layer) + "_cluster" + std::to_string(cc.cluster);
          cr.diagram_csv = diagram_rel + ".csv";
          cr.diagram_svg = diagram_rel + ".svg";

          // Per-cluster persistence runs as an independent work item.
          const PointCloud cluster_cloud = cc.cloud;
          const std::uint64_t seed = cr.landmark_seed;
          const std::string csv_rel = cr.diagram_csv, svg_rel = cr.diagram_svg;
          tasks.push_back([cluster_cloud, seed, csv_rel, svg_rel, &config, root] {
            const PersistenceDiagram diagram =
                cluster_diagram(cluster_cloud, config.landmarks, seed, config);
            write_diagram_files(diagram, root / csv_rel, root / svg_rel);
          });
        }

        // PCA of the layer representation (manifold rows only by construction).
        const int q = std::min<int>(config.pca_components, static_cast<int>(rep.dim()));
        const std::string pca_rel = "projections/layer" + std::to_string(layer) + "_pca";
        report.pca_csv = pca_rel + ".csv";
        report.pca_svg = pca_rel + ".svg";
        tasks.push_back([rep, q, pca_rel, root] {
          const PcaModel model = pca_fit(rep, q);
          const PointCloud proj = pca_project(model, rep);
          write_point_cloud_csv(root / (pca_rel + ".csv"), proj);
          write_pca_svg(proj, root / (pca_rel + ".svg"));
        });
      }

      run_parallel(tasks);
    }

    // ---- raw-data persistence ------------------------------------------
    current_stage = "raw-persistence";
    {
      StageClock clock{manifest.timings, current_stage};
      const std::uint64_t seed = derive_seed(config.master_seed, "landmarks/raw");
      manifest.stage_seeds["landmarks/raw"] = std::to_string(seed);
      const PersistenceDiagram diagram =
          cluster_diagram(torus, config.landmarks, seed, config);
      write_diagram_files(diagram, root / "diagrams" / "raw_data.csv",
                          root / "diagrams" / "raw_data.svg");
      manifest.raw_diagram_csv = "diagrams/raw_data.csv";
      manifest.raw_diagram_svg = "diagrams/raw_data.svg";
    }

    // ---- manifest -------------------------------------------------------
    current_stage = "manifest";
    {
      StageClock clock{manifest.timings, current_stage};
      std::vector<std::string> deterministic;
      deterministic.push_back(manifest.dataset_csv);
      deterministic.push_back(manifest.history_csv);
      deterministic.push_back(manifest.params_json);
      for (const LayerReport& lr : manifest.layers) {
        deterministic.push_back(lr.assignment_csv);
        deterministic.push_back(lr.pca_csv);
        for (const ClusterReport& cr : lr.clusters) {
          deterministic.push_back(cr.points_csv);
          if (cr.analyzed) deterministic.push_back(cr.diagram_csv);
        }
      }
      deterministic.push_back(manifest.raw_diagram_csv);
      manifest.content_hash = hash_files(root, deterministic);
    }
    write_manifest_json(manifest, root / "manifest.json");
  } catch (const std::exception& e) {
    manifest.status = "failed";
    manifest.failed_stage = current_stage;
    manifest.error = e.what();
    try {
      write_manifest_json(manifest, root / "manifest.json");
    } catch (...) {
      // nothing else to do; the original error wins
    }
    throw StageError(current_stage, e.what());
  }
  return manifest;
}

void write_manifest_json(const RunManifest& manifest, const std::filesystem::path& path) {
  // Every referenced output must exist before the manifest does.
  const fs::path root = path.parent_path();
  auto check = [&](const std::string& rel) {
    if (!rel.empty() && !fs::exists(root / rel))
      throw IoError("manifest references a missing file: " + rel);
  };
  if (manifest.status == "ok") {
    check(manifest.dataset_csv);
    check(manifest.params_json);
    check(manifest.history_csv);
    check(manifest.raw_diagram_csv);
    check(manifest.raw_diagram_svg);
    for (const LayerReport& lr : manifest.layers) {
      check(lr.assignment_csv);
      check(lr.clusters_svg);
      check(lr.pca_csv);
      check(lr.pca_svg);
      for (const ClusterReport& cr : lr.clusters) {
        check(cr.points_csv);
        check(cr.diagram_csv);
        check(cr.diagram_svg);
      }
    }
  }

  json doc;
  doc["version"] = manifest.version;
  doc["status"] = manifest.status;
  if (!manifest.error.empty()) {
    doc["error"] = manifest.error;
    doc["failed_stage"] = manifest.failed_stage;
  }
  doc["seed"] = manifest.seed;
  doc["config"] = manifest.config_echo;
  doc["stage_seeds"] = manifest.stage_seeds;
  doc["timings"] = json::array();
  for (const StageTiming& t : manifest.timings)
    doc["timings"].push_back({{"stage", t.name}, {"seconds", t.seconds}});
  doc["training"] = {
      {"epochs", manifest.training.epochs},
      {"final_loss", manifest.training.final_loss},
      {"final_accuracy", manifest.training.final_accuracy},
      {"best_accuracy", manifest.training.best_accuracy},
  };
  if (manifest.training.validation_accuracy)
    doc["training"]["validation_accuracy"] = *manifest.training.validation_accuracy;
  doc["layers"] = json::array();
  for (const LayerReport& lr : manifest.layers) {
    json jl;
    jl["layer"] = lr.layer;
    jl["eps"] = lr.eps;
    jl["cluster_count"] = lr.cluster_count;
    jl["noise_count"] = lr.noise_count;
    jl["analyzed_clusters"] = lr.analyzed_clusters;
    jl["skipped_small_clusters"] = lr.skipped_small_clusters;
    jl["assignment_csv"] = lr.assignment_csv;
    jl["clusters_svg"] = lr.clusters_svg;
    jl["pca_csv"] = lr.pca_csv;
    jl["pca_svg"] = lr.pca_svg;
    jl["clusters"] = json::array();
    for (const ClusterReport& cr : lr.clusters) {
      json jc;
      jc["cluster"] = cr.cluster;
      jc["size"] = cr.size;
      jc["analyzed"] = cr.analyzed;
      if (cr.analyzed) {
        jc["landmark_seed"] = std::to_string(cr.landmark_seed);
        jc["diagram_csv"] = cr.diagram_csv;
        jc["diagram_svg"] = cr.diagram_svg;
      }
      jc["points_csv"] = cr.points_csv;
      jl["clusters"].push_back(std::move(jc));
    }
    doc["layers"].push_back(std::move(jl));
  }
  doc["dataset_csv"] = manifest.dataset_csv;
  doc["params_json"] = manifest.params_json;
  doc["history_csv"] = manifest.history_csv;
  doc["raw_diagram_csv"] = manifest.raw_diagram_csv;
  doc["raw_diagram_svg"] = manifest.raw_diagram_svg;
  doc["content_hash"] = manifest.content_hash;

  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace topo
