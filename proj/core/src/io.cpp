#include "topoprobe/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

namespace topo {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw IoError("malformed number: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void write_point_cloud_csv(std::ostream& os, const PointCloud& cloud,
                           const std::vector<std::int32_t>* labels) {
  if (labels && static_cast<std::int64_t>(labels->size()) != cloud.size())
    throw ShapeError("label count does not match point count");
  for (std::int64_t c = 0; c < cloud.dim(); ++c) {
    if (c) os << ',';
    os << 'x' << c;
  }
  if (labels) os << ",label";
  os << '\n';
  for (std::int64_t r = 0; r < cloud.size(); ++r) {
    for (std::int64_t c = 0; c < cloud.dim(); ++c) {
      if (c) os << ',';
      os << format_double(cloud.points(r, c));
    }
    if (labels) os << ',' << (*labels)[static_cast<std::size_t>(r)];
    os << '\n';
  }
}

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud,
                           const std::vector<std::int32_t>* labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_point_cloud_csv(out, cloud, labels);
  if (!out) throw IoError("write failed: " + path.string());
}

PointCloud read_point_cloud_csv(std::istream& is, std::vector<std::int32_t>* labels_out) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty point-cloud CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  bool has_label = !header.empty() && header.back() == "label";
  const std::int64_t d = static_cast<std::int64_t>(header.size()) - (has_label ? 1 : 0);
  if (d < 1) throw IoError("point-cloud CSV needs at least one coordinate column");
  for (std::int64_t c = 0; c < d; ++c) {
    if (header[static_cast<std::size_t>(c)] != "x" + std::to_string(c))
      throw IoError("unexpected point-cloud CSV header column: " +
                    header[static_cast<std::size_t>(c)]);
  }

  std::vector<double> values;
  std::vector<std::int32_t> labels;
  std::int64_t rows = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<std::int64_t>(fields.size()) != d + (has_label ? 1 : 0))
      throw IoError("row " + std::to_string(rows + 1) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(d + (has_label ? 1 : 0)));
    for (std::int64_t c = 0; c < d; ++c)
      values.push_back(parse_double(fields[static_cast<std::size_t>(c)]));
    if (has_label)
      labels.push_back(static_cast<std::int32_t>(parse_double(fields.back())));
    ++rows;
  }

  PointCloud cloud{Eigen::MatrixXd(rows, d)};
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t c = 0; c < d; ++c)
      cloud.points(r, c) = values[static_cast<std::size_t>(r * d + c)];
  if (labels_out) {
    if (!has_label) labels_out->clear();
    else *labels_out = std::move(labels);
  }
  return cloud;
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path,
                                std::vector<std::int32_t>* labels_out) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return read_point_cloud_csv(in, labels_out);
}

void write_labeled_csv(const std::filesystem::path& path, const LabeledDataset& dataset) {
  write_point_cloud_csv(path, dataset.cloud, &dataset.labels);
}

LabeledDataset read_labeled_csv(const std::filesystem::path& path) {
  LabeledDataset dataset;
  dataset.cloud = read_point_cloud_csv(path, &dataset.labels);
  if (static_cast<std::int64_t>(dataset.labels.size()) != dataset.cloud.size())
    throw IoError("labeled CSV is missing the label column: " + path.string());
  return dataset;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace topo
