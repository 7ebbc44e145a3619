#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "topoprobe/point_cloud.hpp"

namespace topo {

// Shortest round-trip decimal rendering; infinities print as "inf"/"-inf".
std::string format_double(double v);
double parse_double(std::string_view text);

// Point-cloud CSV: header "x0,x1,...", optional trailing "label" column.
void write_point_cloud_csv(std::ostream& os, const PointCloud& cloud,
                           const std::vector<std::int32_t>* labels = nullptr);
void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud,
                           const std::vector<std::int32_t>* labels = nullptr);
PointCloud read_point_cloud_csv(std::istream& is,
                                std::vector<std::int32_t>* labels_out = nullptr);
PointCloud read_point_cloud_csv(const std::filesystem::path& path,
                                std::vector<std::int32_t>* labels_out = nullptr);

void write_labeled_csv(const std::filesystem::path& path, const LabeledDataset& dataset);
LabeledDataset read_labeled_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

// Splits a CSV line on commas; no quoting (none of our formats need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace topo
