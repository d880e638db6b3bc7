#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "akt/assignment.hpp"
#include "akt/dyadic.hpp"
#include "akt/geometry.hpp"
#include "json.hpp"

namespace akt::io {

// Library version with the git description appended when available.
std::string version();

std::uint64_t fnv1a64(std::string_view bytes);

// Embedded in every output file.
struct Provenance {
  std::string version;
  std::uint64_t seed = 0;
  std::string config_hash;  // 16 hex digits

  nlohmann::json to_json() const;
};

// Shortest round-trip form is not needed; fixed significant digits keep
// files stable across platforms.
inline constexpr int kPointDigits = 17;
inline constexpr int kCostDigits = 12;
std::string format_real(double v, int significant_digits);

// CSV with provenance as leading '#' comment lines.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Provenance& prov,
            std::span<const std::string> header);

  void row(std::span<const std::string> cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

void write_points_csv(const std::filesystem::path& path, const PointSet& ps, const Provenance& prov);
PointSet read_points_csv(const std::filesystem::path& path, Metric metric);

nlohmann::json matching_to_json(const Matching& m);

// rep,k,w1..w6,merged
void write_records_csv(const std::filesystem::path& path,
                       std::span<const std::vector<dyadic::DyadicRecord>> chains,
                       const Provenance& prov);
// Inverse of write_records_csv; chains are returned in replication order
// and must each cover levels 0..K.
std::vector<std::vector<dyadic::DyadicRecord>> read_records_csv(const std::filesystem::path& path);

}  // namespace akt::io
