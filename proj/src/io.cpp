#include "akt/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "akt/errors.hpp"

#ifndef AKT_VERSION
#define AKT_VERSION "0.1.0"
#endif

namespace akt::io {

std::string version() { return AKT_VERSION; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json Provenance::to_json() const {
  return {{"version", version}, {"seed", seed}, {"config_hash", config_hash}};
}

std::string format_real(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const Provenance& prov,
                     std::span<const std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw InputError("cannot open " + path.string() + " for writing");
  out_ << "# version=" << prov.version << "\n# seed=" << prov.seed
        << "\n# config_hash=" << prov.config_hash << "\n";
  row(header);
}

void CsvWriter::row(std::span<const std::string> cells) {
  if (cells.size() != columns_) throw InputError("CsvWriter: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

namespace {

// Data lines of a provenance CSV, header row first.
std::vector<std::vector<std::string>> read_csv_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("malformed number '" + s + "'");
  }
  if (used != s.size()) throw InputError("malformed number '" + s + "'");
  return v;
}

}  // namespace

void write_points_csv(const std::filesystem::path& path, const PointSet& ps,
                      const Provenance& prov) {
  const std::vector<std::string> header = {"idx", "x", "y"};
  CsvWriter w(path, prov, header);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::vector<std::string> cells = {std::to_string(i), format_real(ps[i].x, kPointDigits),
                                            format_real(ps[i].y, kPointDigits)};
    w.row(cells);
  }
}

PointSet read_points_csv(const std::filesystem::path& path, Metric metric) {
  const auto rows = read_csv_lines(path);
  if (rows.empty() || rows[0] != std::vector<std::string>{"idx", "x", "y"})
    throw InputError(path.string() + ": expected header idx,x,y");
  std::vector<Point2> pts;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw InputError(path.string() + ": row with wrong column count");
    pts.push_back({parse_real(rows[r][1]), parse_real(rows[r][2])});
  }
  return PointSet(std::move(pts), metric);
}

nlohmann::json matching_to_json(const Matching& m) {
  nlohmann::json j;
  j["permutation"] = m.permutation;
  j["total_cost"] = m.total_cost;
  j["optimal"] = m.optimal;
  if (!m.duals_a.empty()) {
    j["duals_a"] = m.duals_a;
    j["duals_b"] = m.duals_b;
  }
  return j;
}

void write_records_csv(const std::filesystem::path& path,
                       std::span<const std::vector<dyadic::DyadicRecord>> chains,
                       const Provenance& prov) {
  const std::vector<std::string> header = {"rep", "k",  "w1", "w2",    "w3",
                                           "w4",  "w5", "w6", "merged"};
  CsvWriter w(path, prov, header);
  for (std::size_t rep = 0; rep < chains.size(); ++rep)
    for (const auto& r : chains[rep]) {
      std::vector<std::string> cells = {std::to_string(rep), std::to_string(r.level)};
      for (double v : r.w) cells.push_back(format_real(v, kCostDigits));
      cells.push_back(format_real(r.merged, kCostDigits));
      w.row(cells);
    }
}

std::vector<std::vector<dyadic::DyadicRecord>> read_records_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_lines(path);
  const std::vector<std::string> header = {"rep", "k",  "w1", "w2",    "w3",
                                           "w4",  "w5", "w6", "merged"};
  if (rows.empty() || rows[0] != header)
    throw InputError(path.string() + ": expected header rep,k,w1,...,w6,merged");
  std::map<long, std::vector<dyadic::DyadicRecord>> by_rep;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != header.size()) throw InputError(path.string() + ": row with wrong column count");
    dyadic::DyadicRecord r;
    const long rep = std::stol(c[0]);
    r.level = static_cast<std::size_t>(std::stoul(c[1]));
    for (int j = 0; j < 6; ++j) r.w[j] = parse_real(c[2 + j]);
    r.merged = parse_real(c[8]);
    by_rep[rep].push_back(r);
  }
  std::vector<std::vector<dyadic::DyadicRecord>> chains;
  std::size_t levels = 0;
  for (auto& [rep, chain] : by_rep) {
    for (std::size_t k = 0; k < chain.size(); ++k)
      if (chain[k].level != k) throw InputError(path.string() + ": replication levels not 0..K in order");
    if (chains.empty()) levels = chain.size();
    if (chain.size() != levels) throw InputError(path.string() + ": replications have different depths");
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace akt::io
