// Copyright 2026 The OLA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ola/runtime_model.h"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ola/error.h"
#include "ola/io.h"
#include "ola/series.h"

namespace ola {
namespace {

std::string Trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

int ParseInt(const std::string& cell, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0') {
    throw Error(ErrorKind::kParse, what + ": '" + cell + "' is not an integer");
  }
  return static_cast<int>(v);
}

double ParseDouble(const std::string& cell, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    throw Error(ErrorKind::kParse, what + ": '" + cell + "' is not a number");
  }
  return v;
}

}  // namespace

// ------------------------------------------------------------ DegreeSpace

DegreeSpace::DegreeSpace(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "degree space is empty");
  }
  for (size_t i = 0; i < degrees_.size(); ++i) {
    if (degrees_[i] < 1 || degrees_[i] > kMaxDegree) {
      throw Error(ErrorKind::kInvalidArgument,
                  "degree " + std::to_string(degrees_[i]) + " outside [1, " +
                      std::to_string(kMaxDegree) + "]");
    }
    if (i > 0 && degrees_[i] <= degrees_[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument, "degree space must be strictly increasing");
    }
  }
}

DegreeSpace DegreeSpace::Default() {
  return DegreeSpace({3, 7, 15, 31, 63, 88, 127, 154, 210, 255});
}

DegreeSpace DegreeSpace::Parse(std::string_view text) {
  std::vector<int> degrees;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) degrees.push_back(ParseInt(item, "degree list"));
  }
  return DegreeSpace(std::move(degrees));
}

bool DegreeSpace::Contains(int degree) const {
  return std::binary_search(degrees_.begin(), degrees_.end(), degree);
}

// --------------------------------------------------------- RuntimeProfile

RuntimeProfile::RuntimeProfile(std::vector<std::map<int, double>> per_layer,
                               const DegreeSpace& space, bool synthetic,
                               std::vector<std::string> comments)
    : per_layer_(std::move(per_layer)),
      synthetic_(synthetic),
      comments_(std::move(comments)) {
  if (per_layer_.empty()) throw Error(ErrorKind::kValidation, "runtime profile has no layers");
  for (size_t i = 0; i < per_layer_.size(); ++i) {
    const std::string where = "runtime profile layer " + std::to_string(i + 1);
    double prev = 0.0;
    for (int d : space.degrees()) {
      auto it = per_layer_[i].find(d);
      if (it == per_layer_[i].end()) {
        throw Error(ErrorKind::kValidation, where + ": missing degree " + std::to_string(d));
      }
      const double t = it->second;
      if (!std::isfinite(t) || !(t > 0.0)) {
        throw Error(ErrorKind::kValidation,
                    where + ": latency at degree " + std::to_string(d) + " is not positive");
      }
      if (t < prev) {
        throw Error(ErrorKind::kValidation,
                    where + ": latency decreases at degree " + std::to_string(d));
      }
      prev = t;
    }
    // Keep only the degrees of the space, so the table and the space agree.
    std::map<int, double> kept;
    for (int d : space.degrees()) kept[d] = per_layer_[i][d];
    per_layer_[i] = std::move(kept);
  }
}

RuntimeProfile RuntimeProfile::FromCsv(const std::string& text, const DegreeSpace& space) {
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  bool synthetic = false;
  std::vector<std::string> comments;
  std::map<int, std::map<int, double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string comment = Trim(line.substr(1));
      if (comment.find("synthetic") != std::string::npos) synthetic = true;
      comments.push_back(std::move(comment));
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(Trim(cell));
    if (!header_seen) {
      if (cells != std::vector<std::string>{"layer", "degree", "seconds"}) {
        throw Error(ErrorKind::kParse, "profile CSV header must be 'layer,degree,seconds'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = "profile line " + std::to_string(line_no);
    if (cells.size() != 3) throw Error(ErrorKind::kParse, where + ": expected 3 columns");
    const int layer = ParseInt(cells[0], where);
    const int degree = ParseInt(cells[1], where);
    const double seconds = ParseDouble(cells[2], where);
    if (layer < 1) throw Error(ErrorKind::kParse, where + ": layers are numbered from 1");
    if (!rows[layer].emplace(degree, seconds).second) {
      throw Error(ErrorKind::kParse, where + ": duplicate (layer, degree) row");
    }
  }
  if (!header_seen) throw Error(ErrorKind::kParse, "profile CSV is empty");
  std::vector<std::map<int, double>> per_layer;
  int expected = 1;
  for (auto& [layer, degrees] : rows) {
    if (layer != expected) {
      throw Error(ErrorKind::kValidation,
                  "profile layers must be numbered 1..N; layer " + std::to_string(expected) +
                      " is missing");
    }
    per_layer.push_back(std::move(degrees));
    ++expected;
  }
  return RuntimeProfile(std::move(per_layer), space, synthetic, std::move(comments));
}

RuntimeProfile RuntimeProfile::Load(const std::string& path, const DegreeSpace& space) {
  return FromCsv(ReadFile(path), space);
}

std::string RuntimeProfile::ToCsv() const {
  std::string out;
  for (const std::string& c : comments_) out += "# " + c + "\n";
  out += "layer,degree,seconds\n";
  for (size_t i = 0; i < per_layer_.size(); ++i) {
    for (const auto& [d, t] : per_layer_[i]) {
      out += std::to_string(i + 1) + "," + std::to_string(d) + "," + FormatExact(t) + "\n";
    }
  }
  return out;
}

double RuntimeProfile::Seconds(size_t index, int degree) const {
  auto it = per_layer_.at(index).find(degree);
  if (it == per_layer_[index].end()) {
    throw Error(ErrorKind::kLookup, "profile has no entry for degree " + std::to_string(degree));
  }
  return it->second;
}

int PolynomialDepth(int degree) {
  int depth = 0;
  while ((1 << depth) < degree + 1) ++depth;
  return depth;
}

RuntimeProfile SyntheticProfile(int num_layers, const DegreeSpace& space,
                                const SyntheticProfileParams& params) {
  if (num_layers < 1) throw Error(ErrorKind::kInvalidArgument, "profile needs at least one layer");
  std::vector<std::map<int, double>> per_layer(num_layers);
  for (int i = 0; i < num_layers; ++i) {
    for (int d : space.degrees()) {
      double t = params.eval_seconds * std::sqrt(static_cast<double>(d));
      if (i > 0) {
        const int depth = PolynomialDepth(d);
        if (depth < 1 || depth > static_cast<int>(params.bootstrap_seconds.size())) {
          throw Error(ErrorKind::kInvalidArgument, "no bootstrap cost for depth " + std::to_string(depth));
        }
        t += params.bootstrap_seconds[depth - 1];
      }
      per_layer[i][d] = t;
    }
  }
  std::vector<std::string> comments;
  comments.push_back("synthetic profile, not a measurement");
  comments.push_back("T_1(d) = eval * sqrt(d); T_i(d) = boot(ceil(log2(d+1))) + eval * sqrt(d) for i >= 2");
  comments.push_back("eval = " + FormatExact(params.eval_seconds) + " s");
  std::string boot = "boot(depth 1..8) = ";
  for (size_t k = 0; k < params.bootstrap_seconds.size(); ++k) {
    if (k > 0) boot += ", ";
    boot += FormatExact(params.bootstrap_seconds[k]);
  }
  comments.push_back(boot + " s");
  return RuntimeProfile(std::move(per_layer), space, true, std::move(comments));
}

// ------------------------------------------------------ DiscreteCostTable

int DiscreteCostTable::Cost(size_t index, int degree) const {
  if (index >= per_layer_.size()) {
    throw Error(ErrorKind::kLookup, "cost table has no layer " + std::to_string(index + 1));
  }
  auto it = per_layer_[index].find(degree);
  if (it == per_layer_[index].end()) {
    throw Error(ErrorKind::kLookup, "layer " + std::to_string(index + 1) +
                                        " has no cost for degree " + std::to_string(degree));
  }
  return it->second;
}

std::string DiscreteCostTable::ToJson() const {
  nlohmann::ordered_json j;
  j["nu"] = nu_;
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const auto& costs : per_layer_) {
    nlohmann::ordered_json jl;
    for (const auto& [d, c] : costs) jl[std::to_string(d)] = c;
    layers.push_back(std::move(jl));
  }
  j["per_layer"] = std::move(layers);
  return j.dump(2);
}

DiscreteCostTable Discretize(const RuntimeProfile& profile, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorKind::kInvalidArgument, "discretization unit nu must be positive");
  }
  DiscreteCostTable table;
  table.nu_ = nu;
  const int saved_mode = std::fegetround();
  std::fesetround(FE_TONEAREST);
  for (size_t i = 0; i < profile.num_layers(); ++i) {
    std::map<int, int> costs;
    costs[kSentinelDegree] = 0;
    for (const auto& [d, t] : profile.layer(i)) {
      // nearbyint under FE_TONEAREST rounds halves to even.
      costs[d] = static_cast<int>(std::nearbyint(t / nu));
    }
    table.per_layer_.push_back(std::move(costs));
  }
  std::fesetround(saved_mode);
  return table;
}

DiscreteCostTable MakeCostTable(std::vector<std::map<int, int>> per_layer) {
  DiscreteCostTable table;
  for (auto& costs : per_layer) {
    int prev = 0;
    for (const auto& [d, c] : costs) {
      if (d == kSentinelDegree) continue;
      if (c < 0 || c < prev) {
        throw Error(ErrorKind::kValidation, "costs must be non-negative and non-decreasing");
      }
      prev = c;
    }
    costs[kSentinelDegree] = 0;
  }
  table.per_layer_ = std::move(per_layer);
  return table;
}

int TotalCost(const DiscreteCostTable& table, std::span<const int> degrees) {
  if (degrees.size() != table.num_layers()) {
    throw Error(ErrorKind::kInvalidArgument, "degree vector length does not match the cost table");
  }
  int total = 0;
  for (size_t i = 0; i < degrees.size(); ++i) total += table.Cost(i, degrees[i]);
  return total;
}

}  // namespace ola
