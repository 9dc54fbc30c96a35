//
// Copyright 2026 The dprelu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dprelu/preprocess.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "dprelu/numeric.h"
#include "dprelu/rng.h"

namespace dprelu {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool ParseNumber(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() &&
         std::isfinite(out);
}

bool AllDigits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Dataset LoadCsv(const std::string& path, const std::string& target) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("LoadCsv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("LoadCsv: " + path + " has no header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  const std::vector<std::string_view> header_views = SplitCommas(line);
  const std::vector<std::string> header(header_views.begin(),
                                        header_views.end());

  std::size_t target_col = header.size();
  const std::string_view wanted = Trim(target);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == wanted) {
      target_col = c;
      break;
    }
  }
  if (target_col == header.size() && AllDigits(wanted)) {
    const std::size_t idx = std::stoul(std::string(wanted));
    if (idx < header.size()) target_col = idx;
  }
  if (target_col == header.size()) {
    throw std::runtime_error("LoadCsv: target column '" + target +
                             "' not found in " + path);
  }
  if (header.size() < 2) {
    throw std::runtime_error("LoadCsv: need at least one feature column");
  }

  Dataset data(header.size() - 1);
  std::vector<double> x(header.size() - 1);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const std::vector<std::string_view> cells = SplitCommas(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "LoadCsv: row " << row << " has " << cells.size()
          << " cells, header has " << header.size();
      throw std::runtime_error(msg.str());
    }
    double y = 0.0;
    std::size_t k = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!ParseNumber(cells[c], v)) {
        std::ostringstream msg;
        msg << "LoadCsv: non-numeric cell '" << cells[c] << "' at row " << row
            << ", column '" << header[c] << "'";
        throw std::runtime_error(msg.str());
      }
      if (c == target_col) {
        y = v;
      } else {
        x[k++] = v;
      }
    }
    data.Add(x, y);
  }
  return data;
}

TrainTestSplit Split(const Dataset& data, double test_fraction,
                     std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("Split: test_fraction must lie in (0, 1)");
  }
  const std::size_t n = data.size();
  const auto n_train = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n) * (1.0 - test_fraction) - 1e-9));
  if (n_train == 0 || n_train >= n) {
    throw std::invalid_argument("Split: one side of the split would be empty");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.Index(i)]);
  const std::span<const std::size_t> all(idx);
  return {data.Select(all.subspan(0, n_train)), data.Select(all.subspan(n_train))};
}

ColumnStats Standardize(Dataset& train, Dataset& test) {
  if (train.empty()) throw std::invalid_argument("Standardize: empty train");
  if (test.dim() != train.dim()) {
    throw std::invalid_argument("Standardize: dimension mismatch");
  }
  const std::size_t d = train.dim();
  const auto n = static_cast<double>(train.size());
  ColumnStats stats;
  stats.mean.assign(d, 0.0);
  stats.std.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < train.size(); ++i) sum.Add(train.x(i)[j]);
    const double mean = sum.Total() / n;
    CompensatedSum sq;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const double c = train.x(i)[j] - mean;
      sq.Add(c * c);
    }
    const double sd = std::sqrt(sq.Total() / n);
    stats.mean[j] = mean;
    stats.std[j] = sd > 0.0 ? sd : 1.0;
  }
  for (Dataset* ds : {&train, &test}) {
    for (std::size_t i = 0; i < ds->size(); ++i) {
      std::span<double> x = ds->mutable_x(i);
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = (x[j] - stats.mean[j]) / stats.std[j];
      }
    }
  }
  return stats;
}

double NormalizeTarget(Dataset& train, Dataset& test) {
  double scale = 0.0;
  for (double y : train.labels()) scale = std::max(scale, std::abs(y));
  for (double y : test.labels()) scale = std::max(scale, std::abs(y));
  if (!(scale > 0.0)) {
    throw std::invalid_argument("NormalizeTarget: all targets are zero");
  }
  for (double& y : train.mutable_labels()) y /= scale;
  for (double& y : test.mutable_labels()) y /= scale;
  return scale;
}

}  // namespace dprelu
