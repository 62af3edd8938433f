/*
 * Copyright 2026 The RAC Simulator Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rac/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "rac/random.hpp"

namespace rac::risk {

namespace {

struct NgramHash {
  std::size_t operator()(const Ngram& g) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (Syscall s : g) {
      h ^= s;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

using NgramCounts = std::unordered_map<Ngram, std::uint32_t, NgramHash>;

NgramCounts count_ngrams(std::span<const Syscall> calls, std::size_t w) {
  NgramCounts counts;
  if (w == 0 || calls.size() < w) return counts;
  Ngram g(w);
  for (std::size_t i = 0; i + w <= calls.size(); ++i) {
    std::copy_n(calls.begin() + static_cast<std::ptrdiff_t>(i), w, g.begin());
    ++counts[g];
  }
  return counts;
}

}  // namespace

NgramVocabulary::NgramVocabulary(std::set<Ngram> ngrams) : ngrams_(ngrams.begin(), ngrams.end()) {
  for (std::size_t j = 0; j < ngrams_.size(); ++j) index_.emplace(ngrams_[j], j);
}

std::size_t NgramVocabulary::index_of(const Ngram& g) const {
  auto it = index_.find(g);
  return it == index_.end() ? ngrams_.size() : it->second;
}

std::vector<Ngram> extract_ngrams(std::span<const Syscall> calls, std::size_t w) {
  std::vector<Ngram> out;
  if (w == 0 || calls.size() < w) return out;
  out.reserve(calls.size() - w + 1);
  for (std::size_t i = 0; i + w <= calls.size(); ++i) {
    out.emplace_back(calls.begin() + static_cast<std::ptrdiff_t>(i),
                     calls.begin() + static_cast<std::ptrdiff_t>(i + w));
  }
  return out;
}

CountMatrix build_count_matrix(std::span<const SyscallTrace> traces, std::size_t w) {
  std::vector<NgramCounts> per_row;
  per_row.reserve(traces.size());
  std::set<Ngram> all;
  for (const auto& t : traces) {
    per_row.push_back(count_ngrams(t.calls, w));
    for (const auto& [g, c] : per_row.back()) all.insert(g);
  }
  CountMatrix m;
  m.vocabulary = NgramVocabulary(std::move(all));
  m.counts = Matrix(traces.size(), m.vocabulary.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    m.row_owner.push_back(traces[i].node);
    for (const auto& [g, c] : per_row[i]) m.counts.at(i, m.vocabulary.index_of(g)) = c;
  }
  return m;
}

Matrix term_frequency(const CountMatrix& counts, TfMode mode) {
  const Matrix& s = counts.counts;
  Matrix f(s.rows, s.cols);
  if (mode == TfMode::kColumn) {
    for (std::size_t j = 0; j < s.cols; ++j) {
      double sum = 0.0;
      for (std::size_t m = 0; m < s.rows; ++m) sum += s.at(m, j);
      if (sum == 0.0) continue;
      for (std::size_t i = 0; i < s.rows; ++i) f.at(i, j) = s.at(i, j) / sum;
    }
  } else {
    for (std::size_t i = 0; i < s.rows; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < s.cols; ++j) sum += s.at(i, j);
      if (sum == 0.0) continue;
      for (std::size_t j = 0; j < s.cols; ++j) f.at(i, j) = s.at(i, j) / sum;
    }
  }
  return f;
}

std::vector<double> inverse_document_frequency(const CountMatrix& counts) {
  const Matrix& s = counts.counts;
  std::vector<double> idf(s.cols, 0.0);
  const double num = static_cast<double>(s.rows);
  for (std::size_t j = 0; j < s.cols; ++j) {
    std::size_t df = 0;
    for (std::size_t i = 0; i < s.rows; ++i) df += s.at(i, j) > 0.0 ? 1 : 0;
    idf[j] = std::log(num / (static_cast<double>(df) + 1.0));
  }
  return idf;
}

Matrix frequency_weighted(const CountMatrix& counts, TfMode mode) {
  Matrix f = term_frequency(counts, mode);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] *= counts.counts.values[i];
  return f;
}

WeightedMatrix weight_matrix(const CountMatrix& counts, TfMode mode) {
  WeightedMatrix w{frequency_weighted(counts, mode), counts.row_owner};
  const auto idf = inverse_document_frequency(counts);
  for (std::size_t i = 0; i < w.values.rows; ++i)
    for (std::size_t j = 0; j < w.values.cols; ++j) w.values.at(i, j) *= idf[j];
  return w;
}

double c_factor(std::size_t n) {
  if (n < 2) return 0.0;
  const double x = static_cast<double>(n);
  const double harmonic = std::log(x - 1.0) + kEulerGamma;
  return 2.0 * harmonic - 2.0 * (x - 1.0) / x;
}

double anomaly_score_from_path(double mean_path_length, std::size_t sample_size) {
  return std::exp2(-mean_path_length / c_factor(sample_size));
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& data, std::size_t height_limit, Rng& rng)
      : data_(data), height_limit_(height_limit), rng_(rng) {}

  IsolationForest::Tree build(std::vector<std::size_t> rows) {
    tree_.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  bool constant(std::size_t col, const std::vector<std::size_t>& rows, double& lo, double& hi) const {
    lo = hi = data_.at(rows.front(), col);
    for (std::size_t r : rows) {
      double v = data_.at(r, col);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return lo == hi;
  }

  // Uniform choice among the columns that vary inside this partition.
  // Returns data_.cols when every column is constant.
  std::size_t pick_column(const std::vector<std::size_t>& rows, double& lo, double& hi) {
    constexpr int kQuickTries = 32;
    for (int t = 0; t < kQuickTries; ++t) {
      std::size_t c = rng_.index(data_.cols);
      if (!constant(c, rows, lo, hi)) return c;
    }
    std::vector<std::size_t> varying;
    for (std::size_t c = 0; c < data_.cols; ++c) {
      double a, b;
      if (!constant(c, rows, a, b)) varying.push_back(c);
    }
    if (varying.empty()) return data_.cols;
    std::size_t c = varying[rng_.index(varying.size())];
    constant(c, rows, lo, hi);
    return c;
  }

  std::uint32_t grow(const std::vector<std::size_t>& rows, std::uint32_t depth) {
    const auto id = static_cast<std::uint32_t>(tree_.size());
    tree_.push_back({});
    tree_[id].size = static_cast<std::uint32_t>(rows.size());
    tree_[id].depth = depth;
    if (rows.size() <= 1 || depth >= height_limit_ || data_.cols == 0) return id;
    double lo = 0.0, hi = 0.0;
    std::size_t col = pick_column(rows, lo, hi);
    if (col == data_.cols) return id;
    const double threshold = lo + rng_.open_unit() * (hi - lo);
    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) (data_.at(r, col) < threshold ? left : right).push_back(r);
    tree_[id].feature = col;
    tree_[id].threshold = threshold;
    std::uint32_t l = grow(left, depth + 1);
    std::uint32_t rr = grow(right, depth + 1);
    tree_[id].left = l;
    tree_[id].right = rr;
    return id;
  }

  const Matrix& data_;
  std::size_t height_limit_;
  Rng& rng_;
  IsolationForest::Tree tree_;
};

}  // namespace

IsolationForest IsolationForest::fit(const Matrix& data, const ForestConfig& config) {
  if (data.rows < 2) throw Error(ErrorCode::kDegenerateInput, "isolation forest needs at least two rows");
  if (config.tree_count == 0) throw Error(ErrorCode::kDegenerateInput, "tree_count must be positive");
  IsolationForest forest;
  forest.seed_ = config.seed;
  forest.sample_size_ = std::min(std::max<std::size_t>(config.subsample_size, 2), data.rows);
  forest.height_limit_ =
      static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(forest.sample_size_))));
  forest.trees_.reserve(config.tree_count);
  for (std::size_t t = 0; t < config.tree_count; ++t) {
    Rng rng(derive_seed(config.seed, t, 0x7472656555ULL));
    // Partial Fisher-Yates: uniform subsample without replacement.
    std::vector<std::size_t> rows(data.rows);
    std::iota(rows.begin(), rows.end(), 0);
    for (std::size_t i = 0; i < forest.sample_size_; ++i) {
      std::size_t j = i + rng.index(rows.size() - i);
      std::swap(rows[i], rows[j]);
    }
    rows.resize(forest.sample_size_);
    TreeBuilder builder(data, forest.height_limit_, rng);
    forest.trees_.push_back(builder.build(std::move(rows)));
  }
  return forest;
}

double IsolationForest::path_length(const Tree& tree, std::span<const double> row) const {
  std::uint32_t id = 0;
  while (!tree[id].leaf()) id = row[tree[id].feature] < tree[id].threshold ? tree[id].left : tree[id].right;
  return static_cast<double>(tree[id].depth) + c_factor(tree[id].size);
}

double IsolationForest::mean_path_length(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += path_length(tree, row);
  return sum / static_cast<double>(trees_.size());
}

double IsolationForest::score(std::span<const double> row) const {
  return anomaly_score_from_path(mean_path_length(row), sample_size_);
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double flag_threshold(const std::vector<double>& scores, const RiskConfig& config) {
  const double n = static_cast<double>(scores.size());
  double center = 0.0, spread = 0.0;
  if (config.rule == FlagRule::kMeanStd) {
    center = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : scores) ss += (s - center) * (s - center);
    spread = std::sqrt(ss / n);
  } else {
    std::vector<double> base = scores;
    if (config.rule == FlagRule::kLowerMajority) {
      std::sort(base.begin(), base.end());
      base.resize(base.size() / 2 + 1);
    }
    center = median_of(base);
    std::vector<double> dev;
    dev.reserve(base.size());
    for (double s : base) dev.push_back(std::abs(s - center));
    spread = 1.4826 * median_of(std::move(dev));
  }
  return std::max(config.score_floor, center + std::max(config.kappa * spread, config.min_margin));
}

}  // namespace

RiskReport assess(std::span<const SyscallTrace> traces, const RiskConfig& config) {
  if (traces.size() < 3) {
    throw Error(ErrorCode::kDegenerateInput,
                "risk assessment needs at least 3 traces, got " + std::to_string(traces.size()));
  }
  RiskReport report;
  report.term = traces.front().term;
  CountMatrix counts = build_count_matrix(traces, config.window);
  WeightedMatrix weighted = weight_matrix(counts, config.tf_mode);
  IsolationForest forest = IsolationForest::fit(
      weighted.values, {config.tree_count, config.subsample_size, config.seed});
  std::vector<double> scores;
  scores.reserve(traces.size());
  for (std::size_t i = 0; i < weighted.values.rows; ++i) {
    scores.push_back(forest.score(weighted.values.row(i)));
    report.scores[weighted.row_owner[i]] = scores.back();
  }
  report.threshold = flag_threshold(scores, config);
  for (const auto& [node, s] : report.scores)
    if (s > report.threshold) report.flagged.insert(node);
  report.assumption_violated = 2 * report.flagged.size() >= traces.size();
  return report;
}

}  // namespace rac::risk
