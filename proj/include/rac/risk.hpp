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

#ifndef RAC_RISK_HPP_
#define RAC_RISK_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "rac/core.hpp"

// Risk-node assessment: syscall n-grams, frequency/idf weighting and an
// isolation forest over the weighted rows.
namespace rac::risk {

using Syscall = std::uint32_t;
using Ngram = std::vector<Syscall>;

struct SyscallTrace {
  NodeId node;
  Term term;
  std::vector<Syscall> calls;
};

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

class NgramVocabulary {
 public:
  NgramVocabulary() = default;
  explicit NgramVocabulary(std::set<Ngram> ngrams);

  std::size_t size() const { return ngrams_.size(); }
  const std::vector<Ngram>& ngrams() const { return ngrams_; }
  // Column index, or size() when absent.
  std::size_t index_of(const Ngram& g) const;

 private:
  std::vector<Ngram> ngrams_;
  std::map<Ngram, std::size_t> index_;
};

struct CountMatrix {
  Matrix counts;  // S(i,j): occurrences of n-gram j in node i's trace
  std::vector<NodeId> row_owner;
  NgramVocabulary vocabulary;

  std::size_t num() const { return counts.rows; }
  std::size_t k() const { return counts.cols; }
};

struct WeightedMatrix {
  Matrix values;  // N_f
  std::vector<NodeId> row_owner;
};

enum class TfMode {
  kColumn,  // normalize each n-gram column across nodes (default)
  kRow,     // conventional per-document term frequency, for sensitivity runs
};

// Stride-1 windows of length w, in trace order.
std::vector<Ngram> extract_ngrams(std::span<const Syscall> calls, std::size_t w);

CountMatrix build_count_matrix(std::span<const SyscallTrace> traces, std::size_t w);

Matrix term_frequency(const CountMatrix& counts, TfMode mode = TfMode::kColumn);
std::vector<double> inverse_document_frequency(const CountMatrix& counts);
// S * f_s, the intermediate product before idf weighting.
Matrix frequency_weighted(const CountMatrix& counts, TfMode mode = TfMode::kColumn);
WeightedMatrix weight_matrix(const CountMatrix& counts, TfMode mode = TfMode::kColumn);

// Euler-Mascheroni constant as used by the harmonic approximation.
inline constexpr double kEulerGamma = 0.5772156649;

// Average unsuccessful-search path length of a BST with n keys.
double c_factor(std::size_t n);

// s = 2^(-E(h) / c(n)).
double anomaly_score_from_path(double mean_path_length, std::size_t sample_size);

struct ForestConfig {
  std::size_t tree_count = 100;
  std::size_t subsample_size = 256;
  std::uint64_t seed = 0;
};

class IsolationForest {
 public:
  struct TreeNode {
    // Internal: split on column `feature` at `threshold`; x < threshold goes left.
    // Leaf: feature == kLeaf, `size` rows reached it.
    static constexpr std::size_t kLeaf = static_cast<std::size_t>(-1);
    std::size_t feature = kLeaf;
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t size = 0;
    std::uint32_t depth = 0;

    bool leaf() const { return feature == kLeaf; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
  };
  using Tree = std::vector<TreeNode>;

  static IsolationForest fit(const Matrix& data, const ForestConfig& config);

  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t sample_size() const { return sample_size_; }
  std::size_t height_limit() const { return height_limit_; }
  std::uint64_t seed() const { return seed_; }

  // h(x) for one tree, with c(leaf size) credited at truncated leaves.
  double path_length(const Tree& tree, std::span<const double> row) const;
  // E(h(x)) across trees.
  double mean_path_length(std::span<const double> row) const;
  double score(std::span<const double> row) const;

 private:
  std::vector<Tree> trees_;
  std::size_t sample_size_ = 0;
  std::size_t height_limit_ = 0;
  std::uint64_t seed_ = 0;
};

enum class FlagRule {
  kMeanStd,    // s > max(floor, mean + kappa * stddev)
  kMedianMad,  // s > max(floor, median + kappa * 1.4826 * MAD)
  // As kMedianMad, with median and MAD taken over the lowest strict majority
  // of scores, which stay honest under an honest majority.
  kLowerMajority,
};

struct RiskConfig {
  std::size_t window = 5;
  std::size_t tree_count = 100;
  std::size_t subsample_size = 256;
  double kappa = 5.0;
  double score_floor = 0.5;
  // Smallest distance above the center a flagged score must reach.
  double min_margin = 0.07;
  FlagRule rule = FlagRule::kLowerMajority;
  TfMode tf_mode = TfMode::kColumn;
  std::uint64_t seed = 0;
};

struct RiskReport {
  Term term;
  std::map<NodeId, double> scores;
  std::set<NodeId> flagged;
  double threshold = 0.0;
  // Set when at least half of the nodes were flagged: the honest-majority
  // assumption does not hold for this input.
  bool assumption_violated = false;
};

// Throws kDegenerateInput for fewer than three traces.
RiskReport assess(std::span<const SyscallTrace> traces, const RiskConfig& config);

}  // namespace rac::risk

#endif  // RAC_RISK_HPP_
