#ifndef COMMREC_EVAL_HPP_
#define COMMREC_EVAL_HPP_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commrec/embedding.hpp"

namespace commrec {

struct CommunitySpec {
  std::string name;
  std::vector<std::string> members;

  // JSON {"name", "members"}; a file may also hold an array of specs.
  void save(const std::string& path) const;
  static CommunitySpec load(const std::string& path);
  static std::vector<CommunitySpec> load_all(const std::string& path);
  static void save_all(std::span<const CommunitySpec> specs, const std::string& path);
};

struct Fold {
  std::string held_out;
  size_t rank = 0;    // 1-based position of the held-out positive
  double auc = 0.0;
};

struct EvalReport {
  std::string community;
  std::vector<Fold> folds;
  double mrr = 0.0;
  double inv_mrr = 0.0;
  double mean_auc = 0.0;

  std::string to_json() const;
};

// Single-positive AUC: fraction of negatives scored below, ties counted half.
double fold_auc(double pos_score, std::span<const double> neg_scores);

// (mean of 1/rank, its reciprocal). Throws Errc::empty_input on no ranks.
std::pair<double, double> mrr_stats(std::span<const size_t> ranks);

// Leave-one-out protocol: for every member, fit a classifier on the remaining
// members vs. the full negative pool, then rank the held-out member against
// the test pool. Member embeddings are resolved from member_pool by id.
EvalReport leave_one_out(const CommunitySpec& spec, const EmbeddingSet& member_pool,
                         const EmbeddingSet& neg_train_pool, const EmbeddingSet& test_pool,
                         double lambda);

}  // namespace commrec

#endif  // COMMREC_EVAL_HPP_
