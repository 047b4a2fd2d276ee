#ifndef COMMREC_CLASSIFIER_HPP_
#define COMMREC_CLASSIFIER_HPP_

#include <span>
#include <string>
#include <vector>

#include "commrec/embedding.hpp"

namespace commrec {

struct LabeledEmbedding {
  UserEmbedding u;
  int label = 0;  // {0, 1}
};

struct CommunityClassifier {
  std::vector<double> w;
  double b = 0.0;
  double lambda = 1.0;

  // JSON {"k", "lambda", "b", "w"}.
  void save(const std::string& path) const;
  static CommunityClassifier load(const std::string& path);
};

struct LogRegOptions {
  double tol = 1e-6;      // stop when the gradient infinity norm drops below
  size_t max_iters = 500;
};

struct FitTrace {
  std::vector<double> objective;  // value at the initial point and after each step
  double grad_inf_norm = 0.0;
  size_t iterations = 0;
  bool converged = false;
};

// Minimizes mean negative log-likelihood + (lambda/2)||w||^2 (bias
// unregularized) by batch gradient descent with backtracking line search.
// Deterministic: same data and lambda reproduce w and b exactly.
CommunityClassifier train_logreg(std::span<const LabeledEmbedding> data, double lambda,
                                 const LogRegOptions& opt = {}, FitTrace* trace = nullptr);

// Objective evaluated at (w, b); exposed for diagnostics and oracle checks.
double logreg_objective(std::span<const LabeledEmbedding> data, double lambda,
                        std::span<const double> w, double b);

// Numerically stable sigmoid of w^T u + b.
double probability(const CommunityClassifier& c, std::span<const double> u);
inline double probability(const CommunityClassifier& c, const UserEmbedding& u) {
  return probability(c, std::span<const double>(u.vec));
}

// Ranking score w^T u; the bias cancels in the log probability ratio.
double score(const CommunityClassifier& c, std::span<const double> u);
inline double score(const CommunityClassifier& c, const UserEmbedding& u) {
  return score(c, std::span<const double>(u.vec));
}

}  // namespace commrec

#endif  // COMMREC_CLASSIFIER_HPP_
