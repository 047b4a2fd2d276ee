#include "commrec/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "commrec/error.hpp"

namespace commrec {

namespace {

using nlohmann::json;

double log1pexp(double x) {
  // log(1 + e^x) without overflow on either side.
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

struct Gradient {
  std::vector<double> w;
  double b = 0.0;

  double inf_norm() const {
    double m = std::abs(b);
    for (double v : w) m = std::max(m, std::abs(v));
    return m;
  }
};

double objective(std::span<const LabeledEmbedding> data, double lambda,
                 std::span<const double> w, double b) {
  double nll = 0.0;
  for (const auto& ex : data) {
    double a = b;
    for (size_t j = 0; j < w.size(); ++j) a += w[j] * ex.u.vec[j];
    nll += log1pexp(a) - (ex.label ? a : 0.0);
  }
  nll /= static_cast<double>(data.size());
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return nll + 0.5 * lambda * reg;
}

Gradient gradient(std::span<const LabeledEmbedding> data, double lambda,
                  std::span<const double> w, double b) {
  Gradient g;
  g.w.assign(w.size(), 0.0);
  for (const auto& ex : data) {
    double a = b;
    for (size_t j = 0; j < w.size(); ++j) a += w[j] * ex.u.vec[j];
    double r = sigmoid(a) - static_cast<double>(ex.label);
    for (size_t j = 0; j < w.size(); ++j) g.w[j] += r * ex.u.vec[j];
    g.b += r;
  }
  double inv_n = 1.0 / static_cast<double>(data.size());
  for (size_t j = 0; j < w.size(); ++j) g.w[j] = g.w[j] * inv_n + lambda * w[j];
  g.b *= inv_n;
  return g;
}

}  // namespace

double logreg_objective(std::span<const LabeledEmbedding> data, double lambda,
                        std::span<const double> w, double b) {
  return objective(data, lambda, w, b);
}

CommunityClassifier train_logreg(std::span<const LabeledEmbedding> data, double lambda,
                                 const LogRegOptions& opt, FitTrace* trace) {
  if (data.empty()) fail(Errc::degenerate_labels, "no training examples");
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& ex : data) {
    (ex.label ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    fail(Errc::degenerate_labels, "training data contains a single class");
  }
  const size_t dim = data.front().u.vec.size();
  for (const auto& ex : data) {
    if (ex.u.vec.size() != dim) {
      fail(Errc::dimension_mismatch, "inconsistent embedding dimensions in training data");
    }
  }

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  double f = objective(data, lambda, w, b);
  if (trace) {
    trace->objective.clear();
    trace->objective.push_back(f);
  }

  double step = 1.0;
  Gradient g = gradient(data, lambda, w, b);
  size_t it = 0;
  for (; it < opt.max_iters; ++it) {
    if (g.inf_norm() < opt.tol) break;

    double g_sq = g.b * g.b;
    for (double v : g.w) g_sq += v * v;

    // Backtracking line search with the Armijo condition; the accepted step
    // seeds the next iteration so huge-curvature problems don't pay the full
    // halving cascade every time.
    double t = std::min(1.0, step * 2.0);
    constexpr double c1 = 1e-4;
    std::vector<double> w_next(dim);
    double b_next = 0.0;
    double f_next = f;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (size_t j = 0; j < dim; ++j) w_next[j] = w[j] - t * g.w[j];
      b_next = b - t * g.b;
      f_next = objective(data, lambda, w_next, b_next);
      if (f_next <= f - c1 * t * g_sq) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // step underflow: numerically at the optimum

    w = std::move(w_next);
    w_next.assign(dim, 0.0);
    b = b_next;
    f = f_next;
    step = t;
    if (trace) trace->objective.push_back(f);
    g = gradient(data, lambda, w, b);
  }

  if (trace) {
    trace->grad_inf_norm = g.inf_norm();
    trace->iterations = it;
    trace->converged = g.inf_norm() < opt.tol;
  }

  CommunityClassifier clf;
  clf.w = std::move(w);
  clf.b = b;
  clf.lambda = lambda;
  return clf;
}

double probability(const CommunityClassifier& c, std::span<const double> u) {
  double a = c.b;
  for (size_t j = 0; j < c.w.size(); ++j) a += c.w[j] * u[j];
  return sigmoid(a);
}

double score(const CommunityClassifier& c, std::span<const double> u) {
  double s = 0.0;
  for (size_t j = 0; j < c.w.size(); ++j) s += c.w[j] * u[j];
  return s;
}

void CommunityClassifier::save(const std::string& path) const {
  json obj;
  obj["k"] = w.size();
  obj["lambda"] = lambda;
  obj["b"] = b;
  obj["w"] = w;
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << obj.dump(2) << '\n';
  if (!out) fail(Errc::io_error, "write failed on " + path);
}

CommunityClassifier CommunityClassifier::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open classifier file " + path);
  json obj = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object() || !obj.contains("k") || !obj.contains("w") ||
      !obj.contains("b") || !obj.contains("lambda") || !obj["w"].is_array()) {
    fail(Errc::malformed_line, path + ": not a classifier file");
  }
  CommunityClassifier clf;
  clf.b = obj["b"].get<double>();
  clf.lambda = obj["lambda"].get<double>();
  clf.w = obj["w"].get<std::vector<double>>();
  if (clf.w.size() != obj["k"].get<size_t>()) {
    fail(Errc::malformed_line, path + ": \"k\" does not match the weight vector length");
  }
  return clf;
}

}  // namespace commrec
