#include "commrec/reid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "commrec/error.hpp"

namespace commrec {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Projected {
  std::vector<double> u;  // normalized embedding
  double norm = 0.0;      // of the unnormalized projection
};

Projected project(const SparseWeights& w, const EmbeddingMatrix& m) {
  if (w.empty()) {
    fail(Errc::zero_embedding, "empty bag of words for user '" + w.owner_id + "'");
  }
  const size_t dim = m.dim();
  std::vector<double> s(dim, 0.0);
  for (const auto& [id, weight] : w.pairs) {
    if (id < 0 || static_cast<size_t>(id) >= m.vocab_size()) {
      fail(Errc::dimension_mismatch, "token id " + std::to_string(id) +
                                         " out of range for matrix with " +
                                         std::to_string(m.vocab_size()) + " rows");
    }
    auto row = m.row(static_cast<size_t>(id));
    for (size_t j = 0; j < dim; ++j) s[j] += weight * row[j];
  }
  double norm_sq = 0.0;
  for (double v : s) norm_sq += v * v;
  double norm = std::sqrt(norm_sq);
  if (!(norm >= 1e-12)) {
    fail(Errc::zero_embedding, "projection norm below 1e-12 for user '" + w.owner_id + "'");
  }
  for (double& v : s) v /= norm;
  return {std::move(s), norm};
}

// w_i * (I - u u^T) g / ||s|| accumulated into the rows of one member.
void accumulate_member(SparseGrad& grad, const SparseWeights& w, const Projected& p,
                       std::span<const double> dcost_du, size_t dim) {
  double proj = dot(std::span<const double>(p.u), dcost_du);
  std::vector<double> g(dim);
  for (size_t j = 0; j < dim; ++j) g[j] = (dcost_du[j] - proj * p.u[j]) / p.norm;
  for (const auto& [id, weight] : w.pairs) {
    auto [it, inserted] = grad.rows.try_emplace(static_cast<size_t>(id));
    if (inserted) it->second.assign(dim, 0.0);
    for (size_t j = 0; j < dim; ++j) it->second[j] += weight * g[j];
  }
}

struct CostAndGrad {
  double cost = 0.0;
  SparseGrad grad;
};

CostAndGrad triplet_cost_grad(const Triplet& triplet, const EmbeddingMatrix& matrix,
                              bool want_grad) {
  Projected a = project(triplet.anchor, matrix);
  Projected p = project(triplet.positive, matrix);
  Projected n = project(triplet.negative, matrix);

  CostAndGrad out;
  double hinge = 1.0 - dot(std::span<const double>(a.u), std::span<const double>(p.u)) +
                 dot(std::span<const double>(a.u), std::span<const double>(n.u));
  if (hinge <= 0.0) return out;  // flat region of the hinge
  out.cost = hinge;
  if (!want_grad) return out;

  const size_t dim = matrix.dim();
  std::vector<double> da(dim), dp(dim), dn(dim);
  for (size_t j = 0; j < dim; ++j) {
    da[j] = n.u[j] - p.u[j];
    dp[j] = -a.u[j];
    dn[j] = a.u[j];
  }
  accumulate_member(out.grad, triplet.anchor, a, da, dim);
  accumulate_member(out.grad, triplet.positive, p, dp, dim);
  accumulate_member(out.grad, triplet.negative, n, dn, dim);
  return out;
}

}  // namespace

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  return 1.0 - dot(u, v);
}

double triplet_cost(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative) {
  double c = 1.0 + cosine_distance(anchor, positive) - cosine_distance(anchor, negative);
  return c > 0.0 ? c : 0.0;
}

SparseGrad triplet_gradient(const Triplet& triplet, const EmbeddingMatrix& matrix) {
  return triplet_cost_grad(triplet, matrix, /*want_grad=*/true).grad;
}

TripletSampler::TripletSampler(const Corpus& corpus, const Vocabulary& vocab,
                               size_t sample_size, std::optional<Split> filter)
    : sample_size_(sample_size) {
  if (sample_size_ < 1) fail(Errc::config_invalid, "sample_size must be >= 1");
  for (const auto& user : corpus.users()) {
    if (filter && user.split != *filter) continue;
    if (user.posts.size() < 4) continue;  // too short to split into useful halves
    PreparedUser prep;
    prep.doc = &user;
    prep.post_ids.reserve(user.tokens.size());
    for (const auto& post : user.tokens) {
      std::vector<int64_t> ids;
      for (const auto& tok : apply_bigrams(post, vocab.accepted_bigrams())) {
        if (auto id = vocab.id_of(tok)) ids.push_back(*id);
      }
      prep.post_ids.push_back(std::move(ids));
    }
    eligible_.push_back(std::move(prep));
  }
}

SparseWeights TripletSampler::make_bag(const PreparedUser& user, std::span<const size_t> posts,
                                       const char* label) const {
  std::unordered_map<int64_t, int64_t> counts;
  for (size_t idx : posts) {
    for (int64_t id : user.post_ids[idx]) ++counts[id];
  }
  SparseWeights w;
  w.pairs.reserve(counts.size());
  for (const auto& [id, count] : counts) {
    w.pairs.emplace_back(id, log_weight(static_cast<double>(count)));
  }
  std::sort(w.pairs.begin(), w.pairs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  w.owner_id = user.doc->user_id;
  w.subset = label;
  return w;
}

Triplet TripletSampler::sample(Rng& rng) const {
  if (eligible_.size() < 2) {
    fail(Errc::insufficient_corpus,
         "triplet sampling needs at least 2 users with 4+ posts, have " +
             std::to_string(eligible_.size()));
  }
  size_t i1 = static_cast<size_t>(rng.uniform(eligible_.size()));
  size_t i2 = static_cast<size_t>(rng.uniform(eligible_.size() - 1));
  if (i2 >= i1) ++i2;

  const PreparedUser& p1 = eligible_[i1];
  const PreparedUser& p2 = eligible_[i2];

  size_t t1 = p1.post_ids.size();
  size_t m = std::min(sample_size_, t1 / 2);
  auto picks = rng.sample_without_replacement(t1, 2 * m);
  std::span<const size_t> anchor_posts(picks.data(), m);
  std::span<const size_t> positive_posts(picks.data() + m, m);

  size_t t2 = p2.post_ids.size();
  size_t mn = std::min(sample_size_, t2);
  auto neg_picks = rng.sample_without_replacement(t2, mn);

  Triplet triplet;
  triplet.anchor = make_bag(p1, anchor_posts, "anchor");
  triplet.positive = make_bag(p1, positive_posts, "positive");
  triplet.negative = make_bag(p2, neg_picks, "negative");
  return triplet;
}

Triplet sample_triplet(const Corpus& corpus, const Vocabulary& vocab, size_t sample_size,
                       Rng& rng) {
  TripletSampler sampler(corpus, vocab, sample_size);
  return sampler.sample(rng);
}

EmbeddingMatrix load_pretrained(const std::string& path, const Vocabulary& vocab,
                                size_t dim, Rng& rng) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open pretrained vector file " + path);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::malformed_line, path + ": empty file");
  size_t rows = 0;
  size_t file_dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> rows >> file_dim)) {
      fail(Errc::malformed_line, path + ": header must be '<rows> <dim>'");
    }
  }
  if (file_dim != dim) {
    fail(Errc::init_mismatch, path + ": pretrained dimension " + std::to_string(file_dim) +
                                  " != configured dimension " + std::to_string(dim));
  }

  // Random rows are drawn up front in row order, so the rng stream does not
  // depend on which tokens the file happens to contain.
  EmbeddingMatrix m = EmbeddingMatrix::random_init(vocab, dim, rng);

  size_t line_no = 1;
  size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++seen;
    std::istringstream row(line);
    std::string token;
    if (!(row >> token)) {
      fail(Errc::malformed_line, path + " line " + std::to_string(line_no) + ": missing token");
    }
    std::vector<double> values(dim);
    for (size_t j = 0; j < dim; ++j) {
      if (!(row >> values[j])) {
        fail(Errc::malformed_line,
             path + " line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                 " components");
      }
    }
    double extra;
    if (row >> extra) {
      fail(Errc::malformed_line,
           path + " line " + std::to_string(line_no) + ": too many components");
    }
    if (auto id = vocab.id_of(token)) {
      auto dst = m.row(static_cast<size_t>(*id));
      std::copy(values.begin(), values.end(), dst.begin());
    }
  }
  if (in.bad()) fail(Errc::io_error, "read failed on " + path);
  if (seen != rows) {
    fail(Errc::malformed_line, path + ": header declares " + std::to_string(rows) +
                                   " rows, found " + std::to_string(seen));
  }
  return m;
}

std::pair<EmbeddingMatrix, TrainingReport> train_reid(const Corpus& corpus,
                                                      const Vocabulary& vocab,
                                                      const TrainConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  EmbeddingMatrix matrix = cfg.init.kind == InitSpec::Kind::pretrained
                               ? load_pretrained(cfg.init.path, vocab, cfg.dim, rng)
                               : EmbeddingMatrix::random_init(vocab, cfg.dim, rng);

  TripletSampler sampler(corpus, vocab, cfg.sample_size, Split::embed_train);
  if (sampler.eligible_count() < 2) {
    fail(Errc::insufficient_corpus, "need at least 2 embed-train users with 4+ posts");
  }

  const size_t batch = std::max<size_t>(1, cfg.batch);
  const size_t iterations = (cfg.steps + batch - 1) / batch;
  const size_t intervals =
      std::max<size_t>(1, std::min(cfg.report_intervals, std::max<size_t>(1, iterations)));

  TrainingReport report;
  size_t remaining = cfg.steps;
  double interval_cost = 0.0;
  size_t interval_active = 0;
  size_t interval_triplets = 0;

  for (size_t it = 0; it < iterations; ++it) {
    size_t this_batch = std::min(batch, remaining);
    remaining -= this_batch;

    SparseGrad acc;
    for (size_t b = 0; b < this_batch; ++b) {
      Triplet triplet;
      // Skip degenerate draws (all-OOV subsets); bounded so a hopeless corpus
      // errors out instead of spinning.
      size_t attempts = 0;
      for (;;) {
        triplet = sampler.sample(rng);
        if (!triplet.anchor.empty() && !triplet.positive.empty() && !triplet.negative.empty()) {
          break;
        }
        if (++attempts >= 10000) {
          fail(Errc::insufficient_corpus, "sampled 10000 consecutive all-OOV triplets");
        }
      }
      CostAndGrad cg = triplet_cost_grad(triplet, matrix, /*want_grad=*/true);
      interval_cost += cg.cost;
      interval_active += cg.cost > 0.0 ? 1 : 0;
      ++interval_triplets;
      for (auto& [row, vec] : cg.grad.rows) {
        auto [slot, inserted] = acc.rows.try_emplace(row);
        if (inserted) slot->second.assign(matrix.dim(), 0.0);
        for (size_t j = 0; j < vec.size(); ++j) slot->second[j] += vec[j];
      }
    }

    if (cfg.learning_rate != 0.0 && this_batch > 0) {
      double scale = cfg.learning_rate / static_cast<double>(this_batch);
      for (const auto& [row, vec] : acc.rows) {
        auto dst = matrix.row(row);
        for (size_t j = 0; j < vec.size(); ++j) dst[j] -= scale * vec[j];
      }
    }

    size_t interval_idx = report.mean_cost.size();
    size_t boundary = (interval_idx + 1) * iterations / intervals;
    if (it + 1 >= boundary && interval_idx < intervals) {
      report.mean_cost.push_back(interval_triplets ? interval_cost / interval_triplets : 0.0);
      report.active_fraction.push_back(
          interval_triplets ? static_cast<double>(interval_active) / interval_triplets : 0.0);
      interval_cost = 0.0;
      interval_active = 0;
      interval_triplets = 0;
      if (!matrix.all_finite()) {
        fail(Errc::config_invalid,
             "training diverged: non-finite entries in the embedding matrix; "
             "lower the learning rate");
      }
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(matrix), std::move(report)};
}

}  // namespace commrec
