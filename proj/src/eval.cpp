#include "commrec/eval.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "json.hpp"

#include "commrec/classifier.hpp"
#include "commrec/error.hpp"

namespace commrec {

namespace {

using nlohmann::json;

json spec_to_json(const CommunitySpec& spec) {
  json obj;
  obj["name"] = spec.name;
  obj["members"] = spec.members;
  return obj;
}

CommunitySpec spec_from_json(const json& obj, const std::string& context) {
  if (!obj.is_object() || !obj.contains("name") || !obj.contains("members") ||
      !obj["name"].is_string() || !obj["members"].is_array()) {
    fail(Errc::malformed_line, context + ": community spec needs \"name\" and \"members\"");
  }
  CommunitySpec spec;
  spec.name = obj["name"].get<std::string>();
  for (const auto& m : obj["members"]) {
    if (!m.is_string()) fail(Errc::malformed_line, context + ": member ids must be strings");
    spec.members.push_back(m.get<std::string>());
  }
  return spec;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open community file " + path);
  json obj = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) fail(Errc::malformed_line, path + ": invalid JSON");
  return obj;
}

}  // namespace

void CommunitySpec::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << spec_to_json(*this).dump(2) << '\n';
  if (!out) fail(Errc::io_error, "write failed on " + path);
}

CommunitySpec CommunitySpec::load(const std::string& path) {
  return spec_from_json(parse_file(path), path);
}

std::vector<CommunitySpec> CommunitySpec::load_all(const std::string& path) {
  json obj = parse_file(path);
  std::vector<CommunitySpec> specs;
  if (obj.is_array()) {
    for (const auto& item : obj) specs.push_back(spec_from_json(item, path));
  } else {
    specs.push_back(spec_from_json(obj, path));
  }
  return specs;
}

void CommunitySpec::save_all(std::span<const CommunitySpec> specs, const std::string& path) {
  json arr = json::array();
  for (const auto& spec : specs) arr.push_back(spec_to_json(spec));
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << arr.dump(2) << '\n';
  if (!out) fail(Errc::io_error, "write failed on " + path);
}

double fold_auc(double pos_score, std::span<const double> neg_scores) {
  if (neg_scores.empty()) fail(Errc::empty_input, "fold_auc needs at least one negative score");
  size_t below = 0;
  size_t tied = 0;
  for (double s : neg_scores) {
    if (s < pos_score) {
      ++below;
    } else if (s == pos_score) {
      ++tied;
    }
  }
  return (static_cast<double>(below) + 0.5 * static_cast<double>(tied)) /
         static_cast<double>(neg_scores.size());
}

std::pair<double, double> mrr_stats(std::span<const size_t> ranks) {
  if (ranks.empty()) fail(Errc::empty_input, "mrr_stats needs at least one rank");
  double sum = 0.0;
  for (size_t r : ranks) {
    if (r < 1) fail(Errc::config_invalid, "ranks must be >= 1");
    sum += 1.0 / static_cast<double>(r);
  }
  auto n = static_cast<double>(ranks.size());
  // n/sum rather than 1/(sum/n): one rounding instead of two.
  return {sum / n, n / sum};
}

EvalReport leave_one_out(const CommunitySpec& spec, const EmbeddingSet& member_pool,
                         const EmbeddingSet& neg_train_pool, const EmbeddingSet& test_pool,
                         double lambda) {
  if (spec.members.size() < 2) {
    fail(Errc::config_invalid,
         "community '" + spec.name + "' needs >= 2 members for leave-one-out");
  }

  std::unordered_map<std::string, const UserEmbedding*> lookup;
  for (const auto& e : member_pool) lookup.emplace(e.user_id, &e);
  std::vector<const UserEmbedding*> members;
  members.reserve(spec.members.size());
  for (const auto& id : spec.members) {
    auto it = lookup.find(id);
    if (it == lookup.end()) {
      fail(Errc::member_missing, "no embedding for member '" + id + "' of '" + spec.name + "'");
    }
    members.push_back(it->second);
  }

  EvalReport report;
  report.community = spec.name;
  std::vector<size_t> ranks;
  double auc_sum = 0.0;

  for (size_t held = 0; held < members.size(); ++held) {
    std::vector<LabeledEmbedding> train;
    train.reserve(members.size() - 1 + neg_train_pool.size());
    for (size_t i = 0; i < members.size(); ++i) {
      if (i == held) continue;
      train.push_back({*members[i], 1});
    }
    for (const auto& e : neg_train_pool) train.push_back({e, 0});

    CommunityClassifier clf = train_logreg(train, lambda);

    const UserEmbedding& held_out = *members[held];
    double pos_score = score(clf, held_out);
    std::vector<double> pool_scores;
    pool_scores.reserve(test_pool.size());
    size_t higher = 0;
    size_t tied_smaller = 0;
    for (const auto& e : test_pool) {
      double s = score(clf, e);
      pool_scores.push_back(s);
      if (s > pos_score) {
        ++higher;
      } else if (s == pos_score && e.user_id < held_out.user_id) {
        ++tied_smaller;
      }
    }

    Fold fold;
    fold.held_out = held_out.user_id;
    fold.rank = 1 + higher + tied_smaller;
    fold.auc = fold_auc(pos_score, pool_scores);
    auc_sum += fold.auc;
    ranks.push_back(fold.rank);
    report.folds.push_back(std::move(fold));
  }

  auto [mrr, inv_mrr] = mrr_stats(ranks);
  report.mrr = mrr;
  report.inv_mrr = inv_mrr;
  report.mean_auc = auc_sum / static_cast<double>(report.folds.size());
  return report;
}

std::string EvalReport::to_json() const {
  json obj;
  obj["community"] = community;
  json folds_json = json::array();
  for (const auto& fold : folds) {
    json f;
    f["held_out"] = fold.held_out;
    f["rank"] = fold.rank;
    f["fold_auc"] = fold.auc;
    folds_json.push_back(std::move(f));
  }
  obj["folds"] = std::move(folds_json);
  obj["mrr"] = mrr;
  obj["inv_mrr"] = inv_mrr;
  obj["mean_auc"] = mean_auc;
  return obj.dump(2);
}

}  // namespace commrec
