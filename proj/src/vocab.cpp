#include "commrec/vocab.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "commrec/error.hpp"

namespace commrec {

double score_bigram(int64_t count_ab, int64_t count_a, int64_t count_b,
                    int64_t total_tokens, int64_t delta) {
  return static_cast<double>(count_ab - delta) * static_cast<double>(total_tokens) /
         (static_cast<double>(count_a) * static_cast<double>(count_b));
}

void Vocabulary::finalize(std::vector<Entry> entries, int64_t total) {
  entries_ = std::move(entries);
  total_tokens_ = total;
  ids_.clear();
  ids_.reserve(entries_.size());
  accepted_bigrams_.clear();
  for (size_t i = 0; i < entries_.size(); ++i) {
    ids_.emplace(entries_[i].token, static_cast<int64_t>(i));
    // The on-disk format marks bigrams by the underscore join, so the
    // in-memory set uses the same rule: any entry containing '_' acts as an
    // accepted bigram for later joining.
    if (entries_[i].token.find('_') != std::string::npos) {
      accepted_bigrams_.insert(entries_[i].token);
    }
  }
}

Vocabulary Vocabulary::build(const Corpus& corpus, const VocabConfig& cfg) {
  if (corpus.users().empty()) fail(Errc::empty_corpus, "corpus has no users");
  if (cfg.max_size < 0) fail(Errc::config_invalid, "max_size must be non-negative");

  // Unigram pass.
  std::unordered_map<std::string, int64_t> uni;
  int64_t total = 0;
  for (const auto& user : corpus.users()) {
    for (const auto& post : user.tokens) {
      for (const auto& tok : post) {
        ++uni[tok];
        ++total;
      }
    }
  }

  // Adjacent-pair counts within each post; both components must already meet
  // min_count.
  std::unordered_map<std::string, int64_t> pair_counts;
  if (total >= 1) {
    for (const auto& user : corpus.users()) {
      for (const auto& post : user.tokens) {
        for (size_t i = 0; i + 1 < post.size(); ++i) {
          if (uni[post[i]] < cfg.min_count || uni[post[i + 1]] < cfg.min_count) continue;
          std::string key = post[i];
          key.push_back('\x1f');
          key.append(post[i + 1]);
          ++pair_counts[key];
        }
      }
    }
  }

  std::unordered_set<std::string> accepted;
  for (const auto& [key, count_ab] : pair_counts) {
    size_t sep = key.find('\x1f');
    std::string a = key.substr(0, sep);
    std::string b = key.substr(sep + 1);
    double s = score_bigram(count_ab, uni[a], uni[b], total, cfg.delta);
    if (s > cfg.theta) accepted.insert(a + "_" + b);
  }

  // Re-count with the accepted bigrams applied.
  std::unordered_map<std::string, int64_t> counts;
  int64_t joined_total = 0;
  for (const auto& user : corpus.users()) {
    for (const auto& post : user.tokens) {
      for (auto& tok : apply_bigrams(post, accepted)) {
        ++counts[std::move(tok)];
        ++joined_total;
      }
    }
  }

  std::vector<Entry> kept;
  kept.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= cfg.min_count) kept.push_back({token, count});
  }
  std::sort(kept.begin(), kept.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.token < b.token;
  });
  if (kept.size() > static_cast<size_t>(cfg.max_size)) {
    kept.resize(static_cast<size_t>(cfg.max_size));
  }

  Vocabulary vocab;
  vocab.finalize(std::move(kept), joined_total);
  return vocab;
}

std::optional<int64_t> Vocabulary::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

uint64_t Vocabulary::hash() const {
  constexpr uint64_t offset = 0xcbf29ce484222325ULL;
  constexpr uint64_t prime = 0x100000001b3ULL;
  uint64_t h = offset;
  auto mix_bytes = [&h](const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= prime;
    }
  };
  int64_t total = total_tokens_;
  mix_bytes(&total, sizeof(total));
  for (size_t i = 0; i < entries_.size(); ++i) {
    mix_bytes(entries_[i].token.data(), entries_[i].token.size());
    unsigned char zero = 0;
    mix_bytes(&zero, 1);
    auto id = static_cast<int64_t>(i);
    mix_bytes(&id, sizeof(id));
    mix_bytes(&entries_[i].count, sizeof(entries_[i].count));
  }
  return h;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << "#total_tokens=" << total_tokens_ << '\n';
  for (size_t i = 0; i < entries_.size(); ++i) {
    out << entries_[i].token << '\t' << i << '\t' << entries_[i].count << '\n';
  }
  if (!out) fail(Errc::io_error, "write failed on " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open vocabulary file " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#total_tokens=", 0) != 0) {
    fail(Errc::malformed_line, path + ": missing #total_tokens header");
  }
  int64_t total = 0;
  {
    std::string_view v = std::string_view(line).substr(14);
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), total);
    if (ec != std::errc() || p != v.data() + v.size()) {
      fail(Errc::malformed_line, path + ": bad #total_tokens header");
    }
  }
  struct Row {
    std::string token;
    int64_t id;
    int64_t count;
  };
  std::vector<Row> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      fail(Errc::malformed_line, path + " line " + std::to_string(line_no) + ": expected 3 columns");
    }
    Row row;
    row.token = line.substr(0, t1);
    auto parse_int = [&](size_t from, size_t to, int64_t& out_val) {
      auto [p, ec] = std::from_chars(line.data() + from, line.data() + to, out_val);
      if (ec != std::errc() || p != line.data() + to) {
        fail(Errc::malformed_line, path + " line " + std::to_string(line_no) + ": bad integer");
      }
    };
    parse_int(t1 + 1, t2, row.id);
    parse_int(t2 + 1, line.size(), row.count);
    if (row.token.empty()) {
      fail(Errc::malformed_line, path + " line " + std::to_string(line_no) + ": empty token");
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) fail(Errc::io_error, "read failed on " + path);

  std::vector<Entry> entries(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (auto& row : rows) {
    if (row.id < 0 || row.id >= static_cast<int64_t>(rows.size()) || seen[static_cast<size_t>(row.id)]) {
      fail(Errc::malformed_line, path + ": token ids must be dense and unique");
    }
    seen[static_cast<size_t>(row.id)] = true;
    entries[static_cast<size_t>(row.id)] = {std::move(row.token), row.count};
  }
  Vocabulary vocab;
  vocab.finalize(std::move(entries), total);
  return vocab;
}

}  // namespace commrec
