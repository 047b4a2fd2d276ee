#include "commrec/corpus.hpp"

#include <fstream>

#include "json.hpp"

#include "commrec/error.hpp"

namespace commrec {

namespace {

using nlohmann::json;

constexpr const char* kStripped = ".,!?;:\"()[]";

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_stripped_ascii(unsigned char c) {
  for (const char* p = kStripped; *p; ++p) {
    if (static_cast<unsigned char>(*p) == c) return true;
  }
  return false;
}

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::embed_train: return "embed-train";
    case Split::classifier_train: return "classifier-train";
    case Split::test: return "test";
  }
  return "embed-train";
}

Split parse_split(std::string_view name) {
  if (name == "embed-train") return Split::embed_train;
  if (name == "classifier-train") return Split::classifier_train;
  if (name == "test") return Split::test;
  fail(Errc::malformed_line, "unknown split tag '" + std::string(name) + "'");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      flush();
      continue;
    }
    // Guillemets are the only multi-byte characters in the stripped set.
    if (c == 0xC2 && i + 1 < text.size()) {
      auto next = static_cast<unsigned char>(text[i + 1]);
      if (next == 0xAB || next == 0xBB) {
        ++i;
        continue;
      }
    }
    if (is_stripped_ascii(c)) continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c + ('a' - 'A'));
    cur.push_back(static_cast<char>(c));
  }
  flush();
  return out;
}

std::vector<std::string> apply_bigrams(const std::vector<std::string>& tokens,
                                       const std::unordered_set<std::string>& accepted) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size() && !accepted.empty()) {
      std::string joined = tokens[i] + "_" + tokens[i + 1];
      if (accepted.count(joined)) {
        out.push_back(std::move(joined));
        i += 2;
        continue;
      }
    }
    out.push_back(tokens[i]);
    ++i;
  }
  return out;
}

void Corpus::add_user(UserDocument doc) {
  if (doc.user_id.empty()) fail(Errc::malformed_line, "empty user_id");
  auto [it, inserted] = by_id_.emplace(doc.user_id, users_.size());
  if (!inserted) fail(Errc::duplicate_user, "duplicate user_id '" + doc.user_id + "'");
  if (doc.tokens.size() != doc.posts.size()) {
    doc.tokens.clear();
    doc.tokens.reserve(doc.posts.size());
    for (const auto& post : doc.posts) doc.tokens.push_back(tokenize(post));
  }
  users_.push_back(std::move(doc));
}

const UserDocument* Corpus::find(std::string_view user_id) const {
  auto it = by_id_.find(std::string(user_id));
  return it == by_id_.end() ? nullptr : &users_[it->second];
}

std::vector<std::string> Corpus::split_ids(Split s) const {
  std::vector<std::string> ids;
  for (const auto& user : users_) {
    if (user.split == s) ids.push_back(user.user_id);
  }
  return ids;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open corpus file " + path);
  Corpus corpus;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      fail(Errc::malformed_line, "line " + std::to_string(line_no) + ": invalid JSON object");
    }
    if (!obj.contains("user_id") || !obj["user_id"].is_string()) {
      fail(Errc::malformed_line,
           "line " + std::to_string(line_no) + ": missing or non-string \"user_id\"");
    }
    if (!obj.contains("posts") || !obj["posts"].is_array()) {
      fail(Errc::malformed_line,
           "line " + std::to_string(line_no) + ": missing or non-array \"posts\"");
    }
    UserDocument doc;
    doc.user_id = obj["user_id"].get<std::string>();
    if (doc.user_id.empty()) {
      fail(Errc::malformed_line, "line " + std::to_string(line_no) + ": empty user_id");
    }
    for (const auto& post : obj["posts"]) {
      if (!post.is_string()) {
        fail(Errc::malformed_line,
             "line " + std::to_string(line_no) + ": \"posts\" entries must be strings");
      }
      doc.posts.push_back(post.get<std::string>());
    }
    if (obj.contains("split")) {
      if (!obj["split"].is_string()) {
        fail(Errc::malformed_line, "line " + std::to_string(line_no) + ": non-string \"split\"");
      }
      try {
        doc.split = parse_split(obj["split"].get<std::string>());
      } catch (const Error& e) {
        fail(Errc::malformed_line, "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    try {
      corpus.add_user(std::move(doc));
    } catch (const Error& e) {
      if (e.code() == Errc::duplicate_user) {
        fail(Errc::duplicate_user, "line " + std::to_string(line_no) + ": " + e.what());
      }
      throw;
    }
  }
  if (in.bad()) fail(Errc::io_error, "read failed on " + path);
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  for (const auto& user : corpus.users()) {
    json obj;
    obj["user_id"] = user.user_id;
    obj["posts"] = user.posts;
    obj["split"] = split_name(user.split);
    out << obj.dump() << '\n';
  }
  if (!out) fail(Errc::io_error, "write failed on " + path);
}

}  // namespace commrec
