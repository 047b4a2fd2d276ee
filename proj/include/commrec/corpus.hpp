#ifndef COMMREC_CORPUS_HPP_
#define COMMREC_CORPUS_HPP_

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace commrec {

enum class Split { embed_train, classifier_train, test };

const char* split_name(Split s);
Split parse_split(std::string_view name);  // throws Errc::malformed_line

struct UserDocument {
  std::string user_id;
  std::vector<std::string> posts;                // raw text, one entry per post
  std::vector<std::vector<std::string>> tokens;  // tokenize(post), bigrams not yet applied
  Split split = Split::embed_train;
};

class Corpus {
 public:
  Corpus() = default;

  // Throws Errc::duplicate_user on a repeated user_id. Tokenizes the posts.
  void add_user(UserDocument doc);

  const std::vector<UserDocument>& users() const { return users_; }
  const UserDocument* find(std::string_view user_id) const;
  size_t size() const { return users_.size(); }

  std::vector<std::string> split_ids(Split s) const;

 private:
  std::vector<UserDocument> users_;
  std::unordered_map<std::string, size_t> by_id_;
};

// Lower-cases ASCII letters, removes the punctuation set
// . , ! ? ; : " ( ) [ ] and the guillemets, then splits on whitespace.
// @ # _ ' / - pass through so usernames, hashtags, and URLs survive.
std::vector<std::string> tokenize(std::string_view text);

// Greedy left-to-right single pass; a token consumed by a bigram cannot start
// another bigram.
std::vector<std::string> apply_bigrams(const std::vector<std::string>& tokens,
                                       const std::unordered_set<std::string>& accepted);

// JSONL, one {"user_id", "posts", "split"?} object per line.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

}  // namespace commrec

#endif  // COMMREC_CORPUS_HPP_
