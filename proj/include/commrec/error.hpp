#ifndef COMMREC_ERROR_HPP_
#define COMMREC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace commrec {

// Error categories surfaced through the C API as status codes.
enum class Errc {
  io_error = 1,
  malformed_line,
  duplicate_user,
  empty_corpus,
  zero_embedding,
  insufficient_corpus,
  init_mismatch,
  degenerate_labels,
  dimension_mismatch,
  empty_index,
  corrupt_index,
  matrix_mismatch,
  invalid_cluster_count,
  member_missing,
  empty_input,
  config_invalid,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace commrec

#endif  // COMMREC_ERROR_HPP_
