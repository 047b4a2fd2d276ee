#include "commrec/error.hpp"

namespace commrec {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::io_error: return "IoError";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::duplicate_user: return "DuplicateUser";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::zero_embedding: return "ZeroEmbedding";
    case Errc::insufficient_corpus: return "InsufficientCorpus";
    case Errc::init_mismatch: return "InitMismatch";
    case Errc::degenerate_labels: return "DegenerateLabels";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_index: return "EmptyIndex";
    case Errc::corrupt_index: return "CorruptIndex";
    case Errc::matrix_mismatch: return "MatrixMismatch";
    case Errc::invalid_cluster_count: return "InvalidClusterCount";
    case Errc::member_missing: return "MemberMissing";
    case Errc::empty_input: return "EmptyInput";
    case Errc::config_invalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace commrec
