#ifndef COMMREC_SRC_BINIO_HPP_
#define COMMREC_SRC_BINIO_HPP_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "commrec/error.hpp"

namespace commrec::binio {

// Little-endian scalar append.
template <typename T>
void put(std::string& buf, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  buf.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

inline void put_string(std::string& buf, const std::string& s) {
  put<uint32_t>(buf, static_cast<uint32_t>(s.size()));
  buf.append(s);
}

class Reader {
 public:
  Reader(std::string data, Errc on_error, std::string context)
      : data_(std::move(data)), on_error_(on_error), context_(std::move(context)) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string() {
    auto len = get<uint32_t>();
    need(len);
    std::string s = data_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  void expect_magic(const char* magic) {
    need(4);
    if (data_.compare(pos_, 4, magic, 4) != 0) {
      fail(on_error_, context_ + ": bad magic, not a " + magic + " file");
    }
    pos_ += 4;
  }

  bool at_end() const { return pos_ == data_.size(); }
  size_t pos() const { return pos_; }
  const std::string& data() const { return data_; }

 private:
  std::string data_;
  size_t pos_ = 0;
  Errc on_error_;
  std::string context_;

  void need(size_t n) {
    if (pos_ + n > data_.size()) {
      fail(on_error_, context_ + ": truncated file");
    }
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::io_error, "read failed on " + path);
  return data;
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) fail(Errc::io_error, "write failed on " + path);
}

// CRC-64/XZ (ECMA-182 polynomial, reflected, init and xorout ~0).
uint64_t crc64(const void* data, size_t len);

}  // namespace commrec::binio

#endif  // COMMREC_SRC_BINIO_HPP_
