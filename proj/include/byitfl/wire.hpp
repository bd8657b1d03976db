#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "byitfl/field.hpp"

namespace byitfl {

struct WireError : std::runtime_error {
  explicit WireError(const std::string& why)
      : std::runtime_error("wire: " + why) {}
};

// Length-prefixed binary encoding.  Field elements are serialized as the
// minimal big-endian byte string of the residue.
class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i)
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i)
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

  void bytes(const std::vector<std::uint8_t>& b) {
    u32(static_cast<std::uint32_t>(b.size()));
    buf_.insert(buf_.end(), b.begin(), b.end());
  }

  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  void fe(const FieldElement& e) {
    std::size_t count = (mpz_sizeinbase(e.value().get_mpz_t(), 2) + 7) / 8;
    std::vector<std::uint8_t> out(count);
    if (count > 0)
      mpz_export(out.data(), &count, 1, 1, 1, 0, e.value().get_mpz_t());
    out.resize(e.value() == 0 ? 0 : count);
    bytes(out);
  }

  void fe_list(const std::vector<FieldElement>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (const auto& e : v) fe(e);
  }

  const std::vector<std::uint8_t>& data() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | buf_[pos_++];
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | buf_[pos_++];
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  std::vector<std::uint8_t> bytes() {
    std::uint32_t len = u32();
    need(len);
    std::vector<std::uint8_t> out(buf_.begin() + pos_,
                                  buf_.begin() + pos_ + len);
    pos_ += len;
    return out;
  }

  std::string str() {
    auto b = bytes();
    return std::string(b.begin(), b.end());
  }

  FieldElement fe(const Field& f) {
    auto b = bytes();
    mpz_class v = 0;
    if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    if (v >= f.prime()) throw WireError("residue out of range");
    return f.from_int(v);
  }

  std::vector<FieldElement> fe_list(const Field& f) {
    std::uint32_t n = u32();
    std::vector<FieldElement> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(fe(f));
    return out;
  }

  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > buf_.size()) throw WireError("truncated message");
  }
  const std::vector<std::uint8_t>& buf_;
  std::size_t pos_ = 0;
};

}  // namespace byitfl
