#pragma once

#include <cstddef>
#include <string>

namespace cddlint {

/// Half-open byte range [byte_start, byte_end) in one file, with 1-based line numbers.
struct SourceSpan {
  std::string file_path;
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  int line_start = 1;
  int line_end = 1;

  std::size_t length() const { return byte_end - byte_start; }
  bool empty() const { return byte_start == byte_end; }

  bool contains(std::size_t byte) const { return byte >= byte_start && byte < byte_end; }
  bool contains(const SourceSpan& other) const {
    return other.byte_start >= byte_start && other.byte_end <= byte_end;
  }

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

}  // namespace cddlint
