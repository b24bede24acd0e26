#pragma once

// On-disk formats.
//
// Cache file (CSV, LF line endings, every line newline-terminated):
//
//     n,f,L
//     3,1,1
//     4,1,2
//     ...
//
// n is contiguous and strictly increasing. A header-only file is a valid,
// empty cache.
//
// b-file: one "n a(n)" pair per line, ascending n, single sequence.

#include <charconv>
#include <cstddef>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "binthr/exact.hpp"
#include "binthr/sequence.hpp"

namespace binthr {

inline constexpr std::string_view kCacheHeader = "n,f,L";

// Malformed or inconsistent cache contents.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_cache_rows(std::ostream& os, std::span<const SequenceRecord> records) {
  for (const auto& r : records) os << r.n << ',' << r.f << ',' << r.l << '\n';
}

inline void write_cache(std::ostream& os, std::span<const SequenceRecord> records) {
  os << kCacheHeader << '\n';
  write_cache_rows(os, records);
}

namespace detail {

inline bool parse_index(std::string_view text, Index& out) {
  if (text.empty() || text.front() == '-' || text.front() == '+') return false;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

// Splits `text` into lines, requiring a trailing '\n' after the last one.
inline std::vector<std::string_view> split_lines(std::string_view text, bool& terminated) {
  std::vector<std::string_view> lines;
  terminated = text.empty() || text.back() == '\n';
  std::size_t at = 0;
  while (at < text.size()) {
    const auto nl = text.find('\n', at);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(at));
      break;
    }
    lines.push_back(text.substr(at, nl - at));
    at = nl + 1;
  }
  return lines;
}

inline std::string read_all(std::istream& is) {
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace detail

// Parses and validates a cache. Beyond the per-row invariants, consecutive
// rows must step by 0 or 1 in each sequence.
inline std::vector<SequenceRecord> parse_cache(std::string_view text) {
  bool terminated = false;
  const auto lines = detail::split_lines(text, terminated);
  if (lines.empty() || lines.front() != kCacheHeader) {
    throw CacheError("cache: missing header '" + std::string(kCacheHeader) + "'");
  }
  if (!terminated) throw CacheError("cache: last line is not newline-terminated");

  std::vector<SequenceRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = lines[i];
    const auto where = "cache line " + std::to_string(i + 1);
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw CacheError(where + ": expected three comma-separated fields");
    }
    SequenceRecord r;
    if (!detail::parse_index(line.substr(0, c1), r.n) ||
        !detail::parse_index(line.substr(c1 + 1, c2 - c1 - 1), r.f) ||
        !detail::parse_index(line.substr(c2 + 1), r.l)) {
      throw CacheError(where + ": non-decimal field");
    }
    if (!satisfies_invariants(r)) throw CacheError(where + ": row violates 1 <= f <= L <= n/2, L-f <= 1");
    if (!records.empty()) {
      const auto& prev = records.back();
      if (r.n != prev.n + 1) throw CacheError(where + ": n is not contiguous");
      if (r.f - prev.f < 0 || r.f - prev.f > 1 || r.l - prev.l < 0 || r.l - prev.l > 1) {
        throw CacheError(where + ": step from previous row exceeds 1");
      }
    }
    records.push_back(r);
  }
  return records;
}

inline std::vector<SequenceRecord> read_cache(std::istream& is) {
  return parse_cache(detail::read_all(is));
}

struct BFileEntry {
  Index n = 0;
  Index value = 0;

  friend bool operator==(const BFileEntry&, const BFileEntry&) = default;
};

inline void write_bfile(std::ostream& os, std::span<const SequenceRecord> records, ThresholdKind kind) {
  for (const auto& r : records) os << r.n << ' ' << (kind == ThresholdKind::F ? r.f : r.l) << '\n';
}

// Accepts blank lines and '#' comments, as found in published b-files.
inline std::vector<BFileEntry> parse_bfile(std::string_view text) {
  bool terminated = false;
  const auto lines = detail::split_lines(text, terminated);
  std::vector<BFileEntry> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    const auto where = "b-file line " + std::to_string(i + 1);
    const auto sp = line.find(' ');
    BFileEntry e;
    if (sp == std::string_view::npos || !detail::parse_index(line.substr(0, sp), e.n) ||
        !detail::parse_index(line.substr(sp + 1), e.value)) {
      throw FormatError(where + ": expected 'n a(n)'");
    }
    if (!out.empty() && e.n <= out.back().n) throw FormatError(where + ": n not ascending");
    out.push_back(e);
  }
  return out;
}

inline std::vector<BFileEntry> read_bfile(std::istream& is) {
  return parse_bfile(detail::read_all(is));
}

}  // namespace binthr
