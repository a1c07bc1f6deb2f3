#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace sst {

/// A UTC instant with one-second resolution.
struct Instant {
  std::int64_t seconds = 0;  // since 1970-01-01T00:00:00Z

  friend auto operator<=>(const Instant&, const Instant&) = default;
};

inline constexpr Instant kEarliestInstant{946684800};  // 2000-01-01T00:00:00Z

namespace detail {

inline std::optional<int> parse_fixed(std::string_view s, std::size_t pos,
                                      std::size_t width) {
  if (pos + width > s.size()) return std::nullopt;
  int v = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace detail

/// Parses "YYYY-MM-DD[T ]HH:MM:SS[.fraction][Z|+HH:MM|-HH:MM|+HHMM]" or a
/// bare "YYYY-MM-DD" (midnight). A missing zone designator means UTC.
/// Fractional seconds are truncated.
inline std::optional<Instant> parse_iso8601(std::string_view s) {
  using namespace std::chrono;
  const auto Y = detail::parse_fixed(s, 0, 4);
  const auto M = detail::parse_fixed(s, 5, 2);
  const auto D = detail::parse_fixed(s, 8, 2);
  if (s.size() == 10) {
    if (!Y || !M || !D || s[4] != '-' || s[7] != '-') return std::nullopt;
    const year_month_day date{year{*Y}, month{static_cast<unsigned>(*M)}, day{static_cast<unsigned>(*D)}};
    if (!date.ok()) return std::nullopt;
    return Instant{static_cast<std::int64_t>(sys_days{date}.time_since_epoch().count()) * 86400};
  }
  const auto h = detail::parse_fixed(s, 11, 2);
  const auto m = detail::parse_fixed(s, 14, 2);
  const auto sec = detail::parse_fixed(s, 17, 2);
  if (!Y || !M || !D || !h || !m || !sec) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    return std::nullopt;
  if (*h > 23 || *m > 59 || *sec > 59) return std::nullopt;
  const year_month_day ymd{year{*Y}, month{static_cast<unsigned>(*M)},
                           day{static_cast<unsigned>(*D)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }
  std::int64_t offset = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '+' ? 1 : -1;
      const auto oh = detail::parse_fixed(s, pos + 1, 2);
      if (!oh) return std::nullopt;
      std::size_t mpos = pos + 3;
      if (mpos < s.size() && s[mpos] == ':') ++mpos;
      const auto om = detail::parse_fixed(s, mpos, 2);
      if (!om || *oh > 23 || *om > 59) return std::nullopt;
      offset = sign * (*oh * 3600 + *om * 60);
      pos = mpos + 2;
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;

  const auto days = sys_days{ymd}.time_since_epoch().count();
  return Instant{static_cast<std::int64_t>(days) * 86400 + *h * 3600 + *m * 60 +
                 *sec - offset};
}

inline std::string format_iso8601(Instant t) {
  using namespace std::chrono;
  std::int64_t days = t.seconds / 86400;
  std::int64_t rem = t.seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

/// Whole days elapsed from `from` to `to` (floor); negative spans clamp to 0.
inline std::int64_t whole_days_between(Instant from, Instant to) {
  if (to <= from) return 0;
  return (to.seconds - from.seconds) / 86400;
}

}  // namespace sst
