#pragma once

// Shared fixtures for the test suites: record builders, hand-rolled random
// generators, brute-force oracles and scratch directories.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sst/sst.hpp"

namespace sst::testing {

inline RetweetRecord record(std::string id, std::string author, std::string text,
                            std::uint64_t retweets = 1, std::string retweeter = "r1") {
  RetweetRecord r;
  r.record_id = std::move(id);
  r.retweeter_id = std::move(retweeter);
  r.original_user_id = std::move(author);
  r.timestamp = Instant{1590000000};
  r.text = std::move(text);
  r.retweet_count = retweets;
  r.conspiracy_prob = 0.95;
  return r;
}

/// Corpus where each user authors `counts[user]` records of distinct tweets.
inline Corpus corpus_with_contributions(const std::map<std::string, std::size_t>& counts) {
  std::vector<RetweetRecord> recs;
  std::size_t serial = 0;
  for (const auto& [user, n] : counts)
    for (std::size_t i = 0; i < n; ++i)
      recs.push_back(record("x" + std::to_string(serial++), user, user + " tweet " + std::to_string(i),
                            i + 1));
  return build_corpus(std::move(recs), 0.9);
}

/// Random multiset of retweet counts, size in [0, max_size].
inline std::vector<std::uint64_t> random_counts(synth::Rng& rng, std::size_t max_size,
                                                std::uint64_t max_count) {
  std::vector<std::uint64_t> v(rng.below(max_size + 1));
  for (auto& x : v) x = rng.below(max_count + 1);
  return v;
}

/// Max h in [0, N] with at least h entries >= h, by scanning every candidate.
inline std::uint64_t brute_h_index(const std::vector<std::uint64_t>& counts) {
  std::uint64_t best = 0;
  for (std::uint64_t h = 0; h <= counts.size(); ++h) {
    std::uint64_t at_least = 0;
    for (auto c : counts) at_least += (c >= h);
    if (at_least >= h) best = h;
  }
  return best;
}

/// Max g in [0, N] whose g largest entries sum to >= g^2; every g tried and
/// the top-g sum rebuilt from scratch each time.
inline std::uint64_t brute_g_index(const std::vector<std::uint64_t>& counts) {
  std::uint64_t best = 0;
  for (std::uint64_t g = 0; g <= counts.size(); ++g) {
    std::vector<std::uint64_t> rest = counts;
    std::uint64_t sum = 0;
    for (std::uint64_t k = 0; k < g; ++k) {
      auto it = std::max_element(rest.begin(), rest.end());
      sum += *it;
      rest.erase(it);
    }
    if (sum >= g * g) best = g;
  }
  return best;
}

/// Remaining record counts after removing each prefix of `order`, by
/// re-scanning the record list for every prefix.
inline std::vector<std::size_t> brute_dismantle(const Corpus& c, const std::vector<std::string>& order) {
  std::vector<std::size_t> out;
  std::set<std::string> removed;
  for (std::size_t k = 0; k <= order.size(); ++k) {
    if (k > 0) removed.insert(order[k - 1]);
    std::size_t remaining = 0;
    for (const auto& r : c.records) remaining += !removed.count(r.original_user_id);
    out.push_back(remaining);
  }
  return out;
}

/// Random corpus with `users` original authors, a retweeter pool and
/// varying engagement; every author has at least one conspiracy record.
inline Corpus random_corpus(synth::Rng& rng, std::size_t users) {
  std::vector<RetweetRecord> recs;
  std::size_t serial = 0;
  for (std::size_t u = 0; u < users; ++u) {
    const std::string author = "u" + std::to_string(1000 + u);
    const std::size_t tweets = 1 + rng.below(6);
    for (std::size_t t = 0; t < tweets; ++t) {
      const std::size_t copies = 1 + rng.below(4);
      const std::uint64_t base = rng.below(50);
      for (std::size_t k = 0; k < copies; ++k) {
        RetweetRecord r = record("q" + std::to_string(serial++), author,
                                 "text " + std::to_string(t), base + rng.below(5),
                                 "a" + std::to_string(rng.below(users * 2)));
        r.reply_count = rng.below(20);
        r.like_count = rng.below(200);
        r.quote_count = rng.below(10);
        r.retweeter_followers = rng.below(100000);
        r.timestamp = Instant{1580000000 + static_cast<std::int64_t>(rng.below(200 * 86400))};
        r.conspiracy_prob = t == 0 ? 0.95 : 0.5;
        recs.push_back(std::move(r));
      }
    }
  }
  return build_corpus(std::move(recs), 0.9);
}

/// Midrank of each pooled value by direct counting.
inline std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<double> out;
  for (double v : pooled) {
    double less = 0;
    double equal = 0;
    for (double w : pooled) {
      less += w < v;
      equal += w == v;
    }
    out.push_back(less + (equal + 1) / 2);
  }
  return out;
}

inline double u_statistic(std::vector<double> xr, std::vector<double> yr) {
  std::sort(xr.begin(), xr.end());
  std::sort(yr.begin(), yr.end());
  double sx = 0;
  for (std::size_t i = 0; i < xr.size(); ++i) sx += (xr[i] - static_cast<double>(i + 1)) * (xr[i] - static_cast<double>(i + 1));
  double sy = 0;
  for (std::size_t j = 0; j < yr.size(); ++j) sy += (yr[j] - static_cast<double>(j + 1)) * (yr[j] - static_cast<double>(j + 1));
  return static_cast<double>(xr.size()) * sx + static_cast<double>(yr.size()) * sy;
}

inline double t_from_u(double u, double n, double m) {
  const double big = n + m;
  return u / (n * m * big) - (4 * m * n - 1) / (6 * big);
}

/// Exact permutation p-value by walking every bitmask with n bits set.
inline double brute_cvm_p(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled = xs;
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const auto r = midranks(pooled);
  const std::size_t total = pooled.size();
  const std::vector<double> xr(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(xs.size()));
  const std::vector<double> yr(r.begin() + static_cast<std::ptrdiff_t>(xs.size()), r.end());
  const double observed = u_statistic(xr, yr);
  std::uint64_t hits = 0;
  std::uint64_t all = 0;
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != xs.size()) continue;
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < total; ++i) ((mask >> i) & 1 ? a : b).push_back(r[i]);
    ++all;
    hits += u_statistic(a, b) >= observed;
  }
  return static_cast<double>(hits) / static_cast<double>(all);
}

/// T from the two empirical CDFs evaluated at every pooled point.
inline double ecdf_t(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled = xs;
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const double n = static_cast<double>(xs.size());
  const double m = static_cast<double>(ys.size());
  double sum = 0;
  for (double z : pooled) {
    double fx = 0;
    double fy = 0;
    for (double x : xs) fx += x <= z;
    for (double y : ys) fy += y <= z;
    sum += (fx / n - fy / m) * (fx / n - fy / m);
  }
  return n * m / ((n + m) * (n + m)) * sum;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("sst_test_" + tag + "_" + std::to_string(fnv1a64(tag + std::to_string(
                                                         reinterpret_cast<std::uintptr_t>(this)))));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& rel) const { return (path_ / rel).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary);
  out << data;
}

/// Every file under `root`, relative path -> bytes.
inline std::map<std::string, std::string> tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[std::filesystem::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

}  // namespace sst::testing
