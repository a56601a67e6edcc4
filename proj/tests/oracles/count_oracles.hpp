#pragma once

// Direct-count references for c-TF-IDF weights and UMass pair terms.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// weight(t, c) = tf(t, c) * ln(1 + A / f(t)) evaluated by counting.
inline double ctfidf_weight(const std::map<int, std::vector<std::string>>& classes, int c, const std::string& t) {
  double total = 0, f = 0;
  for (const auto& [_, toks] : classes) {
    total += static_cast<double>(toks.size());
    f += static_cast<double>(std::count(toks.begin(), toks.end(), t));
  }
  const double a = total / static_cast<double>(classes.size());
  const auto& own = classes.at(c);
  const double tf = static_cast<double>(std::count(own.begin(), own.end(), t));
  return tf * std::log(1.0 + a / f);
}

inline long long doc_count(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& words) {
  long long n = 0;
  for (const auto& d : docs) {
    const std::set<std::string> s(d.begin(), d.end());
    bool all = true;
    for (const auto& w : words) all = all && s.count(w) > 0;
    n += all ? 1 : 0;
  }
  return n;
}

// ln((D(wi, wj) + 1) / D(wj)).
inline double umass_pair(const std::vector<std::vector<std::string>>& docs, const std::string& wi,
                         const std::string& wj) {
  return std::log(static_cast<double>(doc_count(docs, {wi, wj}) + 1) / static_cast<double>(doc_count(docs, {wj})));
}

}  // namespace oracle
