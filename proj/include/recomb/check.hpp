#pragma once

#include <string>
#include <utility>
#include <vector>

namespace recomb {

// Outcome of a self-check: a failing check is a bug report, not an exception.
struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
  void merge(const CheckReport& other) {
    ok = ok && other.ok;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  }
};

}  // namespace recomb
