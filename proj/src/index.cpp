#include "rt/index.hpp"

#include <atomic>

namespace rt {

namespace {
std::atomic<std::uint64_t> next_id{1};
}

Index Index::fresh() {
  return Index(next_id.fetch_add(1, std::memory_order_relaxed), true);
}

std::vector<Index> Index::fresh_many(std::size_t n) {
  std::vector<Index> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(fresh());
  return out;
}

std::string Index::debug_string() const {
  return (variant_ ? "i" : "~i") + std::to_string(id_);
}

std::vector<Index> complement_all(const std::vector<Index>& idx) {
  std::vector<Index> out;
  out.reserve(idx.size());
  for (const auto& h : idx) out.push_back(~h);
  return out;
}

}  // namespace rt
