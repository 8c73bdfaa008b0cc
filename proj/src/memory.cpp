#include "d4m/memory.hpp"

#include <algorithm>
#include <string>

#include "d4m/error.hpp"

namespace d4m {

bool MemoryBudget::try_charge(std::size_t bytes) {
  std::lock_guard lock(mu_);
  if (cap_ != 0 && used_ + bytes > cap_) return false;
  used_ += bytes;
  peak_ = std::max(peak_, used_);
  return true;
}

void MemoryBudget::charge(std::size_t bytes) {
  if (!try_charge(bytes)) {
    fail(ErrorCode::kMemoryCap, "logical memory cap of " + std::to_string(cap_) +
                                    " bytes exceeded (in use " + std::to_string(in_use()) +
                                    ", requested " + std::to_string(bytes) + ")");
  }
}

void MemoryBudget::release(std::size_t bytes) noexcept {
  std::lock_guard lock(mu_);
  used_ -= std::min(bytes, used_);
}

std::size_t MemoryBudget::in_use() const {
  std::lock_guard lock(mu_);
  return used_;
}

std::size_t MemoryBudget::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

}  // namespace d4m
