#pragma once

#include <cstddef>
#include <mutex>
#include <string_view>

namespace d4m {

// Logical memory accounting. Engines charge the bytes of the entries they
// hold and release them when done; exceeding the cap raises
// ErrorCode::kMemoryCap. A cap of zero means unlimited.
class MemoryBudget {
 public:
  explicit MemoryBudget(std::size_t cap_bytes = 0) : cap_(cap_bytes) {}

  MemoryBudget(const MemoryBudget&) = delete;
  MemoryBudget& operator=(const MemoryBudget&) = delete;

  void charge(std::size_t bytes);
  // Like charge, but reports failure instead of throwing.
  bool try_charge(std::size_t bytes);
  void release(std::size_t bytes) noexcept;

  std::size_t cap() const noexcept { return cap_; }
  std::size_t in_use() const;
  std::size_t peak() const;

 private:
  std::size_t cap_;
  mutable std::mutex mu_;
  std::size_t used_ = 0;
  std::size_t peak_ = 0;
};

// Accounting size of one (row, col, value) cell.
inline std::size_t entry_bytes(std::string_view row, std::string_view col,
                               std::size_t value_bytes) noexcept {
  return row.size() + col.size() + value_bytes;
}

inline constexpr std::size_t kNumValueBytes = sizeof(double);

}  // namespace d4m
