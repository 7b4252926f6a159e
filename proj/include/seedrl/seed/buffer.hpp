#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/envs/transition.hpp"
#include "seedrl/seed/agent_seed.hpp"

namespace seedrl::seed {

class SharedBuffer;

// Consistent view of the buffer at snapshot time. In unbounded mode this is a
// zero-copy view (entries are immutable once published); in capped mode it is
// a copy taken under the writer lock, because slots get overwritten.
class BufferSnapshot {
 public:
  BufferSnapshot() = default;
  int64_t size() const { return size_; }
  const envs::Transition& operator[](int64_t i) const;

 private:
  friend class SharedBuffer;
  const SharedBuffer* buf_ = nullptr;
  int64_t size_ = 0;
  std::shared_ptr<std::vector<envs::Transition>> copy_;
};

// Append-ordered shared store. Writers serialize through a mutex; the size is
// published with release semantics after the entry is fully written, so
// concurrent readers never observe a partial transition. obs_index equals the
// global append order and keeps increasing even in capped mode.
class SharedBuffer {
 public:
  explicit SharedBuffer(int64_t capacity = 0);  // 0 = unbounded

  int64_t capacity() const { return capacity_; }
  int64_t size() const { return std::min(size_.load(std::memory_order_acquire), cap_limit()); }
  int64_t total_appended() const { return size_.load(std::memory_order_acquire); }

  // Returns the assigned obs_index. Below capacity (or unbounded) this is a
  // plain append; at capacity the writer's overwrite permutation picks the
  // replaced slot.
  int64_t append(const envs::Transition& t, AgentSeed* writer = nullptr);

  BufferSnapshot snapshot() const;

 private:
  friend class BufferSnapshot;
  static constexpr int kChunkShift = 13;
  static constexpr int64_t kChunkSize = int64_t{1} << kChunkShift;
  static constexpr int64_t kMaxChunks = 1 << 16;

  int64_t cap_limit() const { return capacity_ > 0 ? capacity_ : kMaxChunks * kChunkSize; }
  const envs::Transition& slot(int64_t i) const;
  envs::Transition& slot_mut(int64_t i);

  int64_t capacity_;
  std::vector<std::unique_ptr<envs::Transition[]>> chunks_;
  std::atomic<int64_t> size_{0};  // total appended
  mutable std::mutex mu_;
};

int64_t buffer_append(SharedBuffer& buf, const envs::Transition& t, AgentSeed* writer = nullptr);

}  // namespace seedrl::seed
