#include "seedrl/seed/buffer.hpp"

namespace seedrl::seed {

const envs::Transition& BufferSnapshot::operator[](int64_t i) const {
  if (copy_) return (*copy_)[i];
  return buf_->slot(i);
}

SharedBuffer::SharedBuffer(int64_t capacity) : capacity_(capacity) {
  require(capacity >= 0, "SharedBuffer: negative capacity");
  // The chunk table never reallocates, so readers can hold raw views.
  chunks_.resize(kMaxChunks);
}

const envs::Transition& SharedBuffer::slot(int64_t i) const {
  return chunks_[i >> kChunkShift][i & (kChunkSize - 1)];
}

envs::Transition& SharedBuffer::slot_mut(int64_t i) {
  return chunks_[i >> kChunkShift][i & (kChunkSize - 1)];
}

int64_t SharedBuffer::append(const envs::Transition& t, AgentSeed* writer) {
  std::lock_guard<std::mutex> lock(mu_);
  const int64_t idx = size_.load(std::memory_order_relaxed);
  int64_t pos = idx;
  if (capacity_ > 0 && idx >= capacity_) {
    require(writer != nullptr, "SharedBuffer: capped append needs the writer's seed");
    pos = writer->next_overwrite_slot(capacity_);
    require(pos >= 0 && pos < capacity_, "SharedBuffer: overwrite slot out of range");
  }
  const int64_t chunk = pos >> kChunkShift;
  require(chunk < kMaxChunks, "SharedBuffer: capacity of the chunk table exhausted");
  if (!chunks_[chunk]) chunks_[chunk] = std::make_unique<envs::Transition[]>(kChunkSize);
  envs::Transition& dst = slot_mut(pos);
  dst = t;
  dst.obs_index = idx;
  size_.store(idx + 1, std::memory_order_release);
  return idx;
}

BufferSnapshot SharedBuffer::snapshot() const {
  BufferSnapshot s;
  if (capacity_ == 0) {
    s.buf_ = this;
    s.size_ = size_.load(std::memory_order_acquire);
    return s;
  }
  std::lock_guard<std::mutex> lock(mu_);
  const int64_t live = std::min(size_.load(std::memory_order_relaxed), capacity_);
  s.copy_ = std::make_shared<std::vector<envs::Transition>>();
  s.copy_->reserve(live);
  for (int64_t i = 0; i < live; ++i) s.copy_->push_back(slot(i));
  s.size_ = live;
  return s;
}

int64_t buffer_append(SharedBuffer& buf, const envs::Transition& t, AgentSeed* writer) {
  return buf.append(t, writer);
}

}  // namespace seedrl::seed
