#pragma once

#include <atomic>
#include <barrier>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace difuser {

// In-process stand-in for a device communicator: mu participating threads,
// rank 0 is root. Reductions run over a binomial tree with a fixed
// summation order, so floating-point results are bit-reproducible for a
// given mu. Traffic counters account elements the way a wire would see
// them: a reduce moves every non-root element once, a broadcast delivers
// len elements to each non-root rank.
//
// Payloads are copied through group-owned per-rank mailboxes: peers never
// dereference another thread's stack, so a rank that leaves after a failure
// cannot leave dangling pointers behind, only stale values, and the run is
// aborted in that case anyway.
class CollectiveGroup {
 public:
  explicit CollectiveGroup(uint32_t mu);

  uint32_t size() const { return mu_; }

  // Plain synchronization point; counted once per call site.
  void barrier(uint32_t rank);

  // Elementwise sum into rank 0's buffer. Every rank passes a span of equal
  // length; a mismatch throws on all live ranks at once.
  void reduce_to_root(uint32_t rank, std::span<double> data);

  // Copy root's buffer into every rank's buffer.
  void broadcast(uint32_t rank, std::span<double> data, uint32_t root = 0);
  void broadcast(uint32_t rank, std::span<uint64_t> data, uint32_t root = 0);

  // reduce_to_root + broadcast of the result; every rank returns the sum.
  double allreduce(uint32_t rank, double value);
  uint64_t allreduce(uint32_t rank, uint64_t value);

  // Permanently withdraw a failed rank so the survivors are never stranded
  // at a barrier. Call at most once, after the rank's last collective.
  void leave(uint32_t rank);

  struct Counters {
    uint64_t reduced_elements = 0;
    uint64_t broadcast_elements = 0;
    uint64_t barriers = 0;
  };
  // Valid once the worker threads have quiesced (counters are written by
  // rank 0 only).
  const Counters& counters() const { return counters_; }

 private:
  bool alive(uint32_t rank) const {
    return alive_[rank].load(std::memory_order_relaxed) != 0;
  }
  template <class T>
  void publish(uint32_t rank, std::span<const T> data);
  template <class T>
  T* box(uint32_t rank) {
    return reinterpret_cast<T*>(box_[rank].data());
  }
  void check_lengths(size_t expect);
  template <class T>
  void broadcast_impl(uint32_t rank, std::span<T> data, uint32_t root);

  uint32_t mu_;
  std::barrier<> bar_;
  std::vector<std::vector<uint8_t>> box_;
  std::vector<size_t> len_;
  std::unique_ptr<std::atomic<uint8_t>[]> alive_;
  Counters counters_;
};

}  // namespace difuser
