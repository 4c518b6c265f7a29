#include "difuser/collectives.hpp"

#include <cstring>
#include <stdexcept>

namespace difuser {

CollectiveGroup::CollectiveGroup(uint32_t mu)
    : mu_(mu),
      bar_(mu),
      box_(mu),
      len_(mu, 0),
      alive_(new std::atomic<uint8_t>[mu]) {
  if (mu == 0) throw std::invalid_argument("CollectiveGroup: mu must be >= 1");
  for (uint32_t r = 0; r < mu; ++r) alive_[r].store(1);
}

void CollectiveGroup::barrier(uint32_t rank) {
  if (rank == 0) counters_.barriers++;
  bar_.arrive_and_wait();
}

void CollectiveGroup::leave(uint32_t rank) {
  alive_[rank].store(0);
  bar_.arrive_and_drop();
}

template <class T>
void CollectiveGroup::publish(uint32_t rank, std::span<const T> data) {
  auto& b = box_[rank];
  b.resize(data.size_bytes());
  std::memcpy(b.data(), data.data(), data.size_bytes());
  len_[rank] = data.size();
}

void CollectiveGroup::check_lengths(size_t expect) {
  // Length checks skip withdrawn ranks; among live ranks the view is
  // identical, so either all of them throw here or none does.
  for (uint32_t r = 0; r < mu_; ++r)
    if (alive(r) && len_[r] != expect)
      throw std::invalid_argument("collective: length mismatch");
}

void CollectiveGroup::reduce_to_root(uint32_t rank, std::span<double> data) {
  publish<double>(rank, data);
  barrier(rank);
  check_lengths(data.size());

  // Binomial tree: level k folds rank + 2^k into rank for ranks aligned to
  // 2^(k+1). Fixed pairing and order make double sums bit-reproducible.
  for (uint32_t step = 1; step < mu_; step <<= 1) {
    uint32_t partner = rank + step;
    if (rank % (2 * step) == 0 && partner < mu_ && alive(partner)) {
      double* dst = box<double>(rank);
      const double* src = box<double>(partner);
      for (size_t i = 0; i < data.size(); ++i) dst[i] += src[i];
    }
    barrier(rank);
  }
  if (rank == 0) {
    std::memcpy(data.data(), box<double>(0), data.size_bytes());
    counters_.reduced_elements += data.size() * (mu_ - 1);
  }
}

template <class T>
void CollectiveGroup::broadcast_impl(uint32_t rank, std::span<T> data,
                                     uint32_t root) {
  if (root >= mu_) throw std::invalid_argument("broadcast: bad root");
  publish<T>(rank, std::span<const T>(data.data(), data.size()));
  barrier(rank);
  check_lengths(data.size());
  if (rank != root && alive(root))
    std::memcpy(data.data(), box_[root].data(), data.size_bytes());
  barrier(rank);
  if (rank == 0) counters_.broadcast_elements += data.size() * (mu_ - 1);
}

void CollectiveGroup::broadcast(uint32_t rank, std::span<double> data,
                                uint32_t root) {
  broadcast_impl(rank, data, root);
}

void CollectiveGroup::broadcast(uint32_t rank, std::span<uint64_t> data,
                                uint32_t root) {
  broadcast_impl(rank, data, root);
}

double CollectiveGroup::allreduce(uint32_t rank, double value) {
  double buf = value;
  reduce_to_root(rank, std::span<double>(&buf, 1));
  broadcast(rank, std::span<double>(&buf, 1), 0);
  return buf;
}

uint64_t CollectiveGroup::allreduce(uint32_t rank, uint64_t value) {
  // Integer sums are order-insensitive, so a flat root-side fold is enough;
  // the tree exists for reproducible floating point.
  uint64_t v = value;
  publish<uint64_t>(rank, std::span<const uint64_t>(&v, 1));
  barrier(rank);
  check_lengths(1);
  uint64_t total = 0;
  if (rank == 0) {
    for (uint32_t r = 0; r < mu_; ++r)
      if (alive(r)) total += *box<uint64_t>(r);
    counters_.reduced_elements += mu_ - 1;
  }
  barrier(rank);
  std::span<uint64_t> s(&total, 1);
  broadcast(rank, s, 0);
  return total;
}

}  // namespace difuser
