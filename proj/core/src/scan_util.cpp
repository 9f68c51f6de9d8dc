#include "scan_util.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace prosparse::detail {

ComplexVec cyclic_slice(const ComplexVec& v, Index start, Index len) {
  const Index n = v.size();
  ComplexVec out(len);
  for (Index i = 0; i < len; ++i) out[i] = v[(start + i) % n];
  return out;
}

void parallel_for(Index count, int thread_count, const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  const int workers = std::min<Index>(std::max(1, thread_count), count);
  if (workers == 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace prosparse::detail
