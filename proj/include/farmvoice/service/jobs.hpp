#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fv::service {

/// Bounded pool of threads repeatedly calling `step`. A step returning
/// false means no work was ready; the thread then sleeps until notify()
/// or the poll interval elapses. stop() lets in-flight steps finish.
class WorkerPool {
 public:
  WorkerPool(std::size_t threads, std::function<bool()> step,
             std::chrono::milliseconds poll = std::chrono::milliseconds(200));
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void notify();
  void stop();

 private:
  void loop(std::stop_token stop);

  std::function<bool()> step_;
  std::chrono::milliseconds poll_;
  std::mutex mutex_;
  std::condition_variable_any wake_;
  std::vector<std::jthread> threads_;
};

}  // namespace fv::service
