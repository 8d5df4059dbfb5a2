#include "farmvoice/service/jobs.hpp"

#include <iostream>

namespace fv::service {

WorkerPool::WorkerPool(std::size_t threads, std::function<bool()> step, std::chrono::milliseconds poll)
    : step_(std::move(step)), poll_(poll) {
  threads_.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) {
    threads_.emplace_back([this](std::stop_token st) { loop(st); });
  }
}

WorkerPool::~WorkerPool() { stop(); }

void WorkerPool::notify() { wake_.notify_all(); }

void WorkerPool::stop() {
  for (auto& t : threads_) t.request_stop();
  wake_.notify_all();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  threads_.clear();
}

void WorkerPool::loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    bool worked = false;
    try {
      worked = step_();
    } catch (const std::exception& e) {
      std::cerr << "worker: " << e.what() << '\n';
    }
    if (worked) continue;
    std::unique_lock lock(mutex_);
    wake_.wait_for(lock, stop, poll_, [] { return false; });
  }
}

}  // namespace fv::service
