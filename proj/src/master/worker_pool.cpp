#include "cosim/master.hpp"

namespace cosim {

WorkerPool::WorkerPool(std::size_t threads) {
    for (std::size_t i = 0; i < threads; ++i) threads_.emplace_back([this] { work(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::run(std::size_t count, const std::function<void(std::size_t)>& job) {
    if (count == 0) return;
    if (threads_.empty()) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::unique_lock lock(mutex_);
    job_ = &job;
    count_ = count;
    next_ = 0;
    finished_ = 0;
    error_ = nullptr;
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [&] { return finished_ == count_; });
    job_ = nullptr;
    if (error_) std::rethrow_exception(error_);
}

void WorkerPool::work() {
    std::size_t seen = 0;
    std::unique_lock lock(mutex_);
    for (;;) {
        wake_.wait(lock, [&] { return stop_ || (generation_ != seen && next_ < count_); });
        if (stop_) return;
        while (job_ != nullptr && next_ < count_) {
            const auto i = next_++;
            const auto* job = job_;
            lock.unlock();
            std::exception_ptr error;
            try {
                (*job)(i);
            } catch (...) {
                error = std::current_exception();
            }
            lock.lock();
            if (error && !error_) error_ = error;
            if (++finished_ == count_) done_.notify_all();
        }
        seen = generation_;
    }
}

}  // namespace cosim
