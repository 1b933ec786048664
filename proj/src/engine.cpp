#include "itfs/engine.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace itfs {

struct WorkerPool::Shared {
    std::mutex mu;
    std::condition_variable work_ready;
    std::condition_variable work_done;
    std::uint64_t generation = 0;
    bool stop = false;

    // Current batch.
    std::size_t count = 0;
    const std::function<void(std::size_t)>* fn = nullptr;
    std::atomic<std::size_t> next{0};
    std::size_t active = 0;
    std::vector<std::exception_ptr>* errors = nullptr;

    std::vector<std::thread> threads;

    // Batches arrive back to back during a selection run; a short spin
    // before sleeping skips most wakeup latency.
    bool spin_for_work(std::uint64_t seen) const {
        for (int i = 0; i < 4000; ++i) {
            if (generation_hint.load(std::memory_order_acquire) != seen) return true;
            if (stop_hint.load(std::memory_order_relaxed)) return true;
        }
        return false;
    }

    std::atomic<std::uint64_t> generation_hint{0};
    std::atomic<bool> stop_hint{false};

    void worker() {
        std::uint64_t seen = 0;
        for (;;) {
            spin_for_work(seen);
            std::unique_lock lock(mu);
            work_ready.wait(lock, [&] { return stop || generation != seen; });
            if (stop) return;
            seen = generation;
            const std::size_t batch_count = count;
            const auto* batch_fn = fn;
            auto* batch_errors = errors;
            lock.unlock();

            // Every index runs even if an earlier one failed, so the error
            // that surfaces is always the lowest-index one.
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= batch_count) break;
                try {
                    (*batch_fn)(i);
                } catch (...) {
                    (*batch_errors)[i] = std::current_exception();
                }
            }

            lock.lock();
            if (--active == 0) work_done.notify_all();
        }
    }
};

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers == 0 ? 1 : workers) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t nthreads = std::min(workers_, static_cast<std::size_t>(hw == 0 ? 1 : hw));
    if (nthreads < 2) return;
    shared_ = std::make_unique<Shared>();
    for (std::size_t t = 0; t < nthreads; ++t)
        shared_->threads.emplace_back([s = shared_.get()] { s->worker(); });
}

WorkerPool::~WorkerPool() {
    if (!shared_) return;
    {
        std::lock_guard lock(shared_->mu);
        shared_->stop = true;
        shared_->stop_hint.store(true, std::memory_order_relaxed);
    }
    shared_->work_ready.notify_all();
    for (auto& t : shared_->threads) t.join();
}

void WorkerPool::run_indexed(std::size_t count,
                             const std::function<void(std::size_t)>& fn) const {
    if (count == 0) return;
    if (!shared_ || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(count);
    Shared& s = *shared_;
    {
        std::lock_guard lock(s.mu);
        s.count = count;
        s.fn = &fn;
        s.errors = &errors;
        s.next.store(0, std::memory_order_relaxed);
        s.active = s.threads.size();
        ++s.generation;
        s.generation_hint.store(s.generation, std::memory_order_release);
    }
    s.work_ready.notify_all();

    {
        std::unique_lock lock(s.mu);
        s.work_done.wait(lock, [&] { return s.active == 0; });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace itfs
