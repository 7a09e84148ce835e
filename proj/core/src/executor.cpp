#include "casimir/executor.hpp"

#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace casimir {
namespace {

std::atomic<std::size_t> g_default_workers{0};
thread_local bool tls_in_pool = false;

class PoolExecutor : public Executor {
 public:
  explicit PoolExecutor(std::size_t n) : n_workers_(n) {
    for (std::size_t i = 0; i < n_workers_; ++i)
      threads_.emplace_back([this] { worker_loop(); });
  }

  ~PoolExecutor() override {
    {
      std::lock_guard<std::mutex> lk(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t workers() const override { return n_workers_; }

  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& fn) override {
    if (count == 0) return;
    if (count == 1 || n_workers_ == 0 || tls_in_pool) {
      for (std::size_t i = 0; i < count; ++i) fn(i);
      return;
    }
    auto job = std::make_shared<Job>();
    job->fn = &fn;
    job->count = count;
    {
      std::lock_guard<std::mutex> lk(mu_);
      jobs_.push_back(job);
    }
    cv_.notify_all();
    run_job(*job);  // caller participates
    std::unique_lock<std::mutex> lk(job->done_mu);
    job->done_cv.wait(lk, [&] { return job->active == 0 && job->next >= job->count; });
    {
      std::lock_guard<std::mutex> lk2(mu_);
      std::erase(jobs_, job);
    }
    if (job->error) std::rethrow_exception(job->error);
  }

 private:
  struct Job {
    const std::function<void(std::size_t)>* fn = nullptr;
    std::size_t count = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<int> active{0};
    std::mutex done_mu;
    std::condition_variable done_cv;
    std::exception_ptr error;
    std::mutex error_mu;
  };

  void run_job(Job& job) {
    job.active.fetch_add(1);
    for (;;) {
      const std::size_t i = job.next.fetch_add(1);
      if (i >= job.count) break;
      try {
        (*job.fn)(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(job.error_mu);
        if (!job.error) job.error = std::current_exception();
      }
    }
    if (job.active.fetch_sub(1) == 1) {
      std::lock_guard<std::mutex> lk(job.done_mu);
      job.done_cv.notify_all();
    }
  }

  void worker_loop() {
    tls_in_pool = true;
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] {
          if (stop_) return true;
          for (auto& j : jobs_)
            if (j->next.load() < j->count) return true;
          return false;
        });
        if (stop_) return;
        for (auto& j : jobs_) {
          if (j->next.load() < j->count) {
            job = j;
            break;
          }
        }
      }
      if (job) run_job(*job);
    }
  }

  std::size_t n_workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::shared_ptr<Job>> jobs_;
  bool stop_ = false;
};

}  // namespace

void Executor::set_default_workers(std::size_t n) { g_default_workers = n; }

Executor& Executor::shared() {
  static PoolExecutor* pool = [] {
    std::size_t n = g_default_workers.load();
    if (n == 0) {
      const unsigned hw = std::thread::hardware_concurrency();
      n = hw > 1 ? hw - 1 : 0;  // caller thread participates as well
    }
    return new PoolExecutor(n);
  }();
  return *pool;
}

}  // namespace casimir
