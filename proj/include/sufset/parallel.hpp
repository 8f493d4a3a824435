#pragma once

#include <exception>
#include <mutex>

namespace sufset {

// Exceptions must not cross an OpenMP region boundary. Bodies run through
// capture(); the first exception is rethrown after the region.
class ExceptionSlot {
 public:
  template <typename F>
  void capture(F&& body) noexcept {
    try {
      body();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

int max_threads();
void set_threads(int n);

}  // namespace sufset
