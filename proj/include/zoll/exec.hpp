#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace zoll {

// Serial is the reference path; Parallel must produce identical results
// because every index writes only its own output slot.
enum class Exec { Serial, Parallel };

void set_threads(int n);
int max_threads();

template <class Body>
void for_each_index(Exec ex, std::size_t n, Body&& body) {
  if (ex == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace zoll
