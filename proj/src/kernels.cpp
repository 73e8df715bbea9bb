#include "katofan/kernels.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace katofan::kernels {

namespace {

Rational trace_of_product(const RatMatrix& a, const RatMatrix& b) {
  Rational t;
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t l = 0; l < a.cols(); ++l)
      if (!a(k, l).is_zero() && !b(l, k).is_zero()) t += a(k, l) * b(l, k);
  return t;
}

bool reducible(const std::vector<Vec>& cand, std::size_t i, const RationalCone& cone) {
  for (std::size_t j = 0; j < cand.size(); ++j)
    if (j != i && cand[j] != cand[i] && cone.contains(sub(cand[i], cand[j]))) return true;
  return false;
}

Vec box_point(int n, Int bound, long long index) {
  const long long side = 2 * bound + 1;
  Vec x(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    x[static_cast<std::size_t>(k)] = static_cast<Int>(index % side) - bound;
    index /= side;
  }
  return x;
}

// Collects the first exception thrown inside a parallel region.
class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

}  // namespace

Exec default_exec() {
#ifdef _OPENMP
  return Exec::parallel;
#else
  return Exec::serial;
#endif
}

RatMatrix trace_gram(const std::vector<RatMatrix>& basis, Exec exec) {
  const auto n = static_cast<long long>(basis.size());
  RatMatrix g(basis.size(), basis.size());
  if (exec == Exec::serial) {
    for (long long i = 0; i < n; ++i)
      for (long long j = i; j < n; ++j) {
        const Rational t = trace_of_product(basis[i], basis[j]);
        g(i, j) = t;
        g(j, i) = t;
      }
    return g;
  }
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    err.run([&] {
      for (long long j = i; j < n; ++j) {
        const Rational t = trace_of_product(basis[i], basis[j]);
        g(i, j) = t;
        g(j, i) = t;
      }
    });
  }
  err.rethrow();
  return g;
}

std::vector<char> irreducible_mask(const std::vector<Vec>& candidates, const RationalCone& cone, Exec exec) {
  const auto n = static_cast<long long>(candidates.size());
  std::vector<char> mask(candidates.size(), 0);
  if (exec == Exec::serial) {
    for (long long i = 0; i < n; ++i) mask[i] = reducible(candidates, i, cone) ? 0 : 1;
    return mask;
  }
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    err.run([&] { mask[i] = reducible(candidates, i, cone) ? 0 : 1; });
  }
  err.rethrow();
  return mask;
}

std::optional<Vec> box_scan(int n, Int bound, const std::function<bool(const Vec&)>& violates, Exec exec) {
  long long total = 1;
  for (int k = 0; k < n; ++k) total *= 2 * bound + 1;
  if (exec == Exec::serial) {
    for (long long i = 0; i < total; ++i) {
      Vec x = box_point(n, bound, i);
      if (violates(x)) return x;
    }
    return std::nullopt;
  }
  long long first = total;
  ErrorSlot err;
#pragma omp parallel for schedule(static) reduction(min : first)
  for (long long i = 0; i < total; ++i) {
    if (i >= first) continue;
    err.run([&] {
      if (violates(box_point(n, bound, i))) first = std::min(first, i);
    });
  }
  err.rethrow();
  if (first == total) return std::nullopt;
  return box_point(n, bound, first);
}

}  // namespace katofan::kernels
