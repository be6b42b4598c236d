#pragma once

#include <cstddef>
#include <span>
#include <string>

// Dense double-precision inner loops behind the pairwise-distance scans,
// random projections and measure arithmetic. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime on
// capable x86-64 hosts. Results of the two backends agree to roundoff
// (summation order differs); within one backend every call is
// deterministic.
namespace fmb::kernels {

struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sq_dist)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // sum_i |a[i] - b[i]|
  double (*l1_dist)(const double* a, const double* b, std::size_t n);
  // y[r] = dot(mat_row_r, x) for row-major mat of shape rows x cols
  void (*matvec)(const double* mat, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
};

// Backend selected for this process (resolved once, on first use).
const Ops& ops();
std::string backend_name();

// Force a backend by name ("scalar" or "avx2") before first use; mainly
// for the equivalence tests. Returns false if unavailable on this host.
bool force_backend(const std::string& name);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double l1_dist(const double* a, const double* b, std::size_t n);
void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double l1_dist(const double* a, const double* b, std::size_t n);
void matvec(const double* mat, std::size_t rows, std::size_t cols,
            const double* x, double* y);
}  // namespace avx2
#endif

// Convenience span wrappers over the dispatched backend.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return ops().dot(a.data(), b.data(), a.size());
}
inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  return ops().sq_dist(a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return ops().sum(a.data(), a.size()); }
inline double l1_dist(std::span<const double> a, std::span<const double> b) {
  return ops().l1_dist(a.data(), b.data(), a.size());
}

}  // namespace fmb::kernels
