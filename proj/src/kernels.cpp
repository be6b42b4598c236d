#include "fmb/kernels.hpp"

namespace fmb::kernels {

namespace {

constexpr Ops kScalarOps{scalar::dot, scalar::sq_dist, scalar::sum,
                         scalar::l1_dist, scalar::matvec};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Ops kAvx2Ops{avx2::dot, avx2::sq_dist, avx2::sum, avx2::l1_dist,
                       avx2::matvec};

bool host_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}
#endif

struct Dispatch {
  const Ops* active;
  std::string name;
  Dispatch() {
#if defined(__x86_64__) || defined(_M_X64)
    if (host_has_avx2()) {
      active = &kAvx2Ops;
      name = "avx2";
      return;
    }
#endif
    active = &kScalarOps;
    name = "scalar";
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

const Ops& ops() { return *dispatch().active; }

std::string backend_name() { return dispatch().name; }

bool force_backend(const std::string& name) {
  if (name == "scalar") {
    dispatch().active = &kScalarOps;
    dispatch().name = "scalar";
    return true;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2" && host_has_avx2()) {
    dispatch().active = &kAvx2Ops;
    dispatch().name = "avx2";
    return true;
  }
#endif
  return false;
}

}  // namespace fmb::kernels
