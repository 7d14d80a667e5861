#include <cstdlib>
#include <string>

#include "netmimo/kernels.hpp"

namespace netmimo::kernels {
namespace {

std::string& forced_name() {
  static std::string name;
  return name;
}

bool avx2_usable() {
#ifdef NETMIMO_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelOps& resolve(const std::string& request) {
  if (request == "scalar") return scalar_ops();
  if (request == "avx2") {
#ifdef NETMIMO_HAVE_AVX2
    if (avx2_usable()) return avx2_ops();
#endif
    throw UsageError("kernel backend 'avx2' is not available on this host");
  }
  if (request.empty() || request == "auto") {
#ifdef NETMIMO_HAVE_AVX2
    if (avx2_usable()) return avx2_ops();
#endif
    return scalar_ops();
  }
  throw UsageError("unknown kernel backend '" + request + "' (expected auto, scalar or avx2)");
}

}  // namespace

const KernelOps& active_ops() {
  if (!forced_name().empty()) return resolve(forced_name());
  if (const char* env = std::getenv("NETMIMO_KERNEL"); env != nullptr && *env != '\0') {
    return resolve(env);
  }
  return resolve("auto");
}

void force_backend(const std::string& name) {
  if (!name.empty()) resolve(name);  // reject unknown or unavailable names up front
  forced_name() = name;
}

std::string active_backend_name() { return active_ops().name; }

}  // namespace netmimo::kernels
