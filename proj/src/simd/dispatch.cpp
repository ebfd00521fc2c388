#include <cstdlib>
#include <string>

#include "mrcert/errors.hpp"
#include "mrcert/simd/kernels.hpp"

namespace mrcert::simd {
namespace {

constexpr KernelTable kScalar{Isa::Scalar, &detail::min_dist_sq_scalar,
                              &detail::segment_hits_any_scalar};
#if defined(MRCERT_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &detail::min_dist_sq_avx2, &detail::segment_hits_any_avx2};
#endif
#if defined(MRCERT_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, &detail::min_dist_sq_neon, &detail::segment_hits_any_neon};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(MRCERT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(MRCERT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& select() {
  if (const char* env = std::getenv("MRCERT_ISA"); env != nullptr && *env != '\0') {
    const std::string want(env);
    for (Isa isa : available_isas()) {
      if (isa_name(isa) == want) return kernels_for(isa);
    }
  }
  return kernels_for(available_isas().back());
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  if (!cpu_supports(isa)) {
    throw ContractViolation("kernel variant '" + std::string(isa_name(isa)) + "' unavailable");
  }
  switch (isa) {
#if defined(MRCERT_HAVE_AVX2)
    case Isa::Avx2:
      return kAvx2;
#endif
#if defined(MRCERT_HAVE_NEON)
    case Isa::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace mrcert::simd
