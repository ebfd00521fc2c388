#pragma once
// Batched 2-D obstacle kernels. The scalar variant is the reference; the AVX2
// and NEON variants perform the same IEEE operations lane-wise, so every
// variant returns bit-identical results (min and max are exact, and the build
// disables floating-point contraction).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mrcert::simd {

/// Structure-of-arrays obstacle storage for the 2-D kernels.
struct RectSoA {
  std::vector<double> lo_x, lo_y, hi_x, hi_y;

  [[nodiscard]] std::size_t size() const noexcept { return lo_x.size(); }
  void push_back(double lx, double ly, double hx, double hy) {
    lo_x.push_back(lx);
    lo_y.push_back(ly);
    hi_x.push_back(hx);
    hi_y.push_back(hy);
  }
};

enum class Isa { Scalar, Avx2, Neon };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  /// Minimum squared distance from (x, y) to any rectangle; +inf for an empty set.
  double (*min_dist_sq)(const RectSoA& rects, double x, double y);
  /// True iff the closed segment (ax, ay)-(bx, by) touches any closed rectangle.
  bool (*segment_hits_any)(const RectSoA& rects, double ax, double ay, double bx, double by);
};

/// Variants compiled into this binary and supported by the running CPU.
[[nodiscard]] std::vector<Isa> available_isas();
[[nodiscard]] const KernelTable& kernels_for(Isa isa);

/// Best available variant, chosen once. MRCERT_ISA=scalar|avx2|neon overrides.
[[nodiscard]] const KernelTable& active_kernels();

namespace detail {
double min_dist_sq_scalar(const RectSoA& r, double x, double y);
bool segment_hits_any_scalar(const RectSoA& r, double ax, double ay, double bx, double by);
// Single-rectangle helpers shared by the vector variants' tail loops.
double rect_dist_sq(const RectSoA& r, std::size_t i, double x, double y);
bool segment_hits_rect(const RectSoA& r, std::size_t i, double ax, double ay, double dx, double dy);
#if defined(MRCERT_HAVE_AVX2)
double min_dist_sq_avx2(const RectSoA& r, double x, double y);
bool segment_hits_any_avx2(const RectSoA& r, double ax, double ay, double bx, double by);
#endif
#if defined(MRCERT_HAVE_NEON)
double min_dist_sq_neon(const RectSoA& r, double x, double y);
bool segment_hits_any_neon(const RectSoA& r, double ax, double ay, double bx, double by);
#endif
}  // namespace detail

}  // namespace mrcert::simd
