#ifndef SCH_COMMON_HPP
#define SCH_COMMON_HPP

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace sch {

using complexd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Thrown on contract violations (bad arguments, precondition failures).
struct invalid_argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a computation detects it cannot proceed (NaN blowup,
// unresolvable state, unconverged iteration, boundary-mass violation).
struct numerics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_argument_error(msg);
}

// 32-byte aligned allocator so FFTW SIMD kernels can run on our buffers.
template <class T>
struct aligned_alloc32 {
    using value_type = T;
    aligned_alloc32() = default;
    template <class U>
    aligned_alloc32(const aligned_alloc32<U>&) {}
    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = std::aligned_alloc(32, ((n * sizeof(T) + 31) / 32) * 32);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }
    template <class U>
    bool operator==(const aligned_alloc32<U>&) const { return true; }
    template <class U>
    bool operator!=(const aligned_alloc32<U>&) const { return false; }
};

using cvector = std::vector<complexd, aligned_alloc32<complexd>>;
using rvector = std::vector<double, aligned_alloc32<double>>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace sch

#endif
