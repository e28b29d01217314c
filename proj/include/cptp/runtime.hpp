#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace cptp {

/// Keeps freed heap blocks in the process instead of returning them to the
/// kernel. The integrator allocates and frees many multi-megabyte work arrays
/// per step; with the default glibc thresholds each of those becomes an
/// mmap/munmap pair.
inline void retain_heap_memory() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  mallopt(M_TOP_PAD, 64 << 20);
#endif
}

}  // namespace cptp
