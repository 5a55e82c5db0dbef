#ifndef MEMLAB_VERSION_HPP
#define MEMLAB_VERSION_HPP

namespace memlab {
inline constexpr const char* kToolVersion = "0.1.0";
}

#endif  // MEMLAB_VERSION_HPP
