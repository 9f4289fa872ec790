#ifndef NECRED_COMMON_HPP
#define NECRED_COMMON_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace necred {

/// Exact rational arithmetic for error probabilities and rate bounds.
/// All counts stay far below 2^32 at workbench scale, so int64 components
/// never overflow.
using Rat = boost::rational<std::int64_t>;

/// Base class for all workbench errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent inputs: files that do not parse, graphs that
/// fail validation, codes that do not match an instance.
struct ValidationError : Error {
    using Error::Error;
};

/// An exhaustive enumeration would exceed a configured limit.
struct LimitError : Error {
    using Error::Error;
};

inline std::uint64_t bit_mask(int width) {
    return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

/// FNV-1a over bytes; used for content fingerprints of canonical JSON.
std::uint64_t fnv1a(std::string_view bytes);

/// Fingerprint rendered as fixed-width lowercase hex.
std::string hex_digest(std::uint64_t value);

/// Runs fn(begin, end) over [0, count) split into contiguous chunks on up
/// to `workers` threads. fn must only touch disjoint per-index state.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace necred

#endif
