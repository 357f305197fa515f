#pragma once

#include <filesystem>
#include <utility>

#include "choquard/field.hpp"

namespace choquard {

/// Binary field snapshot, bit-exact across write/read round trips.
///
/// Layout (all little-endian):
///   bytes 0..7   magic "CHOQFLD1"
///   bytes 8..11  u32 dim
///   bytes 12..15 u32 n
///   bytes 16..47 f64 L, alpha, p, q
///   bytes 48..   n^dim f64 payload, row-major
void write_snapshot(const Field& u, const Params& params,
                    const std::filesystem::path& path);

/// Throws corrupt_snapshot on a bad magic, malformed header, wrong payload
/// length, or non-finite values.
std::pair<Field, Params> read_snapshot(const std::filesystem::path& path);

}  // namespace choquard
