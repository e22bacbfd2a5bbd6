#pragma once

#include <cstdint>
#include <string>

#include "state.hpp"

namespace alfven {

enum class Precision : std::uint32_t { complex64 = 64, complex128 = 128 };

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Fixed-size little-endian header that precedes the coefficient blocks.
///
///   bytes  field
///   8      magic "ALFVCKPT"
///   4      format version
///   4      precision (64 or 128)
///   4      ndim, then 3 x 4 dims (unused axes are 1)
///   8      half_length, 8 dealias_fraction
///   8      epsilon, 8 nu, 8 s, 4 k, 8 t_star
///   8      data hash of the initial data the state evolved from
///   8      FNV-1a hash of the coefficient payload
///
/// The payload is Lambda+ then Lambda-, component by component, each the
/// half-spectrum coefficients in row-major order as (re, im) pairs.
struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  Precision precision = Precision::complex128;
  GridSpec grid;
  double epsilon = 0.0;
  double nu = 0.0;
  double s = 0.6;
  std::int32_t k = 4;
  double t_star = 0.0;
  std::uint64_t data_hash = 0;
  std::uint64_t payload_hash = 0;
};

struct Checkpoint {
  CheckpointHeader header;
  ElsasserState state;
};

void write_checkpoint(const std::string& path, const ElsasserState& state, double s, int k,
                      Precision precision = Precision::complex128);
/// Throws IoError on unreadable files, bad magic, unsupported version or hash mismatch.
Checkpoint read_checkpoint(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace alfven
