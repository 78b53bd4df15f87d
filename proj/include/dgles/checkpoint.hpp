#pragma once

#include "dgles/anisotropic.hpp"
#include "dgles/field.hpp"
#include "dgles/statistics.hpp"
#include "dgles/time_integration.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dgles {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointShape {
  std::int32_t n_elements = 0, n_variables = 0, n_modes = 0, q = 0;
  std::int32_t nx = 0, ny = 0, nz = 0;
  bool operator==(const CheckpointShape&) const = default;
};

/// Everything needed to continue a run bit for bit.
struct Checkpoint {
  CheckpointShape shape;
  std::string config_text;
  double time = 0.0;
  std::int64_t step = 0;
  ForcingState forcing;
  double friction_velocity = 0.0;
  ChannelStatistics statistics;
  bool have_coefficients = false;
  std::vector<anisotropic::Coefficients> coefficients;
  ModalField state;
};

/// Little-endian byte image ending with an FNV-1a checksum.
std::vector<unsigned char> encode_checkpoint(const Checkpoint& c);
/// Throws IoError on a bad magic, version, truncation or checksum.
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

/// Written to a temporary file and renamed into place.
void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

std::string describe(const CheckpointShape& s);

}  // namespace dgles
