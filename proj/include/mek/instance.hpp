#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mek/ahlswede.hpp"
#include "mek/core.hpp"

namespace mek {

// Parsed on-disk instance description. Line-oriented grammar:
//   # comment
//   alphabet X <int> Y <int>
//   source <|X| floats>
//   distortion            (followed by |X| rows of |Y| floats)
//   units bits|nats       (optional output preference)
// or, replacing the three explicit blocks:
//   ahlswede sizeA <int> sizeB <int> xi <float> b <float>
// which expands through build_instance with auto-solved (delta, a).
struct InstanceFile {
  Distribution source;
  DistortionMatrix d;
  std::optional<AhlswedeInstance> ahlswede;
  std::optional<std::string> units;
};

InstanceFile parse_instance(const std::string& path);
InstanceFile parse_instance_text(const std::vector<std::string>& lines,
                                 const std::string& name);

// Emits the grammar above with full-precision floats, so parse(serialize(f))
// reproduces every numeric field exactly.
std::string serialize_instance(const InstanceFile& inst);

}  // namespace mek
