#pragma once
#include <cstdint>
#include <string>

#include "c2f/param_store.hpp"

namespace c2f {

// Checkpoint layout: plain-text manifest, then raw little-endian float64.
//
//   c2f-checkpoint 1
//   config <16-hex config hash>
//   tensors <count>
//   <name> <rank> <dim0> <dim1> ...
//   ...
//   data
//   <all tensor values, manifest order, little-endian f64>
//
// Values only; gradients and optimizer moments are not persisted.
void save_checkpoint(const std::string& path, const ParamStore& store, std::uint64_t config_hash);

struct CheckpointHeader {
    std::uint64_t config_hash = 0;
};

// Loads into an existing store: every manifest tensor must already exist with
// the same shape (models are constructed from config first, then filled).
CheckpointHeader load_checkpoint(const std::string& path, ParamStore& store);

}  // namespace c2f
