#pragma once

#include "tvmerge/param_set.hpp"

#include <string>

namespace tvmerge {

// TVCK checkpoint format, version 1. All integers little-endian.
//
//   offset 0   magic "TVCK"
//   offset 4   u16 version (= 1)
//   offset 6   u32 entry count
//   offset 10  u32 meta count
//   meta entries:  u16 key length, key bytes, u32 value length, value bytes
//   data entries:  u16 name length, name bytes, u16 layer_index,
//                  u8 dtype tag (0 = f32), u8 ndim, ndim x u32 dims,
//                  numel x f32 payload
//   trailer    u32 CRC32 (IEEE) of every preceding byte
//
// load(save(p)) == p bit-exactly, including entry order and metadata.
// Loading rejects NaN/Inf payloads and non-contiguous layer indices.

void save_checkpoint(const param_set & p, const std::string & path);
param_set load_checkpoint(const std::string & path);

// In-memory codec used by the file functions (and handy for tests).
std::vector<std::uint8_t> encode_checkpoint(const param_set & p);
param_set decode_checkpoint(const std::vector<std::uint8_t> & bytes);

} // namespace tvmerge
