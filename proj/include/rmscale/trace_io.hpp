#pragma once

#include <string>
#include <vector>

#include "rmscale/chain_trace.hpp"

namespace rmscale {

// Columnar text dump: "step,x<i>...,accepted,sigma", one row per iteration,
// sigma being the post-update scale of that iteration.  coords selects the
// coordinates to keep (empty = all).  Values carry 6 significant digits;
// use the binary format when full precision matters.
void write_trace_csv(const ChainTrace& trace, const std::string& path,
                     const std::vector<int>& coords = {});

// Compact binary trace, little-endian throughout:
//   bytes 0..3   magic "RMT1"
//   u16          format version (1)
//   u16          reserved (0)
//   u64          iteration count
//   u32          state dimension
//   f64          starting scale (sigma_path[0])
//   per iteration: dim x f64 state, u8 accepted, f64 post-update scale
// Restart events and meta are not stored.
void write_trace_rmt1(const ChainTrace& trace, const std::string& path);

// Inverse of write_trace_rmt1 (meta left mostly empty).  Throws
// std::runtime_error on bad magic, version, or a truncated file.
ChainTrace read_trace_rmt1(const std::string& path);

}  // namespace rmscale
