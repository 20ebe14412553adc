#pragma once

#include <string>

#include "dnslab/field.hpp"
#include "dnslab/params.hpp"

namespace dnslab {

// On-disk state: magic, u64 header length, JSON header (grid, params, time,
// field table with offsets, payload checksum), then the raw little-endian
// f64 payload.  Saving the loaded snapshot reproduces the file byte for
// byte; the header alone is enough to list the contents.

struct Snapshot {
  Params params;
  Grid grid;
  double time = 0.0;
  ReformState state;
};

void save_snapshot(const std::string& path, const Snapshot& s);
Snapshot load_snapshot(const std::string& path);

// Header-only inspection: returns the JSON header text without touching the
// payload.
std::string snapshot_header_json(const std::string& path);

}  // namespace dnslab
