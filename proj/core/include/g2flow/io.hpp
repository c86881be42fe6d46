#pragma once

// Persistence: the G2F1 field snapshot format and the metrics CSV schema.
//
// G2F1 layout (all little-endian):
//   bytes 0..3   magic "G2F1"
//   uint32       version (1)
//   uint32       fiber_kind tag (FiberKind enum value)
//   uint32       stencil order (2 or 4)
//   uint32       reserved (0)
//   uint32[7]    dims
//   float64[7]   spacing
//   uint64       fiber_size
//   float64[...] values, site-major, row-major over dims
//
// Metrics CSV column set is stable:
//   t,lambda_sup,T_sup,velocity_sup,total_volume,closed_residual,
//   scalar_residual,trace_h_residual,dt

#include <string>
#include <vector>

#include "g2flow/flow.hpp"
#include "g2flow/lattice.hpp"

namespace g2flow {

void write_snapshot(const std::string& path, const LatticeField& field);
LatticeField read_snapshot(const std::string& path);

extern const char* const kMetricsCsvHeader;

std::string csv_line(const DiagnosticsRecord& r);  // %.17g round-trip formatting

class MetricsCsvWriter {
 public:
  explicit MetricsCsvWriter(const std::string& path);
  ~MetricsCsvWriter();
  void write(const DiagnosticsRecord& r);
  void flush();

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace g2flow
