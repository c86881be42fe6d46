#include "g2flow/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "G2F1 writer assumes a little-endian host");

namespace g2flow {

namespace {

constexpr char kMagic[4] = {'G', '2', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const LatticeField& field) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.kind));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.spec.stencil_order));
  put<std::uint32_t>(os, 0);
  for (int a = 0; a < 7; ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(field.spec.dims[a]));
  for (int a = 0; a < 7; ++a) put<double>(os, field.spec.spacing[a]);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(field.fiber_size));
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!os) throw IoError("short write: " + path);
}

LatticeField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a G2F1 snapshot: " + path);
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw IoError("unsupported G2F1 version in " + path);
  const auto kind = static_cast<FiberKind>(get<std::uint32_t>(is));
  const auto order = get<std::uint32_t>(is);
  get<std::uint32_t>(is);  // reserved
  LatticeSpec spec;
  for (int a = 0; a < 7; ++a) spec.dims[a] = static_cast<int>(get<std::uint32_t>(is));
  for (int a = 0; a < 7; ++a) spec.spacing[a] = get<double>(is);
  spec.stencil_order = (order == 4) ? StencilOrder::kFourth : StencilOrder::kSecond;
  const auto fiber = static_cast<int>(get<std::uint64_t>(is));
  if (!is) throw IoError("truncated G2F1 header: " + path);
  if (kind != FiberKind::kGeneric && fiber_size_of(kind) != fiber)
    throw IoError("fiber size does not match fiber kind in " + path);
  LatticeField field(spec, kind, fiber);
  is.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!is || is.gcount() !=
                 static_cast<std::streamsize>(field.values.size() * sizeof(double)))
    throw IoError("truncated G2F1 payload: " + path);
  return field;
}

const char* const kMetricsCsvHeader =
    "t,lambda_sup,T_sup,velocity_sup,total_volume,closed_residual,scalar_residual,"
    "trace_h_residual,dt";

std::string csv_line(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.lambda_sup,
                r.t_sup, r.velocity_sup, r.total_volume, r.closed_residual, r.scalar_residual,
                r.trace_h_residual, r.dt);
  return buf;
}

struct MetricsCsvWriter::Impl {
  std::ofstream os;
};

MetricsCsvWriter::MetricsCsvWriter(const std::string& path) : impl_(new Impl) {
  impl_->os.open(path, std::ios::trunc);
  if (!impl_->os) {
    delete impl_;
    throw IoError("cannot open metrics CSV for writing: " + path);
  }
  impl_->os << kMetricsCsvHeader << "\n";
}

MetricsCsvWriter::~MetricsCsvWriter() { delete impl_; }

void MetricsCsvWriter::write(const DiagnosticsRecord& r) {
  impl_->os << csv_line(r) << "\n";
  if (!impl_->os) throw IoError("metrics CSV write failed");
}

void MetricsCsvWriter::flush() { impl_->os.flush(); }

}  // namespace g2flow
