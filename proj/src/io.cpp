#include "zwitter/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace zwitter::io {

namespace {

constexpr std::uint16_t kFormatVersion = 1;

// Explicit little-endian serialization, independent of host byte order.
void put_bytes(std::string& out, const void* p, size_t n_bytes) {
  out.append(reinterpret_cast<const char*>(p), n_bytes);
}
void put_u16(std::string& out, std::uint16_t v) {
  char b[2] = {char(v & 0xff), char(v >> 8)};
  out.append(b, 2);
}
void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = char((v >> (8 * i)) & 0xff);
  out.append(b, 4);
}
void put_f64(std::string& out, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = char((u >> (8 * i)) & 0xff);
  out.append(b, 8);
}

struct Reader {
  const std::string& buf;
  size_t pos = 0;
  void need(size_t n) const {
    if (pos + n > buf.size()) throw Error("zwit: truncated file");
  }
  std::uint16_t u16() {
    need(2);
    auto v = std::uint16_t(std::uint8_t(buf[pos])) |
             std::uint16_t(std::uint8_t(buf[pos + 1])) << 8;
    pos += 2;
    return std::uint16_t(v);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t(std::uint8_t(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i)
      u |= std::uint64_t(std::uint8_t(buf[pos + i])) << (8 * i);
    pos += 8;
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
  char byte() {
    need(1);
    return buf[pos++];
  }
};

// Row-major sample count for each kind; complex samples count once.
size_t sample_count(SnapshotKind kind, const GridSpec& g) {
  switch (kind) {
    case SnapshotKind::RealZP:
      return size_t(g.n_z) * g.n_p;
    case SnapshotKind::ComplexZR:
    case SnapshotKind::ComplexKP:
      return size_t(g.n_z) * g.n_p;
    case SnapshotKind::WaveFunctionX:
      return size_t(g.n_z);
    case SnapshotKind::DensityMatrix:
      return size_t(g.n_z) * g.n_z;
  }
  throw Error("zwit: unknown representation tag");
}

}  // namespace

void write_zwit(const std::filesystem::path& path, const Snapshot& s) {
  std::string out;
  out.reserve(64 + 16 * sample_count(s.kind, s.grid));
  put_bytes(out, "ZWIT", 4);
  put_u16(out, kFormatVersion);
  out.push_back(char(s.kind));
  put_u32(out, std::uint32_t(s.grid.n_z));
  put_u32(out, std::uint32_t(s.grid.n_p));
  put_f64(out, s.grid.z_extent);
  put_f64(out, s.grid.p_extent);
  put_f64(out, s.grid.hbar);
  put_f64(out, s.grid.mass);

  if (s.kind == SnapshotKind::RealZP) {
    for (int j = 0; j < s.real_values.rows(); ++j)
      for (int a = 0; a < s.real_values.cols(); ++a)
        put_f64(out, s.real_values(j, a));
  } else {
    for (int j = 0; j < s.complex_values.rows(); ++j)
      for (int a = 0; a < s.complex_values.cols(); ++a) {
        put_f64(out, s.complex_values(j, a).real());
        put_f64(out, s.complex_values(j, a).imag());
      }
  }
  atomic_write_text(path, out);
}

Snapshot read_zwit(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("zwit: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  Reader r{buf};

  r.need(4);
  if (buf.compare(0, 4, "ZWIT") != 0) throw Error("zwit: bad magic");
  r.pos = 4;
  if (r.u16() != kFormatVersion) throw Error("zwit: unsupported version");
  Snapshot s;
  s.kind = SnapshotKind(r.byte());
  s.grid.n_z = int(r.u32());
  s.grid.n_p = int(r.u32());
  s.grid.z_extent = r.f64();
  s.grid.p_extent = r.f64();
  s.grid.hbar = r.f64();
  s.grid.mass = r.f64();

  const size_t n = sample_count(s.kind, s.grid);
  if (s.kind == SnapshotKind::RealZP) {
    s.real_values.resize(s.grid.n_z, s.grid.n_p);
    for (int j = 0; j < s.grid.n_z; ++j)
      for (int a = 0; a < s.grid.n_p; ++a) s.real_values(j, a) = r.f64();
  } else {
    const int rows = s.grid.n_z;
    const int cols = int(n / rows);
    s.complex_values.resize(rows, cols);
    for (int j = 0; j < rows; ++j)
      for (int a = 0; a < cols; ++a) {
        const double re = r.f64();
        const double im = r.f64();
        s.complex_values(j, a) = Complex(re, im);
      }
  }
  return s;
}

Snapshot snapshot_of(const RealPhaseField& f) {
  Snapshot s;
  s.kind = SnapshotKind::RealZP;
  s.grid = f.grid;
  s.real_values = f.values;
  return s;
}

Snapshot snapshot_of(const ComplexPhaseField& f) {
  Snapshot s;
  s.grid = f.grid;
  s.complex_values = f.values;
  switch (f.rep) {
    case Representation::ZP:
      throw Error("zwit: complex (z,p) snapshots are not a defined tag");
    case Representation::ZR:
      s.kind = SnapshotKind::ComplexZR;
      break;
    case Representation::KP:
      s.kind = SnapshotKind::ComplexKP;
      break;
  }
  return s;
}

Snapshot wavefunction_snapshot(const GridSpec& g, const CVector& psi) {
  Snapshot s;
  s.kind = SnapshotKind::WaveFunctionX;
  s.grid = g;
  s.complex_values = psi;
  return s;
}

Snapshot density_matrix_snapshot(const GridSpec& g, const CMatrix& rho) {
  Snapshot s;
  s.kind = SnapshotKind::DensityMatrix;
  s.grid = g;
  s.complex_values = rho.array();
  return s;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<Real>>& rows) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < columns.size(); ++i)
    os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw Error("csv: row width does not match header");
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  atomic_write_text(path, os.str());
}

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace zwitter::io
