#include "burim/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace burim::io {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("io: " + what);
}

struct Writer {
  std::ofstream os;
  explicit Writer(const std::filesystem::path& p) : os(p, std::ios::binary) {
    check(os.good(), "cannot open " + p.string() + " for writing");
  }
  void raw(const void* p, std::size_t n) { os.write(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void i32(std::int32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }
  void magic(const char m[4]) { raw(m, 4); }
  void cvec(const std::vector<cplx>& v) { raw(v.data(), v.size() * sizeof(cplx)); }
  void dvec(const std::vector<double>& v) { raw(v.data(), v.size() * sizeof(double)); }
};

struct Reader {
  std::ifstream is;
  explicit Reader(const std::filesystem::path& p) : is(p, std::ios::binary) {
    check(is.good(), "cannot open " + p.string());
  }
  void raw(void* p, std::size_t n) {
    is.read(static_cast<char*>(p), n);
    check(std::size_t(is.gcount()) == n, "truncated file");
  }
  std::uint32_t u32() { std::uint32_t v; raw(&v, 4); return v; }
  std::int32_t i32() { std::int32_t v; raw(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; raw(&v, 8); return v; }
  double f64() { double v; raw(&v, 8); return v; }
  void magic(const char m[4]) {
    char got[4];
    raw(got, 4);
    check(std::memcmp(got, m, 4) == 0, "bad magic (expected " + std::string(m, 4) + ")");
  }
  std::vector<cplx> cvec(std::size_t n) {
    std::vector<cplx> v(n);
    raw(v.data(), n * sizeof(cplx));
    return v;
  }
  std::vector<double> dvec(std::size_t n) {
    std::vector<double> v(n);
    raw(v.data(), n * sizeof(double));
    return v;
  }
};

void write_grid2(Writer& w, const Grid2D& g) {
  w.f64(g.origin[0]);
  w.f64(g.origin[1]);
  w.f64(g.spacing[0]);
  w.f64(g.spacing[1]);
  w.u32(std::uint32_t(g.counts[0]));
  w.u32(std::uint32_t(g.counts[1]));
  w.f64(g.z_level);
}

Grid2D read_grid2(Reader& r) {
  std::array<double, 2> org{r.f64(), r.f64()};
  std::array<double, 2> spc{r.f64(), r.f64()};
  std::array<int, 2> cnt{int(r.u32()), int(r.u32())};
  double z = r.f64();
  return Grid2D(org, spc, cnt, z);
}

void write_grid3(Writer& w, const Grid3D& g) {
  for (double v : g.origin) w.f64(v);
  for (double v : g.spacing) w.f64(v);
  for (int v : g.counts) w.u32(std::uint32_t(v));
}

Grid3D read_grid3(Reader& r) {
  std::array<double, 3> org{r.f64(), r.f64(), r.f64()};
  std::array<double, 3> spc{r.f64(), r.f64(), r.f64()};
  std::array<int, 3> cnt{int(r.u32()), int(r.u32()), int(r.u32())};
  return Grid3D(org, spc, cnt);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_dataset(const std::filesystem::path& path, const MultiFrequencyData& data) {
  data.validate();
  check(!data.planes.empty(), "refusing to write an empty dataset");
  Writer w(path);
  w.magic("BMFD");
  w.u32(1);
  write_grid2(w, data.planes[0].grid);
  w.u32(std::uint32_t(data.size()));
  for (double f : data.frequencies_ghz) w.f64(f);
  for (const auto& p : data.planes) w.cvec(p.values);
}

MultiFrequencyData read_dataset(const std::filesystem::path& path) {
  Reader r(path);
  r.magic("BMFD");
  check(r.u32() == 1, "unsupported dataset version");
  Grid2D g = read_grid2(r);
  const std::size_t nf = r.u32();
  MultiFrequencyData data;
  data.frequencies_ghz.resize(nf);
  for (auto& f : data.frequencies_ghz) f = r.f64();
  data.planes.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    double k = ghz_to_k(data.frequencies_ghz[i]);
    data.planes.emplace_back(g, k, r.cvec(g.size()));
  }
  data.validate();
  return data;
}

void write_coefficient(const std::filesystem::path& path, const Coefficient& c) {
  Writer w(path);
  w.magic("BVOL");
  w.u32(1);
  write_grid3(w, c.grid);
  for (int v : c.support.lo) w.i32(v);
  for (int v : c.support.hi) w.i32(v);
  w.dvec(c.values);
}

Coefficient read_coefficient(const std::filesystem::path& path) {
  Reader r(path);
  r.magic("BVOL");
  check(r.u32() == 1, "unsupported volume version");
  Grid3D g = read_grid3(r);
  IndexBox3 box;
  for (auto& v : box.lo) v = r.i32();
  for (auto& v : box.hi) v = r.i32();
  return Coefficient(g, r.dvec(g.size()), box);
}

void write_footprint(const std::filesystem::path& path, const TargetFootprint& fp) {
  Writer w(path);
  w.magic("BFPT");
  w.u32(1);
  write_grid2(w, fp.grid);
  w.f64(fp.z_star);
  w.raw(fp.mask.data(), fp.mask.size());
}

TargetFootprint read_footprint(const std::filesystem::path& path) {
  Reader r(path);
  r.magic("BFPT");
  check(r.u32() == 1, "unsupported footprint version");
  TargetFootprint fp;
  fp.grid = read_grid2(r);
  fp.z_star = r.f64();
  fp.mask.resize(fp.grid.size());
  r.raw(fp.mask.data(), fp.mask.size());
  return fp;
}

void write_completed_data(const std::filesystem::path& path, const CompletedData& data) {
  data.validate();
  Writer w(path);
  w.magic("BCBD");
  w.u32(1);
  write_grid3(w, data.omega);
  w.f64(data.partition.k_min);
  w.f64(data.partition.k_max);
  w.u32(std::uint32_t(data.partition.count));
  w.u32(data.convention == WaveConvention::Plus ? 0u : 1u);
  for (const auto& bf : data.g)
    for (const auto& face : bf.faces) w.cvec(face);
}

CompletedData read_completed_data(const std::filesystem::path& path) {
  Reader r(path);
  r.magic("BCBD");
  check(r.u32() == 1, "unsupported boundary-data version");
  CompletedData data;
  data.omega = read_grid3(r);
  const double kmin = r.f64(), kmax = r.f64();
  const int n = int(r.u32());
  data.partition = build_partition(kmin, kmax, n);
  data.convention = r.u32() == 0 ? WaveConvention::Plus : WaveConvention::Minus;
  data.g.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    BoundaryField bf(data.omega);
    for (auto& face : bf.faces) face = r.cvec(face.size());
    data.g.push_back(std::move(bf));
  }
  data.validate();
  return data;
}

void write_vtk_volume(const std::filesystem::path& path, const Coefficient& c,
                      const std::string& field_name) {
  std::ofstream os(path);
  check(os.good(), "cannot open " + path.string());
  const Grid3D& g = c.grid;
  os << "# vtk DataFile Version 3.0\n";
  os << "burim volume\n";
  os << "ASCII\n";
  os << "DATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << g.counts[0] << " " << g.counts[1] << " " << g.counts[2] << "\n";
  os << "ORIGIN " << g17(g.origin[0]) << " " << g17(g.origin[1]) << " " << g17(g.origin[2])
     << "\n";
  os << "SPACING " << g17(g.spacing[0]) << " " << g17(g.spacing[1]) << " " << g17(g.spacing[2])
     << "\n";
  os << "POINT_DATA " << g.size() << "\n";
  os << "SCALARS " << field_name << " double 1\n";
  os << "LOOKUP_TABLE default\n";
  for (std::size_t n = 0; n < c.values.size(); ++n) os << g17(c.values[n]) << "\n";
}

void write_plane_csv(const std::filesystem::path& path, const PlaneData& p) {
  std::ofstream os(path);
  check(os.good(), "cannot open " + path.string());
  os << "x,y,re,im,abs\n";
  for (int j = 0; j < p.grid.counts[1]; ++j)
    for (int i = 0; i < p.grid.counts[0]; ++i) {
      auto q = p.grid.node(i, j);
      const cplx v = p.at(i, j);
      os << g17(q[0]) << "," << g17(q[1]) << "," << g17(v.real()) << "," << g17(v.imag()) << ","
         << g17(std::abs(v)) << "\n";
    }
}

void write_curve_csv(const std::filesystem::path& path, const std::string& x_name,
                     const std::vector<double>& x, const std::string& y_name,
                     const std::vector<double>& y) {
  check(x.size() == y.size(), "curve columns differ in length");
  std::ofstream os(path);
  check(os.good(), "cannot open " + path.string());
  os << x_name << "," << y_name << "\n";
  for (std::size_t i = 0; i < x.size(); ++i) os << g17(x[i]) << "," << g17(y[i]) << "\n";
}

void write_coefficient_slices_csv(const std::filesystem::path& dir, const std::string& stem,
                                  const Coefficient& c) {
  const Grid3D& g = c.grid;
  std::size_t peak = 0;
  for (std::size_t n = 0; n < c.values.size(); ++n)
    if (c.values[n] > c.values[peak]) peak = n;
  const auto ijk = g.unravel(peak);

  auto slice = [&](int fixed_axis, int fixed_idx, const std::string& name) {
    std::ofstream os(dir / (stem + "_" + name + ".csv"));
    check(os.good(), "cannot open slice csv");
    const int a0 = fixed_axis == 0 ? 1 : 0;
    const int a1 = fixed_axis == 2 ? 1 : 2;
    os << "axis" << a0 << ",axis" << a1 << ",value\n";
    for (int b = 0; b < g.counts[a1]; ++b)
      for (int a = 0; a < g.counts[a0]; ++a) {
        std::array<int, 3> idx;
        idx[fixed_axis] = fixed_idx;
        idx[a0] = a;
        idx[a1] = b;
        os << g17(g.coord(a0, a)) << "," << g17(g.coord(a1, b)) << ","
           << g17(c.values[g.index(idx[0], idx[1], idx[2])]) << "\n";
      }
  };
  slice(2, ijk[2], "xy");
  slice(1, ijk[1], "xz");
  slice(0, ijk[0], "yz");
}

namespace {

struct MeshAccum {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<std::size_t, 3>> tris;
};

std::array<double, 3> edge_point(const std::array<double, 3>& a, const std::array<double, 3>& b,
                                 double va, double vb, double level) {
  const double t = (level - va) / (vb - va);
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

void tetra_triangles(const std::array<std::array<double, 3>, 4>& p, const std::array<double, 4>& v,
                     double level, MeshAccum& mesh) {
  int above = 0;
  for (double x : v)
    if (x > level) ++above;
  if (above == 0 || above == 4) return;

  auto add_tri = [&](std::array<double, 3> a, std::array<double, 3> b, std::array<double, 3> c) {
    const std::size_t base = mesh.verts.size();
    mesh.verts.push_back(a);
    mesh.verts.push_back(b);
    mesh.verts.push_back(c);
    mesh.tris.push_back({base, base + 1, base + 2});
  };

  // Gather indices on each side of the level set.
  std::array<int, 4> hi{}, lo{};
  int nh = 0, nl = 0;
  for (int i = 0; i < 4; ++i)
    (v[i] > level ? hi[nh++] : lo[nl++]) = i;

  if (nh == 1 || nl == 1) {
    const int apex = nh == 1 ? hi[0] : lo[0];
    const auto& others = nh == 1 ? lo : hi;
    auto e0 = edge_point(p[apex], p[others[0]], v[apex], v[others[0]], level);
    auto e1 = edge_point(p[apex], p[others[1]], v[apex], v[others[1]], level);
    auto e2 = edge_point(p[apex], p[others[2]], v[apex], v[others[2]], level);
    add_tri(e0, e1, e2);
  } else {  // 2-2 split: quad as two triangles
    auto e00 = edge_point(p[hi[0]], p[lo[0]], v[hi[0]], v[lo[0]], level);
    auto e01 = edge_point(p[hi[0]], p[lo[1]], v[hi[0]], v[lo[1]], level);
    auto e10 = edge_point(p[hi[1]], p[lo[0]], v[hi[1]], v[lo[0]], level);
    auto e11 = edge_point(p[hi[1]], p[lo[1]], v[hi[1]], v[lo[1]], level);
    add_tri(e00, e01, e11);
    add_tri(e00, e11, e10);
  }
}

// Split each grid cell into six tetrahedra and contour them.
MeshAccum contour_volume(const Coefficient& c, double level) {
  static const int tets[6][4] = {{0, 1, 3, 7}, {0, 1, 7, 5}, {0, 5, 7, 4},
                                 {0, 3, 2, 7}, {0, 2, 6, 7}, {0, 6, 4, 7}};
  const Grid3D& g = c.grid;
  MeshAccum mesh;
  for (int l = 0; l + 1 < g.counts[2]; ++l)
    for (int j = 0; j + 1 < g.counts[1]; ++j)
      for (int i = 0; i + 1 < g.counts[0]; ++i) {
        std::array<std::array<double, 3>, 8> corner;
        std::array<double, 8> val;
        for (int d = 0; d < 8; ++d) {
          const int di = d & 1, dj = (d >> 1) & 1, dl = (d >> 2) & 1;
          corner[d] = g.node(i + di, j + dj, l + dl);
          val[d] = c.at(i + di, j + dj, l + dl);
        }
        for (const auto& t : tets) {
          tetra_triangles({corner[t[0]], corner[t[1]], corner[t[2]], corner[t[3]]},
                          {val[t[0]], val[t[1]], val[t[2]], val[t[3]]}, level, mesh);
        }
      }
  return mesh;
}

}  // namespace

std::size_t write_isosurface_obj(const std::filesystem::path& path, const Coefficient& c,
                                 double level) {
  MeshAccum mesh = contour_volume(c, level);
  std::ofstream os(path);
  check(os.good(), "cannot open " + path.string());
  os << "# isosurface at level " << g17(level) << "\n";
  char buf[128];
  for (const auto& v : mesh.verts) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
    os << buf;
  }
  for (const auto& t : mesh.tris) {
    std::snprintf(buf, sizeof(buf), "f %zu %zu %zu\n", t[0] + 1, t[1] + 1, t[2] + 1);
    os << buf;
  }
  return mesh.tris.size();
}

bool isosurface_bounds(const Coefficient& c, double level, std::array<double, 3>& lo,
                       std::array<double, 3>& hi) {
  MeshAccum mesh = contour_volume(c, level);
  if (mesh.verts.empty()) return false;
  lo = hi = mesh.verts[0];
  for (const auto& v : mesh.verts)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  return true;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  check(is.good(), "cannot open " + path.string());
  std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  check(os.good(), "cannot open " + path.string());
  os << text;
}

}  // namespace burim::io
