#include "griffith/mesh_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "griffith/error.hpp"

namespace griffith {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Tokenizer that drops '#' comments and keeps line numbers for messages.
class TokenStream {
 public:
  explicit TokenStream(std::istream& is) : is_(is) {}

  bool next(std::string& tok) {
    while (pos_ >= tokens_.size()) {
      std::string line;
      if (!std::getline(is_, line)) return false;
      ++line_no_;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      tokens_.clear();
      pos_ = 0;
      for (std::string t; ls >> t;) tokens_.push_back(t);
    }
    tok = tokens_[pos_++];
    return true;
  }

  template <class T>
  T number(const char* what) {
    std::string tok;
    if (!next(tok))
      throw Error(ErrorKind::Io, std::string("unexpected end of file reading ") + what);
    T v{};
    const auto* b = tok.data();
    const auto* e = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
      throw Error(ErrorKind::Io, "line " + std::to_string(line_no_) + ": bad " + what + " '" +
                                     tok + "'");
    return v;
  }

 private:
  std::istream& is_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

template <class Item, class ReadFn>
std::vector<Item> read_indexed(std::istream& is, const char* what, ReadFn read_item) {
  TokenStream ts(is);
  const auto count = ts.number<long long>("count");
  if (count < 0) throw Error(ErrorKind::Io, std::string("negative ") + what + " count");
  std::vector<Item> items(static_cast<std::size_t>(count));
  std::vector<bool> seen(items.size(), false);
  for (long long k = 0; k < count; ++k) {
    const auto idx = ts.number<long long>("index");
    if (idx < 0 || idx >= count || seen[static_cast<std::size_t>(idx)])
      throw Error(ErrorKind::Io, std::string("bad or repeated ") + what + " index " +
                                     std::to_string(idx));
    seen[static_cast<std::size_t>(idx)] = true;
    items[static_cast<std::size_t>(idx)] = read_item(ts);
  }
  return items;
}

}  // namespace

void write_nodes(std::ostream& os, std::span<const Point2> vertices) {
  os << vertices.size() << '\n';
  for (std::size_t i = 0; i < vertices.size(); ++i)
    os << i << ' ' << fmt_double(vertices[i].x) << ' ' << fmt_double(vertices[i].y) << '\n';
}

void write_elements(std::ostream& os, std::span<const Triangle> triangles) {
  os << triangles.size() << '\n';
  for (std::size_t i = 0; i < triangles.size(); ++i)
    os << i << ' ' << triangles[i].v[0] << ' ' << triangles[i].v[1] << ' ' << triangles[i].v[2]
       << '\n';
}

std::vector<Point2> read_nodes(std::istream& is) {
  return read_indexed<Point2>(is, "node", [](TokenStream& ts) {
    Point2 p;
    p.x = ts.number<double>("x coordinate");
    p.y = ts.number<double>("y coordinate");
    return p;
  });
}

std::vector<Triangle> read_elements(std::istream& is) {
  return read_indexed<Triangle>(is, "element", [](TokenStream& ts) {
    Triangle t{};
    for (auto& v : t.v) v = ts.number<VertexId>("vertex index");
    return t;
  });
}

void write_mesh(const Mesh2& mesh, const std::filesystem::path& node_file,
                const std::filesystem::path& ele_file) {
  std::ofstream n(node_file);
  std::ofstream e(ele_file);
  if (!n || !e) throw Error(ErrorKind::Io, "cannot open mesh output files");
  write_nodes(n, mesh.vertices());
  write_elements(e, mesh.triangles());
  if (!n || !e) throw Error(ErrorKind::Io, "error writing mesh files");
}

Mesh2 read_mesh(const std::filesystem::path& node_file, const std::filesystem::path& ele_file) {
  std::ifstream n(node_file);
  if (!n) throw Error(ErrorKind::Io, "cannot read " + node_file.string());
  std::ifstream e(ele_file);
  if (!e) throw Error(ErrorKind::Io, "cannot read " + ele_file.string());
  auto nodes = read_nodes(n);
  auto elems = read_elements(e);
  try {
    return Mesh2(std::move(nodes), std::move(elems));
  } catch (const Error& err) {
    throw Error(ErrorKind::Io, std::string("inconsistent mesh files: ") + err.what());
  }
}

void write_vtk(std::ostream& os, const Mesh2& mesh, const VtkFields& fields,
               const std::string& title) {
  const auto nv = mesh.num_vertices();
  const auto nt = mesh.num_triangles();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (const auto& p : mesh.vertices()) os << fmt_double(p.x) << ' ' << fmt_double(p.y) << " 0\n";
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles())
    os << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
  os << "CELL_TYPES " << nt << '\n';
  for (std::size_t i = 0; i < nt; ++i) os << "5\n";
  if (fields.damage || fields.energy_density) {
    os << "CELL_DATA " << nt << '\n';
    if (fields.damage) {
      if (fields.damage->size() != nt)
        throw Error(ErrorKind::SizeMismatch, "vtk damage field length");
      os << "SCALARS damage double 1\nLOOKUP_TABLE default\n";
      for (double d : *fields.damage) os << fmt_double(d) << '\n';
    }
    if (fields.energy_density) {
      if (fields.energy_density->size() != nt)
        throw Error(ErrorKind::SizeMismatch, "vtk energy field length");
      os << "SCALARS energy_density double 1\nLOOKUP_TABLE default\n";
      for (double d : *fields.energy_density) os << fmt_double(d) << '\n';
    }
  }
  if (fields.displacement) {
    if (fields.displacement->size() != nv)
      throw Error(ErrorKind::SizeMismatch, "vtk displacement field length");
    os << "POINT_DATA " << nv << "\nVECTORS displacement double\n";
    for (const auto& u : *fields.displacement)
      os << fmt_double(u.x) << ' ' << fmt_double(u.y) << " 0\n";
  }
}

void write_vtk(const std::filesystem::path& file, const Mesh2& mesh, const VtkFields& fields,
               const std::string& title) {
  std::ofstream os(file);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + file.string());
  write_vtk(os, mesh, fields, title);
}

}  // namespace griffith
