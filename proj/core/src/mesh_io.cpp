#include "poromech/mesh_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "poromech/error.hpp"

namespace poromech {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line with comments stripped, split into tokens.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    throw ParseError(line_no_, std::string("unexpected end of file, expected ") + what);
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

long long to_int(const std::string& token, int line) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + token + "'");
  }
  if (pos != token.size()) throw ParseError(line, "expected an integer, got '" + token + "'");
  return v;
}

double to_double(const std::string& token, int line) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + token + "'");
  }
  if (pos != token.size()) throw ParseError(line, "expected a number, got '" + token + "'");
  return v;
}

const char* tag_token(FaceTag tag) {
  switch (tag) {
    case FaceTag::interior: return "int";
    case FaceTag::pressure: return "p";
    case FaceTag::flux: return "q";
  }
  return "?";
}

}  // namespace

PolyMesh read_mesh(std::istream& in) {
  LineReader reader(in);
  auto header = reader.next("header");
  if (header.size() != 3) throw ParseError(reader.line(), "header must be 'NV NT NF'");
  const long long nv = to_int(header[0], reader.line());
  const long long nt = to_int(header[1], reader.line());
  const long long nf = to_int(header[2], reader.line());
  if (nv < 3 || nt < 1 || nf < 3) throw ParseError(reader.line(), "invalid mesh sizes");

  std::vector<Vec2> vertices;
  vertices.reserve(nv);
  for (long long i = 0; i < nv; ++i) {
    auto t = reader.next("vertex");
    if (t.size() != 2) throw ParseError(reader.line(), "vertex line must hold 'x y'");
    vertices.emplace_back(to_double(t[0], reader.line()), to_double(t[1], reader.line()));
  }

  std::vector<std::vector<int>> cells;
  cells.reserve(nt);
  for (long long i = 0; i < nt; ++i) {
    auto t = reader.next("cell");
    const long long k = to_int(t[0], reader.line());
    if (k < 3 || static_cast<long long>(t.size()) != k + 1)
      throw ParseError(reader.line(), "cell line must hold 'k v0 ... v(k-1)' with k >= 3");
    std::vector<int> ids;
    for (long long j = 1; j <= k; ++j) {
      const long long v = to_int(t[j], reader.line());
      if (v < 0 || v >= nv) throw ParseError(reader.line(), "cell references missing vertex " + t[j]);
      ids.push_back(static_cast<int>(v));
    }
    cells.push_back(std::move(ids));
  }

  struct FaceLine {
    int a, b, line;
    FaceTag tag;
  };
  std::vector<FaceLine> face_lines;
  for (long long i = 0; i < nf; ++i) {
    auto t = reader.next("face");
    if (t.size() != 3) throw ParseError(reader.line(), "face line must hold 'va vb tag'");
    const long long a = to_int(t[0], reader.line());
    const long long b = to_int(t[1], reader.line());
    if (a < 0 || a >= nv || b < 0 || b >= nv)
      throw ParseError(reader.line(), "face references missing vertex");
    FaceTag tag;
    if (t[2] == "int") tag = FaceTag::interior;
    else if (t[2] == "p") tag = FaceTag::pressure;
    else if (t[2] == "q") tag = FaceTag::flux;
    else throw ParseError(reader.line(), "unknown face tag '" + t[2] + "'");
    face_lines.push_back({static_cast<int>(a), static_cast<int>(b), reader.line(), tag});
  }

  PolyMesh mesh;
  try {
    mesh = PolyMesh(std::move(vertices), std::move(cells));
  } catch (const Error& e) {
    throw ParseError(reader.line(), e.what());
  }
  if (mesh.num_faces() != nf)
    throw ParseError(reader.line(), "face count " + std::to_string(nf) + " does not match the " +
                                        std::to_string(mesh.num_faces()) + " faces implied by the cells");

  std::map<std::pair<int, int>, int> by_vertices;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    auto [a, b] = mesh.face(f).vertices;
    by_vertices[{std::min(a, b), std::max(a, b)}] = f;
  }
  std::vector<bool> seen(mesh.num_faces(), false);
  for (const FaceLine& fl : face_lines) {
    const auto it = by_vertices.find({std::min(fl.a, fl.b), std::max(fl.a, fl.b)});
    if (it == by_vertices.end()) throw ParseError(fl.line, "face is not an edge of any cell");
    if (seen[it->second]) throw ParseError(fl.line, "face listed twice");
    seen[it->second] = true;
    try {
      mesh.set_face_tag(it->second, fl.tag);
    } catch (const Error& e) {
      throw ParseError(fl.line, e.what());
    }
  }
  return mesh;
}

PolyMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const PolyMesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << mesh.num_faces() << '\n';
  out << std::setprecision(17);
  for (const Vec2& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const auto& vs = mesh.cell_vertices(k);
    out << vs.size();
    for (int v : vs) out << ' ' << v;
    out << '\n';
  }
  for (const Face& f : mesh.faces())
    out << f.vertices[0] << ' ' << f.vertices[1] << ' ' << tag_token(f.tag) << '\n';
}

void write_mesh_file(const std::string& path, const PolyMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

}  // namespace poromech
