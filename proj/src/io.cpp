#include "magweyl/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace magweyl {
namespace {

constexpr char kMagic[4] = {'M', 'G', 'W', 'L'};
constexpr std::uint32_t kVersion = 1;
constexpr char kTagSymbol[8] = {'S', 'Y', 'M', 'B', 'O', 'L', 0, 0};
constexpr char kTagOperator[8] = {'O', 'P', 'M', 'A', 'T', 0, 0, 0};

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw input_error("io: cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path, const char tag[8]) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw input_error("io: cannot open for reading: " + path);
  char magic[4], t[8];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw input_error("io: bad magic in " + path);
  if (get_u32(is) != kVersion) throw input_error("io: unsupported version in " + path);
  is.read(t, 8);
  if (!is || std::memcmp(t, tag, 8) != 0)
    throw input_error("io: wrong container kind in " + path);
  return is;
}

void write_header(std::ostream& os, const char tag[8], const PhaseGrid& g, int n_out,
                  int n_in) {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  os.write(tag, 8);
  put_u32(os, std::uint32_t(g.d));
  put_u32(os, std::uint32_t(g.n));
  put_f64(os, g.x_extent);
  put_f64(os, g.eps);
  put_u32(os, std::uint32_t(n_out));
  put_u32(os, std::uint32_t(n_in));
}

PhaseGrid read_header(std::istream& is, int& n_out, int& n_in) {
  const int d = int(get_u32(is));
  const int n = int(get_u32(is));
  const double x_extent = get_f64(is);
  const double eps = get_f64(is);
  n_out = int(get_u32(is));
  n_in = int(get_u32(is));
  if (!is) throw input_error("io: truncated header");
  return PhaseGrid::make(d, n, x_extent, eps);
}

}  // namespace

void write_symbol(const std::string& path, const Symbol& f) {
  auto os = open_out(path);
  write_header(os, kTagSymbol, f.grid, f.n_out, f.n_in);
  // storage order already matches the container order
  os.write(reinterpret_cast<const char*>(f.values.data()),
           std::streamsize(f.values.size() * sizeof(cplx)));
  if (!os) throw input_error("io: write failed: " + path);
}

Symbol read_symbol(const std::string& path) {
  auto is = open_in(path, kTagSymbol);
  int n_out = 0, n_in = 0;
  const PhaseGrid g = read_header(is, n_out, n_in);
  Symbol f(g, n_out, n_in);
  is.read(reinterpret_cast<char*>(f.values.data()),
          std::streamsize(f.values.size() * sizeof(cplx)));
  if (!is) throw input_error("io: truncated symbol data in " + path);
  return f;
}

void write_operator(const std::string& path, const OperatorMatrix& M) {
  auto os = open_out(path);
  write_header(os, kTagOperator, M.grid, M.n_out, M.n_in);
  for (long r = 0; r < M.M.rows(); ++r)
    for (long c = 0; c < M.M.cols(); ++c) {
      const cplx v = M.M(r, c);
      os.write(reinterpret_cast<const char*>(&v), sizeof(cplx));
    }
  if (!os) throw input_error("io: write failed: " + path);
}

OperatorMatrix read_operator(const std::string& path) {
  auto is = open_in(path, kTagOperator);
  int n_out = 0, n_in = 0;
  const PhaseGrid g = read_header(is, n_out, n_in);
  OperatorMatrix M;
  M.grid = g;
  M.n_out = n_out;
  M.n_in = n_in;
  const long rows = g.npts() * n_out, cols = g.npts() * n_in;
  M.M.resize(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      cplx v;
      is.read(reinterpret_cast<char*>(&v), sizeof(cplx));
      M.M(r, c) = v;
    }
  if (!is) throw input_error("io: truncated operator data in " + path);
  return M;
}

void write_symbol_csv(const std::string& path, const Symbol& f) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw input_error("io: cannot open for writing: " + path);
  std::fprintf(fp, "x_index,xi_index,row,col,re,im\n");
  const long np = f.grid.npts();
  const long fs = f.fiber_size();
  for (long xf = 0; xf < np; ++xf)
    for (long kf = 0; kf < np; ++kf)
      for (int r = 0; r < f.n_out; ++r)
        for (int c = 0; c < f.n_in; ++c) {
          const cplx v = f.values[(xf * np + kf) * fs + long(r) * f.n_in + c];
          std::fprintf(fp, "%ld,%ld,%d,%d,%.17g,%.17g\n", xf, kf, r, c, v.real(),
                       v.imag());
        }
  std::fclose(fp);
}

}  // namespace magweyl
