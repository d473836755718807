#include "catamp/serialize.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace catamp {

namespace {

void write_header(std::ostream& os, const char* kind, const ModeShape& shape, double deficit) {
  os << "catamp-state 1 " << kind << '\n' << "dims";
  for (int d : shape.dims()) os << ' ' << d;
  os << '\n' << std::setprecision(17) << "deficit " << deficit << '\n';
}

void write_index(std::ostream& os, const std::vector<int>& idx) {
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? " " : "") << idx[k];
}

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(std::string("read_state: missing ") + what);
  return line;
}

struct Header {
  ModeShape shape;
  double deficit;
};

Header read_header(std::istream& is, const std::string& kind) {
  std::istringstream h(next_line(is, "header"));
  std::string magic, k;
  int version = 0;
  h >> magic >> version >> k;
  if (magic != "catamp-state" || version != 1 || k != kind)
    throw std::runtime_error("read_state: expected a '" + kind + "' state header");
  std::istringstream d(next_line(is, "dims"));
  std::string tag;
  d >> tag;
  if (tag != "dims") throw std::runtime_error("read_state: expected dims line");
  std::vector<int> dims;
  for (int v; d >> v;) dims.push_back(v);
  std::istringstream f(next_line(is, "deficit"));
  double deficit = 0.0;
  f >> tag >> deficit;
  if (tag != "deficit" || f.fail()) throw std::runtime_error("read_state: expected deficit line");
  return {ModeShape(std::move(dims)), deficit};
}

std::vector<int> read_index(std::istringstream& in, int modes) {
  std::vector<int> idx(modes);
  for (auto& v : idx)
    if (!(in >> v)) throw std::runtime_error("read_state: malformed index");
  return idx;
}

}  // namespace

void write_state(std::ostream& os, const FockState& psi) {
  write_header(os, "pure", psi.shape(), psi.norm_deficit());
  for (std::size_t f = 0; f < psi.size(); ++f) {
    if (psi[f] == cplx(0.0)) continue;
    write_index(os, psi.shape().unflat(f));
    os << ' ' << psi[f].real() << ' ' << psi[f].imag() << '\n';
  }
}

void write_state(std::ostream& os, const DensityOperator& rho) {
  write_header(os, "mixed", rho.shape(), rho.trace_deficit());
  for (std::size_t r = 0; r < rho.dim(); ++r)
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      const cplx v = rho(r, c);
      if (v == cplx(0.0)) continue;
      write_index(os, rho.shape().unflat(r));
      os << " ; ";
      write_index(os, rho.shape().unflat(c));
      os << ' ' << v.real() << ' ' << v.imag() << '\n';
    }
}

FockState read_pure_state(std::istream& is) {
  const auto h = read_header(is, "pure");
  std::vector<cplx> amps(h.shape.size(), 0.0);
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    std::istringstream in(line);
    const auto idx = read_index(in, h.shape.modes());
    double re, im;
    if (!(in >> re >> im)) throw std::runtime_error("read_state: malformed amplitude");
    amps[h.shape.flat(idx)] = {re, im};
  }
  return FockState(h.shape, std::move(amps), h.deficit);
}

DensityOperator read_mixed_state(std::istream& is) {
  const auto h = read_header(is, "mixed");
  const std::size_t d = h.shape.size();
  std::vector<cplx> m(d * d, 0.0);
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    std::istringstream in(line);
    const auto r = read_index(in, h.shape.modes());
    std::string sep;
    if (!(in >> sep) || sep != ";") throw std::runtime_error("read_state: expected ';'");
    const auto c = read_index(in, h.shape.modes());
    double re, im;
    if (!(in >> re >> im)) throw std::runtime_error("read_state: malformed entry");
    m[h.shape.flat(r) * d + h.shape.flat(c)] = {re, im};
  }
  return DensityOperator(h.shape, std::move(m), h.deficit);
}

}  // namespace catamp
