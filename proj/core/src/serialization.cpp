#include "chernoff/serialization.hpp"

#include "chernoff/error.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

namespace chernoff {

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DomainError("binary grid stream truncated");
  return v;
}

void put_grid(std::ostream& out, const Grid& g) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dimension()));
  for (int a = 0; a < g.dimension(); ++a) put<std::uint64_t>(out, g.count(a));
  for (int a = 0; a < g.dimension(); ++a) {
    put<double>(out, g.lower(a));
    put<double>(out, g.upper(a));
  }
}

Grid get_grid(std::istream& in) {
  auto d = get<std::uint32_t>(in);
  if (d != 1 && d != 2) throw DomainError("binary grid header: bad dimension");
  std::array<std::size_t, 2> counts{1, 1};
  std::array<double, 2> lo{0, 0}, hi{0, 0};
  for (std::uint32_t a = 0; a < d; ++a) counts[a] = get<std::uint64_t>(in);
  for (std::uint32_t a = 0; a < d; ++a) {
    lo[a] = get<double>(in);
    hi[a] = get<double>(in);
  }
  return Grid(static_cast<int>(d), lo, hi, counts);
}

std::vector<double> get_payload(std::istream& in, std::size_t n) {
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw DomainError("binary grid stream truncated");
  return v;
}

void put_payload(std::ostream& out, const GridFunction& f) {
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
}

}  // namespace

void write_csv(std::ostream& out, const GridFunction& f) {
  const Grid& g = f.grid();
  out << (g.dimension() == 1 ? "x,value\n" : "x,y,value\n");
  char buf[96];
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    if (g.dimension() == 1)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[0], f[i]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], f[i]);
    out << buf;
  }
}

void write_csv(const std::string& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path);
  write_csv(out, f);
}

void write_binary(std::ostream& out, const GridFunction& f) {
  put_grid(out, f.grid());
  put_payload(out, f);
}

GridFunction read_binary(std::istream& in) {
  Grid g = get_grid(in);
  return GridFunction(g, get_payload(in, g.size()));
}

void write_binary(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path);
  write_binary(out, f);
}

GridFunction read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  return read_binary(in);
}

void write_binary(std::ostream& out, const SpaceTimeFunction& u) {
  put_grid(out, u.grid());
  put<std::uint64_t>(out, u.size());
  for (double t : u.times()) put<double>(out, t);
  for (const auto& s : u.samples()) put_payload(out, s);
}

SpaceTimeFunction read_space_time_binary(std::istream& in) {
  Grid g = get_grid(in);
  auto n = get<std::uint64_t>(in);
  std::vector<double> times(n);
  for (auto& t : times) t = get<double>(in);
  std::vector<GridFunction> samples;
  samples.reserve(n);
  for (std::uint64_t j = 0; j < n; ++j) samples.emplace_back(g, get_payload(in, g.size()));
  return SpaceTimeFunction(std::move(times), std::move(samples));
}

}  // namespace chernoff
