#include "jumpdiff/path_io.hpp"

#include "jumpdiff/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace jumpdiff {

namespace {

constexpr std::array<char, 4> magic = { 'J', 'D', 'P', 'F' };
constexpr std::uint8_t version = 1;

void put_u64(std::ostream& out, std::uint64_t v)
{
  char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v)
{
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(std::istream& in)
{
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw ValidationError("path", "truncated binary path file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in)
{
  return std::bit_cast<double>(get_u64(in));
}

} // namespace

void write_path_csv(const PathSample& path, std::ostream& out)
{
  out << "t,x\n";
  char buf[64];
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.time(i), path.values[i]);
    out << buf;
  }
}

PathSample read_path_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x", 0) != 0)
    throw ValidationError("path", "CSV path must start with header 't,x'");
  PathSample p;
  std::vector<double> ts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("path", "malformed CSV line " + std::to_string(lineno));
    char* end = nullptr;
    const double t = std::strtod(line.c_str(), &end);
    const double x = std::strtod(line.c_str() + comma + 1, &end);
    if (!std::isfinite(t) || !std::isfinite(x))
      throw ValidationError("path", "non-finite value on CSV line " + std::to_string(lineno));
    ts.push_back(t);
    p.values.push_back(x);
  }
  if (p.values.size() < 2)
    throw ValidationError("path", "need at least two observations");
  const double n = static_cast<double>(p.values.size() - 1);
  p.plan.mesh = (ts.back() - ts.front()) / n;
  p.plan.horizon = ts.back() - ts.front();
  if (!(p.plan.mesh > 0.0))
    throw ValidationError("path", "times must be increasing");
  p.plan.x0 = p.values.front();
  return p;
}

void write_path_binary(const PathSample& path, std::ostream& out)
{
  out.write(magic.data(), magic.size());
  const char head[4] = { static_cast<char>(version), 0, 0, 0 };
  out.write(head, 4);
  put_u64(out, path.values.size());
  put_f64(out, path.plan.mesh);
  put_f64(out, path.plan.horizon);
  put_u64(out, static_cast<std::uint64_t>(path.plan.substeps));
  put_f64(out, path.plan.resolved_burn_in());
  put_f64(out, path.plan.x0);
  put_u64(out, path.plan.seed);
  put_u64(out, path.plan.stream);
  for (double v : path.values)
    put_f64(out, v);
}

PathSample read_path_binary(std::istream& in)
{
  char head[8];
  if (!in.read(head, 8) || std::memcmp(head, magic.data(), 4) != 0)
    throw ValidationError("path", "not a JDPF binary path file");
  if (static_cast<std::uint8_t>(head[4]) != version)
    throw ValidationError("path", "unsupported JDPF version " +
                                    std::to_string(static_cast<int>(head[4])));
  PathSample p;
  const std::uint64_t count = get_u64(in);
  p.plan.mesh = get_f64(in);
  p.plan.horizon = get_f64(in);
  p.plan.substeps = static_cast<int>(get_u64(in));
  p.plan.burn_in = get_f64(in);
  p.plan.x0 = get_f64(in);
  p.plan.seed = get_u64(in);
  p.plan.stream = get_u64(in);
  if (count > (std::uint64_t{ 1 } << 40))
    throw ValidationError("path", "implausible observation count");
  p.values.resize(count);
  for (auto& v : p.values)
    v = get_f64(in);
  return p;
}

void save_path(const PathSample& path, const std::string& file, bool binary)
{
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out)
    throw std::runtime_error("cannot open '" + file + "' for writing");
  if (binary)
    write_path_binary(path, out);
  else
    write_path_csv(path, out);
  if (!out)
    throw std::runtime_error("write to '" + file + "' failed");
}

PathSample load_path(const std::string& file)
{
  std::ifstream in(file, std::ios::binary);
  if (!in)
    throw ValidationError("input", "cannot open path file '" + file + "'");
  char head[4] = {};
  in.read(head, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, magic.data(), 4) == 0)
    return read_path_binary(in);
  return read_path_csv(in);
}

} // namespace jumpdiff
