#include "choquard/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

constexpr char kMagic[8] = {'C', 'H', 'O', 'Q', 'F', 'L', 'D', '1'};
constexpr std::size_t kHeaderBytes = 8 + 2 * 4 + 4 * 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorCode::corrupt_snapshot, why);
}

}  // namespace

void write_snapshot(const Field& u, const Params& params,
                    const std::filesystem::path& path) {
  params.validate();
  const Grid& g = u.grid;
  if (g.dim() != params.N)
    throw Error(ErrorCode::shape_mismatch,
                "grid dimension does not match params.N");

  std::string buf;
  buf.reserve(kHeaderBytes + 8 * u.size());
  buf.append(kMagic, sizeof(kMagic));
  put_u32(buf, static_cast<std::uint32_t>(g.dim()));
  put_u32(buf, static_cast<std::uint32_t>(g.n()));
  put_f64(buf, g.L());
  put_f64(buf, params.alpha);
  put_f64(buf, params.p);
  put_f64(buf, params.q);
  for (double v : u.data) put_f64(buf, v);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::invalid_config, "cannot open " + path.string());
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw Error(ErrorCode::invalid_config, "write failed: " + path.string());
}

std::pair<Field, Params> read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) corrupt("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < kHeaderBytes) corrupt("file shorter than the header");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    corrupt("bad magic");

  const std::uint32_t dim = get_u32(bytes.data() + 8);
  const std::uint32_t n = get_u32(bytes.data() + 12);
  const double L = get_f64(bytes.data() + 16);
  Params params;
  params.N = static_cast<int>(dim);
  params.alpha = get_f64(bytes.data() + 24);
  params.p = get_f64(bytes.data() + 32);
  params.q = get_f64(bytes.data() + 40);

  Grid grid;
  try {
    grid = build_grid(static_cast<int>(dim), static_cast<int>(n), L);
    params.validate();
  } catch (const Error& e) {
    corrupt(std::string("invalid header: ") + e.what());
  }

  const std::size_t expected = kHeaderBytes + 8 * grid.total_points();
  if (bytes.size() != expected)
    corrupt("payload length mismatch: got " + std::to_string(bytes.size()) +
            " bytes, expected " + std::to_string(expected));

  Field u(grid);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = get_f64(bytes.data() + kHeaderBytes + 8 * i);
    if (!std::isfinite(u[i])) corrupt("non-finite payload value");
  }
  return {std::move(u), params};
}

}  // namespace choquard
