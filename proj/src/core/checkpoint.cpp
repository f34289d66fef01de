#include "core/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <vector>

#include "core/common.hpp"

namespace trelax {

namespace {

constexpr char kMagic[8] = {'T', 'R', 'L', 'X', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

struct Header {
  char magic[8];
  std::uint32_t version;
  std::uint32_t endian_probe;  // 1 when producer byte order matches reader
  std::int32_t dim;
  std::int32_t n;
  std::int32_t components;
  std::int32_t order;
  double box_length;
  double delta;
  double alpha;
  double chi;
  double nu;
  double t;
};
static_assert(sizeof(Header) == 80, "fixed on-disk layout");

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void save_checkpoint(const FlowState& state, const std::string& path) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";

  Header h{};
  std::memcpy(h.magic, kMagic, sizeof kMagic);
  h.version = kVersion;
  h.endian_probe = 1;
  h.dim = state.grid.dim();
  h.n = state.grid.n();
  h.components = state.u.components();
  h.order = state.filter.order;
  h.box_length = state.grid.length();
  h.delta = state.filter.delta;
  h.alpha = state.filter.alpha;
  h.chi = state.chi;
  h.nu = state.nu;
  h.t = state.t;

  FilePtr f(std::fopen(tmp.c_str(), "wb"));
  if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
  bool ok = std::fwrite(&h, sizeof h, 1, f.get()) == 1;
  ok = ok && std::fwrite(state.u.data(), sizeof(std::complex<double>),
                         state.u.size(), f.get()) == state.u.size();
  ok = ok && std::fflush(f.get()) == 0;
  f.reset();
  if (!ok) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + target.string());
  }
}

FlowState load_checkpoint(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path);
  Header h{};
  if (std::fread(&h, sizeof h, 1, f.get()) != 1)
    throw IoError(path + ": truncated header");
  if (std::memcmp(h.magic, kMagic, sizeof kMagic) != 0)
    throw IoError(path + ": not a checkpoint file");
  if (h.version != kVersion)
    throw IoError(path + ": unsupported version " + std::to_string(h.version));
  if (h.endian_probe != 1)
    throw IoError(path + ": foreign byte order");

  try {
    GridSpec grid(h.dim, h.n, h.box_length);
    SpectralField u(grid, h.components);
    if (std::fread(u.data(), sizeof(std::complex<double>), u.size(), f.get()) !=
        u.size())
      throw IoError(path + ": truncated coefficient block");

    FlowState state(grid, std::move(u));
    state.t = h.t;
    state.nu = h.nu;
    state.chi = h.chi;
    state.filter.delta = h.delta;
    state.filter.alpha = h.alpha;
    state.filter.order = h.order;
    state.filter.validate();
    return state;
  } catch (const InvalidInput& e) {
    throw IoError(path + ": malformed header (" + e.what() + ")");
  }
}

}  // namespace trelax
