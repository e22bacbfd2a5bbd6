#include "checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "errors.hpp"

namespace alfven {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'A', 'L', 'F', 'V', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }
  std::vector<unsigned char> bytes;
};

class Reader {
 public:
  Reader(const std::vector<unsigned char>& b) : bytes_(b) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw IoError("checkpoint truncated");
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void write_checkpoint(const std::string& path, const ElsasserState& state, double s, int k, Precision precision) {
  require_compatible(state.plus, state.minus, "write_checkpoint");
  const auto& spec = state.grid()->spec();

  Writer payload;
  for (const auto* f : {&state.plus, &state.minus}) {
    for (int c = 0; c < f->components(); ++c) {
      for (const auto& z : (*f)[c]) {
        if (precision == Precision::complex128) {
          payload.put(z.real());
          payload.put(z.imag());
        } else {
          payload.put(static_cast<float>(z.real()));
          payload.put(static_cast<float>(z.imag()));
        }
      }
    }
  }

  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic, kMagic + 8);
  w.put(kCheckpointVersion);
  w.put(static_cast<std::uint32_t>(precision));
  w.put(static_cast<std::uint32_t>(spec.ndim()));
  for (int a = 0; a < 3; ++a) w.put(static_cast<std::uint32_t>(a < spec.ndim() ? spec.dims[a] : 1));
  w.put(spec.half_length);
  w.put(spec.dealias_fraction);
  w.put(state.epsilon);
  w.put(state.nu);
  w.put(s);
  w.put(static_cast<std::int32_t>(k));
  w.put(state.t_star);
  w.put(state.data_hash);
  w.put(fnv1a(payload.bytes.data(), payload.bytes.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out.write(reinterpret_cast<const char*>(w.bytes.data()), static_cast<std::streamsize>(w.bytes.size()));
  out.write(reinterpret_cast<const char*>(payload.bytes.data()), static_cast<std::streamsize>(payload.bytes.size()));
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw IoError("not a checkpoint file: " + path);

  Reader r(bytes);
  for (int i = 0; i < 8; ++i) r.get<char>();
  Checkpoint ck;
  auto& h = ck.header;
  h.version = r.get<std::uint32_t>();
  if (h.version != kCheckpointVersion) throw IoError("unsupported checkpoint version " + std::to_string(h.version));
  const auto prec = r.get<std::uint32_t>();
  if (prec != 64 && prec != 128) throw IoError("bad checkpoint precision");
  h.precision = static_cast<Precision>(prec);
  const auto ndim = r.get<std::uint32_t>();
  if (ndim != 2 && ndim != 3) throw IoError("bad checkpoint dimension");
  h.grid.dims.clear();
  for (int a = 0; a < 3; ++a) {
    const auto d = r.get<std::uint32_t>();
    if (a < static_cast<int>(ndim)) h.grid.dims.push_back(static_cast<int>(d));
  }
  h.grid.half_length = r.get<double>();
  h.grid.dealias_fraction = r.get<double>();
  h.epsilon = r.get<double>();
  h.nu = r.get<double>();
  h.s = r.get<double>();
  h.k = r.get<std::int32_t>();
  h.t_star = r.get<double>();
  h.data_hash = r.get<std::uint64_t>();
  h.payload_hash = r.get<std::uint64_t>();

  const std::size_t start = r.pos();
  if (fnv1a(bytes.data() + start, bytes.size() - start) != h.payload_hash)
    throw IoError("checkpoint payload hash mismatch: " + path);

  GridPtr grid;
  try {
    grid = Grid::make(h.grid);
  } catch (const ConfigError& e) {
    throw IoError(std::string("checkpoint grid invalid: ") + e.what());
  }
  const int n = grid->ndim();
  auto& st = ck.state;
  st.plus = SpectralVectorField(grid, n);
  st.minus = SpectralVectorField(grid, n);
  for (auto* f : {&st.plus, &st.minus}) {
    for (int c = 0; c < n; ++c) {
      for (auto& z : (*f)[c]) {
        if (h.precision == Precision::complex128) {
          const double re = r.get<double>();
          const double im = r.get<double>();
          z = Complex{re, im};
        } else {
          const float re = r.get<float>();
          const float im = r.get<float>();
          z = Complex{re, im};
        }
      }
    }
  }
  if (r.pos() != bytes.size()) throw IoError("trailing bytes in checkpoint: " + path);
  st.t_star = h.t_star;
  st.epsilon = h.epsilon;
  st.nu = h.nu;
  st.data_hash = h.data_hash;
  return ck;
}

}  // namespace alfven
