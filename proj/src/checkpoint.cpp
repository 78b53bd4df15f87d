#include "dgles/checkpoint.hpp"

#include "dgles/error.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace dgles {

namespace {

constexpr char kMagic[8] = {'D', 'G', 'L', 'E', 'S', 'C', 'H', 'K'};

std::uint64_t fnv1a(const unsigned char* p, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

class Writer {
public:
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string& s) {
    u64(s.size());
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  void raw(const char* p, std::size_t n) { bytes.insert(bytes.end(), p, p + n); }
  std::vector<unsigned char> bytes;

private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
};

class Reader {
public:
  Reader(const unsigned char* p, std::size_t n) : p_(p), n_(n) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() { return get(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string str() {
    const std::uint64_t len = u64();
    need(len);
    std::string s(reinterpret_cast<const char*>(p_ + pos_), len);
    pos_ += len;
    return s;
  }
  void raw(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, p_ + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return n_ - pos_; }

private:
  void need(std::uint64_t k) const {
    if (k > n_ - pos_) throw IoError("checkpoint is truncated");
  }
  std::uint64_t get(int k) {
    need(k);
    std::uint64_t v = 0;
    for (int i = 0; i < k; ++i) v |= static_cast<std::uint64_t>(p_[pos_ + i]) << (8 * i);
    pos_ += k;
    return v;
  }
  const unsigned char* p_;
  std::size_t n_, pos_ = 0;
};

}  // namespace

std::string describe(const CheckpointShape& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "elements=%d variables=%d modes=%d q=%d grid=%dx%dx%d", s.n_elements,
                s.n_variables, s.n_modes, s.q, s.nx, s.ny, s.nz);
  return buf;
}

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c) {
  const auto& u = c.state;
  if (u.num_elements() != c.shape.n_elements || u.num_variables() != c.shape.n_variables ||
      u.num_modes() != c.shape.n_modes)
    throw InvalidParameter("checkpoint: state does not match the declared shape");
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kCheckpointVersion);
  const auto& s = c.shape;
  for (std::int32_t v : {s.n_elements, s.n_variables, s.n_modes, s.q, s.nx, s.ny, s.nz}) w.i32(v);
  w.str(c.config_text);
  w.f64(c.time);
  w.i64(c.step);
  w.f64(c.forcing.q0);
  w.f64(c.forcing.integral);
  w.f64(c.forcing.alpha1);
  w.f64(c.forcing.alpha2);
  w.f64(c.friction_velocity);

  const auto& st = c.statistics;
  w.u64(st.planes().size());
  for (double y : st.planes()) w.f64(y);
  w.u64(static_cast<std::uint64_t>(st.sums().size()));
  for (Eigen::Index i = 0; i < st.sums().size(); ++i) w.f64(st.sums().data()[i]);
  w.f64(st.weight());
  w.f64(st.bulk_density_sum());
  w.f64(st.bulk_velocity_sum());

  w.u32(c.have_coefficients ? 1u : 0u);
  w.u64(c.coefficients.size());
  for (const auto& k : c.coefficients) {
    for (int i = 0; i < 9; ++i) w.f64(k.c.data()[i]);
    for (int i = 0; i < 3; ++i) w.f64(k.c_q[i]);
    for (int i = 0; i < 3; ++i) w.f64(k.c_j[i]);
    w.i32(k.degenerate);
  }

  w.u64(u.data().size());
  for (double v : u.data()) w.f64(v);
  w.u64(fnv1a(w.bytes.data(), w.bytes.size()));
  return std::move(w.bytes);
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < sizeof kMagic + 12) throw IoError("checkpoint is truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw IoError("not a checkpoint file (bad magic)");
  {
    Reader tail(bytes.data() + bytes.size() - 8, 8);
    if (tail.u64() != fnv1a(bytes.data(), bytes.size() - 8)) throw IoError("checkpoint checksum mismatch");
  }
  Reader r(bytes.data() + sizeof kMagic, bytes.size() - sizeof kMagic - 8);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw IoError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                  std::to_string(kCheckpointVersion) + ")");
  Checkpoint c;
  auto& s = c.shape;
  for (std::int32_t* v : {&s.n_elements, &s.n_variables, &s.n_modes, &s.q, &s.nx, &s.ny, &s.nz}) *v = r.i32();
  if (s.n_elements < 0 || s.n_variables < 0 || s.n_modes < 0) throw IoError("checkpoint shape is invalid");
  c.config_text = r.str();
  c.time = r.f64();
  c.step = r.i64();
  c.forcing.q0 = r.f64();
  c.forcing.integral = r.f64();
  c.forcing.alpha1 = r.f64();
  c.forcing.alpha2 = r.f64();
  c.friction_velocity = r.f64();

  const std::uint64_t n_planes = r.u64();
  if (n_planes > r.remaining() / 8) throw IoError("checkpoint is truncated");
  std::vector<double> planes(n_planes);
  for (auto& y : planes) y = r.f64();
  const std::uint64_t n_sums = r.u64();
  if (n_sums != n_planes * pq::count) throw IoError("checkpoint statistics block has the wrong size");
  RowMatrix sums(static_cast<Eigen::Index>(n_planes), pq::count);
  for (std::uint64_t i = 0; i < n_sums; ++i) sums.data()[i] = r.f64();
  const double weight = r.f64(), brho = r.f64(), bu = r.f64();
  c.statistics = ChannelStatistics(std::move(planes));
  c.statistics.restore(std::move(sums), weight, brho, bu);

  c.have_coefficients = r.u32() != 0;
  const std::uint64_t n_coef = r.u64();
  if (n_coef > r.remaining() / (15 * 8)) throw IoError("checkpoint is truncated");
  c.coefficients.resize(n_coef);
  for (auto& k : c.coefficients) {
    for (int i = 0; i < 9; ++i) k.c.data()[i] = r.f64();
    for (int i = 0; i < 3; ++i) k.c_q[i] = r.f64();
    for (int i = 0; i < 3; ++i) k.c_j[i] = r.f64();
    k.degenerate = r.i32();
  }

  const std::uint64_t n = r.u64();
  const std::uint64_t expected = static_cast<std::uint64_t>(s.n_elements) * s.n_variables * s.n_modes;
  if (n != expected) throw IoError("checkpoint state size does not match its shape header");
  if (n > r.remaining() / 8) throw IoError("checkpoint is truncated");
  c.state = ModalField(s.n_elements, s.n_variables, s.n_modes, VariableSet::prognostic);
  for (auto& v : c.state.data()) v = r.f64();
  if (r.remaining() != 0) throw IoError("checkpoint has trailing bytes");
  return c;
}

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  const auto bytes = encode_checkpoint(c);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint '" + tmp + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write checkpoint '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place: " + ec.message());
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace dgles
