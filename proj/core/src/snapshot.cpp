#include "cdrlab/io/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "cdrlab/errors.hpp"

namespace cdrlab::io {

static_assert(std::endian::native == std::endian::little, "snapshot encoding assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'D', 'R', 'S', 'N', 'A', 'P', '\0'};
constexpr std::size_t kNameLen = 16;

class Writer {
 public:
  template <typename T>
  void put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.append(p, sizeof(T));
  }
  void put_vector(const nn::Vector& v) {
    put<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
    buf_.append(reinterpret_cast<const char*>(v.data()), sizeof(double) * static_cast<std::size_t>(v.size()));
  }
  void put_raw(std::string_view s) { buf_.append(s); }
  std::string take() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  nn::Vector get_vector() {
    const auto n = get<std::uint64_t>();
    if (n > (data_.size() - pos_) / sizeof(double)) throw FormatError("snapshot: vector length exceeds payload");
    nn::Vector v(static_cast<Eigen::Index>(n));
    std::memcpy(v.data(), data_.data() + pos_, sizeof(double) * n);
    pos_ += sizeof(double) * n;
    return v;
  }
  std::string_view get_raw(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw FormatError("snapshot: truncated data");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

void put_mlp(Writer& w, const nn::Mlp& mlp) {
  const auto& a = mlp.architecture();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(a.input_dim));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(a.hidden.size()));
  for (int h : a.hidden) w.put<std::uint32_t>(static_cast<std::uint32_t>(h));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(a.output_dim));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(nn::kParamOrderingVersion));
}

nn::Architecture get_arch(Reader& r) {
  nn::Architecture a;
  a.input_dim = static_cast<int>(r.get<std::uint32_t>());
  const auto nh = r.get<std::uint32_t>();
  if (nh > 64) throw FormatError("snapshot: implausible hidden layer count");
  a.hidden.clear();
  for (std::uint32_t i = 0; i < nh; ++i) a.hidden.push_back(static_cast<int>(r.get<std::uint32_t>()));
  a.output_dim = static_cast<int>(r.get<std::uint32_t>());
  if (r.get<std::uint32_t>() != static_cast<std::uint32_t>(nn::kParamOrderingVersion)) {
    throw FormatError("snapshot: unsupported parameter ordering version");
  }
  if (a.input_dim < 1 || a.output_dim < 1) throw FormatError("snapshot: invalid architecture");
  return a;
}

void add_section(Writer& out, std::string_view name, std::string payload) {
  char padded[kNameLen] = {};
  std::memcpy(padded, name.data(), std::min(name.size(), kNameLen - 1));
  out.put_raw(std::string_view(padded, kNameLen));
  out.put<std::uint64_t>(payload.size());
  out.put_raw(payload);
}

}  // namespace

std::string encode_snapshot(const Snapshot& snap) {
  std::vector<std::pair<std::string, std::string>> sections;
  {
    Writer w;
    w.put<std::int64_t>(snap.meta.timestep);
    w.put<std::int32_t>(snap.meta.phases_completed);
    w.put<std::uint8_t>(snap.meta.phase_trained ? 1 : 0);
    w.put<std::int64_t>(snap.meta.next_eval_mark);
    sections.emplace_back("meta", w.take());
  }
  {
    Writer w;
    put_mlp(w, snap.policy.mean);
    w.put_vector(snap.policy.flatten());
    sections.emplace_back("actor", w.take());
  }
  if (snap.critic) {
    Writer w;
    put_mlp(w, snap.critic->net);
    w.put_vector(snap.critic->net.flatten());
    sections.emplace_back("critic", w.take());
  }
  if (const auto* e = std::get_if<continual::EwcState>(&snap.continual)) {
    Writer w;
    w.put<std::uint64_t>(e->anchors.size());
    for (const auto& a : e->anchors) {
      w.put<double>(a.lambda);
      w.put_vector(a.theta_star);
      w.put_vector(a.fisher);
    }
    sections.emplace_back("ewc", w.take());
  } else if (const auto* o = std::get_if<continual::OnlineEwcState>(&snap.continual)) {
    Writer w;
    w.put<double>(o->lambda);
    w.put<double>(o->gamma);
    w.put<std::uint8_t>(o->gamma_in_penalty ? 1 : 0);
    w.put<std::int32_t>(o->consolidations);
    w.put_vector(o->theta_star);
    w.put_vector(o->f_star);
    sections.emplace_back("online_ewc", w.take());
  }

  Writer out;
  out.put_raw(std::string_view(kMagic, sizeof(kMagic)));
  out.put<std::uint32_t>(kSnapshotVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(sections.size()));
  for (auto& [name, payload] : sections) add_section(out, name, std::move(payload));
  return out.take();
}

Snapshot decode_snapshot(std::string_view bytes) {
  Reader r(bytes);
  if (r.get_raw(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) throw FormatError("snapshot: bad magic");
  if (r.get<std::uint32_t>() != kSnapshotVersion) throw FormatError("snapshot: unsupported version");
  const auto count = r.get<std::uint32_t>();
  Snapshot snap;
  bool have_actor = false;
  for (std::uint32_t s = 0; s < count; ++s) {
    const std::string_view raw_name = r.get_raw(kNameLen);
    const std::string name(raw_name.data(), strnlen(raw_name.data(), kNameLen));
    const auto size = r.get<std::uint64_t>();
    if (size > bytes.size()) throw FormatError("snapshot: section larger than file");
    Reader p(r.get_raw(static_cast<std::size_t>(size)));
    if (name == "meta") {
      snap.meta.timestep = p.get<std::int64_t>();
      snap.meta.phases_completed = p.get<std::int32_t>();
      snap.meta.phase_trained = p.get<std::uint8_t>() != 0;
      snap.meta.next_eval_mark = p.get<std::int64_t>();
    } else if (name == "actor") {
      snap.policy = nn::GaussianPolicy(get_arch(p));
      const nn::Vector flat = p.get_vector();
      if (flat.size() != static_cast<Eigen::Index>(snap.policy.num_params())) {
        throw FormatError("snapshot: actor parameter count does not match architecture");
      }
      snap.policy.unflatten(flat);
      have_actor = true;
    } else if (name == "critic") {
      nn::Critic c(get_arch(p));
      const nn::Vector flat = p.get_vector();
      if (flat.size() != static_cast<Eigen::Index>(c.num_params())) {
        throw FormatError("snapshot: critic parameter count does not match architecture");
      }
      c.net.unflatten(flat);
      snap.critic = std::move(c);
    } else if (name == "ewc") {
      continual::EwcState e;
      const auto n = p.get<std::uint64_t>();
      for (std::uint64_t i = 0; i < n; ++i) {
        continual::EwcAnchor a;
        a.lambda = p.get<double>();
        a.theta_star = p.get_vector();
        a.fisher = p.get_vector();
        e.anchors.push_back(std::move(a));
      }
      snap.continual = std::move(e);
    } else if (name == "online_ewc") {
      continual::OnlineEwcState o;
      o.lambda = p.get<double>();
      o.gamma = p.get<double>();
      o.gamma_in_penalty = p.get<std::uint8_t>() != 0;
      o.consolidations = p.get<std::int32_t>();
      o.theta_star = p.get_vector();
      o.f_star = p.get_vector();
      snap.continual = std::move(o);
    }
    // Unknown sections are skipped.
  }
  if (!r.done()) throw FormatError("snapshot: trailing bytes after the last section");
  if (!have_actor) throw FormatError("snapshot: missing actor section");
  return snap;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw std::runtime_error("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  write_file_atomic(path, encode_snapshot(snap));
}

Snapshot read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

}  // namespace cdrlab::io
