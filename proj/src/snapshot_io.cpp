#include "membrane/snapshot_io.hpp"

#include "json.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace membrane {

namespace {

using ordered_json = nlohmann::ordered_json;

void append_rows(std::vector<double>& buf, const Eigen::ArrayXXd& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) buf.push_back(a(i, j));
}

void byteswap_all(std::vector<double>& buf) {
  for (double& d : buf) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    u = __builtin_bswap64(u);
    std::memcpy(&d, &u, 8);
  }
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
  const auto g = snap.x.grid();
  const bool has_xdot = !snap.xdot.x.empty();
  ordered_json head;
  head["schema"] = 1;
  head["topology"] = g->topology == Topology::sphere ? "sphere" : "torus";
  head["n1"] = g->n1;
  head["n2"] = g->n2;
  head["d"] = snap.x.d;
  head["time"] = snap.t;
  head["has_xdot"] = has_xdot;
  if (snap.x.has_winding) {
    head["wind1"] = std::vector<double>(snap.x.wind1.data(),
                                        snap.x.wind1.data() + snap.x.d);
    head["wind2"] = std::vector<double>(snap.x.wind2.data(),
                                        snap.x.wind2.data() + snap.x.d);
  } else {
    head["wind1"] = nullptr;
    head["wind2"] = nullptr;
  }

  std::vector<double> buf;
  buf.reserve(std::size_t(snap.x.d) * g->n1 * g->n2 * (has_xdot ? 2 : 1));
  for (const auto& f : snap.x.x) append_rows(buf, f.v);
  if (has_xdot)
    for (const auto& f : snap.xdot.x) append_rows(buf, f.v);
  if constexpr (std::endian::native == std::endian::big) byteswap_all(buf);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << head.dump() << "\n";
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing header: " + path);
  ordered_json head = ordered_json::parse(line);

  const std::string topo = head.at("topology").get<std::string>();
  const int n1 = head.at("n1").get<int>();
  const int n2 = head.at("n2").get<int>();
  const int d = head.at("d").get<int>();
  const bool has_xdot = head.at("has_xdot").get<bool>();
  auto g = topo == "sphere" ? SurfaceGrid::sphere(n1, n2) : SurfaceGrid::torus(n1, n2);

  Snapshot snap;
  snap.t = head.at("time").get<double>();
  snap.x = FieldConfiguration::zero(g, d);
  if (has_xdot) snap.xdot = FieldConfiguration::zero(g, d);
  if (!head.at("wind1").is_null()) {
    snap.x.has_winding = true;
    auto w1 = head.at("wind1").get<std::vector<double>>();
    auto w2 = head.at("wind2").get<std::vector<double>>();
    if (int(w1.size()) != d || int(w2.size()) != d)
      throw std::runtime_error("winding length mismatch: " + path);
    snap.x.wind1 = Eigen::Map<Eigen::VectorXd>(w1.data(), d);
    snap.x.wind2 = Eigen::Map<Eigen::VectorXd>(w2.data(), d);
  }

  const std::size_t per = std::size_t(n1) * n2;
  std::vector<double> buf(per);
  auto read_field = [&](Eigen::ArrayXXd& a) {
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(per * sizeof(double)));
    if (!in) throw std::runtime_error("truncated payload: " + path);
    if constexpr (std::endian::native == std::endian::big) byteswap_all(buf);
    std::size_t k = 0;
    a.resize(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) a(i, j) = buf[k++];
  };
  for (int c = 0; c < d; ++c) read_field(snap.x.x[c].v);
  if (has_xdot)
    for (int c = 0; c < d; ++c) read_field(snap.xdot.x[c].v);
  return snap;
}

}  // namespace membrane
