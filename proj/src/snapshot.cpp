#include "dnslab/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "dnslab/error.hpp"

namespace dnslab {

namespace {

using json = nlohmann::json;

constexpr char kMagic[8] = {'D', 'N', 'S', 'N', 'A', 'P', '0', '1'};
constexpr int kVersion = 1;

std::uint64_t fnv1a(const unsigned char* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

struct FieldRef {
  std::string name;
  const Field* data;
};

std::vector<FieldRef> field_table(const Snapshot& s) {
  std::vector<FieldRef> t;
  t.push_back({"phi", &s.state.phi});
  for (int a = 0; a < s.grid.dim; ++a)
    t.push_back({std::string("u_") + char('x' + a), &s.state.u[a]});
  t.push_back({"h", &s.state.h});
  t.push_back({"varphi", &s.state.varphi});
  for (int a = 0; a < s.grid.dim; ++a)
    t.push_back({std::string("psi_") + char('x' + a), &s.state.psi[a]});
  for (int a = 0; a < s.grid.dim; ++a)
    t.push_back({std::string("f_") + char('x' + a), &s.state.f[a]});
  return t;
}

Field* field_slot(Snapshot& s, const std::string& name) {
  if (name == "phi") return &s.state.phi;
  if (name == "h") return &s.state.h;
  if (name == "varphi") return &s.state.varphi;
  if (name.size() == 3 && name.compare(0, 2, "u_") == 0)
    return &s.state.u[name[2] - 'x'];
  if (name.size() == 5 && name.compare(0, 4, "psi_") == 0)
    return &s.state.psi[name[4] - 'x'];
  if (name.size() == 3 && name.compare(0, 2, "f_") == 0)
    return &s.state.f[name[2] - 'x'];
  return nullptr;
}

}  // namespace

void save_snapshot(const std::string& path, const Snapshot& s) {
  s.grid.validate();
  const std::size_t N = s.grid.size();
  std::vector<FieldRef> table = field_table(s);
  for (const FieldRef& f : table)
    if (f.data->size() != N)
      fail(ErrorKind::InvalidArgument, "snapshot field " + f.name + " does not match the grid");

  std::vector<unsigned char> payload(table.size() * N * sizeof(double));
  json fields = json::array();
  std::size_t offset = 0;
  for (const FieldRef& f : table) {
    std::memcpy(payload.data() + offset, f.data->data(), N * sizeof(double));
    fields.push_back({{"name", f.name},
                      {"dtype", "f64"},
                      {"shape", {s.grid.n[0], s.grid.n[1], s.grid.n[2]}},
                      {"offset", offset},
                      {"count", N}});
    offset += N * sizeof(double);
  }

  json header;
  header["version"] = kVersion;
  header["endianness"] = "little";
  header["time"] = s.time;
  header["params"] = {{"A", s.params.A},       {"gamma", s.params.gamma},
                      {"delta", s.params.delta}, {"alpha", s.params.alpha},
                      {"beta", s.params.beta},   {"eps", s.params.eps},
                      {"eta", s.params.eta}};
  header["grid"] = {{"dim", s.grid.dim},
                    {"boundary", s.grid.boundary == Boundary::Periodic ? "periodic" : "farfield"},
                    {"n", {s.grid.n[0], s.grid.n[1], s.grid.n[2]}},
                    {"length", {s.grid.length[0], s.grid.length[1], s.grid.length[2]}},
                    {"origin", {s.grid.origin[0], s.grid.origin[1], s.grid.origin[2]}}};
  header["fields"] = fields;
  header["payload_bytes"] = payload.size();
  header["checksum_fnv1a64"] = fnv1a(payload.data(), payload.size());
  const std::string htext = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write snapshot '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  std::uint64_t hlen = htext.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) fail(ErrorKind::Io, "short write on snapshot '" + path + "'");
}

namespace {

json read_header(std::ifstream& in, const std::string& path) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    fail(ErrorKind::Parse, "'" + path + "' is not a snapshot file");
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
  if (!in || hlen == 0 || hlen > (1u << 20))
    fail(ErrorKind::Parse, "snapshot '" + path + "' has a corrupt header length");
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) fail(ErrorKind::Parse, "snapshot '" + path + "' is truncated");
  json h = json::parse(htext, nullptr, false);
  if (h.is_discarded()) fail(ErrorKind::Parse, "snapshot '" + path + "' has a malformed header");
  if (h.value("version", -1) != kVersion)
    fail(ErrorKind::Parse, "snapshot '" + path + "' has unsupported version " +
                               std::to_string(h.value("version", -1)));
  if (h.value("endianness", "") != "little")
    fail(ErrorKind::Parse, "snapshot '" + path + "' is not little-endian");
  return h;
}

}  // namespace

std::string snapshot_header_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open snapshot '" + path + "'");
  return read_header(in, path).dump(2);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open snapshot '" + path + "'");
  json h = read_header(in, path);

  Snapshot s;
  s.time = h.at("time").get<double>();
  const json& jp = h.at("params");
  s.params.A = jp.at("A").get<double>();
  s.params.gamma = jp.at("gamma").get<double>();
  s.params.delta = jp.at("delta").get<double>();
  s.params.alpha = jp.at("alpha").get<double>();
  s.params.beta = jp.at("beta").get<double>();
  s.params.eps = jp.at("eps").get<double>();
  s.params.eta = jp.at("eta").get<double>();
  const json& jg = h.at("grid");
  std::array<std::size_t, 3> n{};
  std::array<double, 3> L{};
  for (int a = 0; a < 3; ++a) {
    n[a] = jg.at("n")[a].get<std::size_t>();
    L[a] = jg.at("length")[a].get<double>();
  }
  const bool periodic = jg.at("boundary").get<std::string>() == "periodic";
  s.grid = periodic ? Grid::periodic(jg.at("dim").get<int>(), n, L)
                    : Grid::farfield(jg.at("dim").get<int>(), n, L);
  for (int a = 0; a < 3; ++a) s.grid.origin[a] = jg.at("origin")[a].get<double>();
  s.grid.validate();

  const std::size_t payload_bytes = h.at("payload_bytes").get<std::size_t>();
  std::vector<unsigned char> payload(payload_bytes);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload_bytes));
  if (!in) fail(ErrorKind::Parse, "snapshot '" + path + "' payload is truncated");
  if (fnv1a(payload.data(), payload.size()) != h.at("checksum_fnv1a64").get<std::uint64_t>())
    fail(ErrorKind::Parse, "snapshot '" + path + "' failed its checksum");

  s.state.u = VecField(s.grid);
  s.state.psi = VecField(s.grid);
  s.state.f = VecField(s.grid);
  const std::size_t N = s.grid.size();
  for (const json& jf : h.at("fields")) {
    const std::string name = jf.at("name").get<std::string>();
    Field* slot = field_slot(s, name);
    if (!slot) fail(ErrorKind::Parse, "snapshot '" + path + "' has unknown field " + name);
    const std::size_t off = jf.at("offset").get<std::size_t>();
    const std::size_t cnt = jf.at("count").get<std::size_t>();
    if (cnt != N || off + cnt * sizeof(double) > payload.size())
      fail(ErrorKind::Parse, "snapshot '" + path + "' field " + name + " is out of bounds");
    slot->resize(N);
    std::memcpy(slot->data(), payload.data() + off, cnt * sizeof(double));
  }
  for (const FieldRef& f : field_table(s))
    if (f.data->size() != N)
      fail(ErrorKind::Parse, "snapshot '" + path + "' is missing field " + f.name);
  return s;
}

}  // namespace dnslab
