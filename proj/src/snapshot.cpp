#include "vial/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <type_traits>
#include <vector>

#include "vial/errors.hpp"

namespace vial {

namespace {

constexpr char kMagic[8] = {'V', 'I', 'A', 'L', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::ostream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void get_bytes(std::istream& in, void* data, std::size_t bytes, const std::string& path) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes)
    throw ParseError(path + ": snapshot truncated");
}

void put_u64(std::ostream& out, std::uint64_t v) { put_bytes(out, &v, sizeof v); }

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  std::uint64_t v = 0;
  get_bytes(in, &v, sizeof v, path);
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  put_bytes(out, s.data(), s.size());
}

std::string get_string(std::istream& in, const std::string& path) {
  const std::uint64_t len = get_u64(in, path);
  if (len > (1u << 20)) throw ParseError(path + ": implausible string length in snapshot");
  std::string s(len, '\0');
  get_bytes(in, s.data(), len, path);
  return s;
}

template <typename T>
void put_vector(std::ostream& out, const std::vector<T>& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  put_u64(out, v.size());
  put_bytes(out, v.data(), v.size() * sizeof(T));
}

template <typename T>
std::vector<T> get_vector(std::istream& in, const std::string& path) {
  static_assert(std::is_trivially_copyable_v<T>);
  const std::uint64_t count = get_u64(in, path);
  if (count > (1ull << 33)) throw ParseError(path + ": implausible array length in snapshot");
  std::vector<T> v(count);
  get_bytes(in, v.data(), count * sizeof(T), path);
  return v;
}

void put_adjacency(std::ostream& out, const Adjacency& adj) {
  put_vector(out, adj.offsets);
  put_vector(out, adj.nbr);
  put_vector(out, adj.wgt);
}

Adjacency get_adjacency(std::istream& in, const std::string& path) {
  Adjacency adj;
  adj.offsets = get_vector<std::size_t>(in, path);
  adj.nbr = get_vector<std::uint32_t>(in, path);
  adj.wgt = get_vector<double>(in, path);
  if (adj.offsets.empty() || adj.offsets.back() != adj.nbr.size() ||
      adj.nbr.size() != adj.wgt.size())
    throw ParseError(path + ": inconsistent adjacency block in snapshot");
  return adj;
}

// CSR transpose by counting sort.
Adjacency reversed(const Adjacency& fwd, std::size_t n_cols) {
  Adjacency rev;
  rev.offsets.assign(n_cols + 1, 0);
  for (std::uint32_t x : fwd.nbr) ++rev.offsets[x + 1];
  for (std::size_t i = 1; i <= n_cols; ++i) rev.offsets[i] += rev.offsets[i - 1];
  rev.nbr.resize(fwd.nbr.size());
  rev.wgt.resize(fwd.wgt.size());
  std::vector<std::size_t> cursor(rev.offsets.begin(), rev.offsets.end() - 1);
  for (std::size_t row = 0; row + 1 < fwd.offsets.size(); ++row)
    for (std::size_t i = fwd.offsets[row]; i < fwd.offsets[row + 1]; ++i) {
      const std::size_t slot = cursor[fwd.nbr[i]]++;
      rev.nbr[slot] = static_cast<std::uint32_t>(row);
      rev.wgt[slot] = fwd.wgt[i];
    }
  return rev;
}

}  // namespace

void save_snapshot(const SbaNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write snapshot " + path);
  put_bytes(out, kMagic, sizeof kMagic);
  put_bytes(out, &kVersion, sizeof kVersion);

  put_u64(out, net.n_social());
  for (const std::string& id : net.social_ids) put_string(out, id);
  put_u64(out, net.n_behavior());
  for (const std::string& id : net.behavior_ids) put_string(out, id);
  put_u64(out, net.vocab.value_count());
  for (std::uint32_t v = 0; v < net.vocab.value_count(); ++v) {
    put_string(out, net.vocab.value_name(v));
    put_string(out, net.vocab.type_name(net.vocab.type_of(v)));
  }

  put_adjacency(out, net.social_adj);
  put_adjacency(out, net.s2b);
  put_adjacency(out, net.s2a);

  put_vector(out, net.deg_total);
  put_vector(out, net.deg_social);
  put_vector(out, net.deg_behavior);
  put_vector(out, net.deg_attribute);
  put_vector(out, net.deg_behavior_social);
  put_vector(out, net.deg_attribute_social);
  if (!out) throw ValidationError("failed writing snapshot " + path);
}

SbaNetwork load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open snapshot " + path);
  char magic[8];
  get_bytes(in, magic, sizeof magic, path);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ParseError(path + ": not a network snapshot");
  std::uint32_t version = 0;
  get_bytes(in, &version, sizeof version, path);
  if (version != kVersion)
    throw ParseError(path + ": snapshot version " + std::to_string(version) +
                     " unsupported (expected " + std::to_string(kVersion) + ")");

  SbaNetwork net;
  const std::uint64_t n_social = get_u64(in, path);
  net.social_ids.reserve(n_social);
  for (std::uint64_t i = 0; i < n_social; ++i) net.social_ids.push_back(get_string(in, path));
  const std::uint64_t n_behavior = get_u64(in, path);
  net.behavior_ids.reserve(n_behavior);
  for (std::uint64_t i = 0; i < n_behavior; ++i)
    net.behavior_ids.push_back(get_string(in, path));
  const std::uint64_t n_values = get_u64(in, path);
  std::vector<VocabEntry> pairs;
  pairs.reserve(n_values);
  for (std::uint64_t i = 0; i < n_values; ++i) {
    VocabEntry e;
    e.value = get_string(in, path);
    e.type = get_string(in, path);
    pairs.push_back(std::move(e));
  }
  net.vocab = AttributeVocabulary::from_pairs(pairs);

  net.social_adj = get_adjacency(in, path);
  net.s2b = get_adjacency(in, path);
  net.s2a = get_adjacency(in, path);
  if (net.social_adj.rows() != n_social || net.s2b.rows() != n_social ||
      net.s2a.rows() != n_social)
    throw ParseError(path + ": adjacency row counts disagree with the node tables");
  for (std::uint32_t x : net.s2b.nbr)
    if (x >= n_behavior) throw ParseError(path + ": behavior index out of range in snapshot");
  for (std::uint32_t x : net.s2a.nbr)
    if (x >= n_values) throw ParseError(path + ": attribute index out of range in snapshot");
  for (std::uint32_t x : net.social_adj.nbr)
    if (x >= n_social) throw ParseError(path + ": social index out of range in snapshot");
  net.b2s = reversed(net.s2b, n_behavior);
  net.a2s = reversed(net.s2a, n_values);

  net.deg_total = get_vector<double>(in, path);
  net.deg_social = get_vector<double>(in, path);
  net.deg_behavior = get_vector<double>(in, path);
  net.deg_attribute = get_vector<double>(in, path);
  net.deg_behavior_social = get_vector<double>(in, path);
  net.deg_attribute_social = get_vector<double>(in, path);
  if (net.deg_total.size() != n_social || net.deg_social.size() != n_social ||
      net.deg_behavior.size() != n_social || net.deg_attribute.size() != n_social ||
      net.deg_behavior_social.size() != n_behavior ||
      net.deg_attribute_social.size() != n_values)
    throw ParseError(path + ": degree tables disagree with the node tables");

  for (std::uint32_t i = 0; i < n_social; ++i) net.social_index_by_id[net.social_ids[i]] = i;
  for (std::uint32_t i = 0; i < n_behavior; ++i)
    net.behavior_index_by_id[net.behavior_ids[i]] = i;
  return net;
}

}  // namespace vial
