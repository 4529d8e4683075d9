#include <cstring>
#include <fstream>
#include <stdexcept>

#include "geots/index.hpp"

// Index file layout (little-endian, documented in docs/index_format.md):
//   magic "GTSX", u32 format version, u8 kind, config (5 fields),
//   u64 series length, u64 series count, then the tree in preorder.

namespace geots {

namespace {

constexpr char kMagic[4] = {'G', 'T', 'S', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.write(buf, sizeof(T));
  }

  void put_doubles(const std::vector<double>& v) {
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(double)));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    in_.read(buf, sizeof(T));
    if (!in_) fail("unexpected end of file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
  }

  std::vector<double> get_doubles(std::size_t count) {
    std::vector<double> v(count);
    in_.read(reinterpret_cast<char*>(v.data()),
             static_cast<std::streamsize>(count * sizeof(double)));
    if (!in_) fail("unexpected end of file");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("index file " + name_ + ": " + what);
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

 private:
  std::istream& in_;
  std::string name_;
};

void write_band(Writer& w, const Mbts& band) {
  w.put<std::uint64_t>(band.length());
  w.put_doubles(band.upper);
  w.put_doubles(band.lower);
}

Mbts read_band(Reader& r) {
  const auto len = r.get<std::uint64_t>();
  Mbts band;
  band.upper = r.get_doubles(len);
  band.lower = r.get_doubles(len);
  return band;
}

void write_node(Writer& w, const IndexNode& node, IndexKind kind) {
  w.put<std::uint8_t>(node.is_leaf ? 1 : 0);
  w.put(node.mbr.lo.x);
  w.put(node.mbr.lo.y);
  w.put(node.mbr.hi.x);
  w.put(node.mbr.hi.y);

  if (node.is_leaf) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(node.entries.size()));
    for (const LeafEntry& e : node.entries) {
      w.put<std::uint64_t>(e.id);
      w.put(e.loc.x);
      w.put(e.loc.y);
    }
  } else {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(node.children.size()));
  }

  if (kind == IndexKind::btsr) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(node.bands.size()));
    for (const Mbts& band : node.bands) write_band(w, band);
  } else if (kind == IndexKind::sbtsr) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(node.seg_bands.segments.size()));
    for (std::size_t s = 0; s < node.seg_bands.segments.size(); ++s) {
      const MbtsSegment& seg = node.seg_bands.segments[s];
      w.put<std::uint64_t>(seg.range.begin);
      w.put<std::uint64_t>(seg.range.end);
      w.put<std::uint32_t>(static_cast<std::uint32_t>(seg.bands.size()));
      for (const Mbts& band : seg.bands) write_band(w, band);
      if (s + 1 < node.seg_bands.segments.size())
        for (std::uint64_t mask : seg.links) w.put(mask);
    }
  }

  if (!node.is_leaf)
    for (const auto& child : node.children) write_node(w, *child, kind);
}

std::unique_ptr<IndexNode> read_node(Reader& r, IndexKind kind) {
  auto node = std::make_unique<IndexNode>();
  node->is_leaf = r.get<std::uint8_t>() != 0;
  node->mbr.lo.x = r.get<double>();
  node->mbr.lo.y = r.get<double>();
  node->mbr.hi.x = r.get<double>();
  node->mbr.hi.y = r.get<double>();

  std::uint32_t child_count = 0;
  if (node->is_leaf) {
    const auto count = r.get<std::uint32_t>();
    node->entries.resize(count);
    for (auto& e : node->entries) {
      e.id = r.get<std::uint64_t>();
      e.loc.x = r.get<double>();
      e.loc.y = r.get<double>();
    }
  } else {
    child_count = r.get<std::uint32_t>();
    if (child_count < 2) r.fail("inner node with fewer than two children");
  }

  if (kind == IndexKind::btsr) {
    const auto count = r.get<std::uint32_t>();
    node->bands.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) node->bands.push_back(read_band(r));
  } else if (kind == IndexKind::sbtsr) {
    const auto seg_count = r.get<std::uint32_t>();
    node->seg_bands.segments.resize(seg_count);
    for (std::uint32_t s = 0; s < seg_count; ++s) {
      MbtsSegment& seg = node->seg_bands.segments[s];
      seg.range.begin = r.get<std::uint64_t>();
      seg.range.end = r.get<std::uint64_t>();
      const auto band_count = r.get<std::uint32_t>();
      seg.bands.reserve(band_count);
      for (std::uint32_t i = 0; i < band_count; ++i) seg.bands.push_back(read_band(r));
      if (s + 1 < seg_count) {
        seg.links.resize(band_count);
        for (auto& mask : seg.links) mask = r.get<std::uint64_t>();
      }
    }
  }

  if (!node->is_leaf) {
    node->children.reserve(child_count);
    for (std::uint32_t i = 0; i < child_count; ++i) node->children.push_back(read_node(r, kind));
  }
  return node;
}

bool bands_equal(const Mbts& a, const Mbts& b) {
  return a.upper == b.upper && a.lower == b.lower && a.members == b.members;
}

bool nodes_equal(const IndexNode& a, const IndexNode& b) {
  if (a.is_leaf != b.is_leaf || !(a.mbr == b.mbr)) return false;
  if (a.entries != b.entries) return false;
  if (a.bands.size() != b.bands.size()) return false;
  for (std::size_t i = 0; i < a.bands.size(); ++i)
    if (!bands_equal(a.bands[i], b.bands[i])) return false;
  if (a.seg_bands.segments.size() != b.seg_bands.segments.size()) return false;
  for (std::size_t s = 0; s < a.seg_bands.segments.size(); ++s) {
    const auto& sa = a.seg_bands.segments[s];
    const auto& sb = b.seg_bands.segments[s];
    if (!(sa.range == sb.range) || sa.links != sb.links) return false;
    if (sa.bands.size() != sb.bands.size()) return false;
    for (std::size_t i = 0; i < sa.bands.size(); ++i)
      if (!bands_equal(sa.bands[i], sb.bands[i])) return false;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!nodes_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

}  // namespace

void save_index(const Index& index, const std::filesystem::path& path) {
  if (!index.root) throw std::invalid_argument("save_index: index has no tree");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("index file " + path.string() + ": cannot open for writing");

  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.put(kFormatVersion);
  w.put(static_cast<std::uint8_t>(index.kind));
  w.put(index.config.min_entries);
  w.put(index.config.max_entries);
  w.put(index.config.k_mbts);
  w.put(index.config.segments);
  w.put(index.config.kmeans_seed);
  w.put<std::uint64_t>(index.series_length);
  w.put<std::uint64_t>(index.series_count);
  write_node(w, *index.root, index.kind);

  out.flush();
  if (!out) throw std::runtime_error("index file " + path.string() + ": write failed");
}

Index load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("index file " + path.string() + ": cannot open");
  Reader r(in, path.string());

  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    r.fail("not a geots index (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion)
    r.fail("format version " + std::to_string(version) + " not supported (expected " +
           std::to_string(kFormatVersion) + ")");

  Index index;
  const auto kind = r.get<std::uint8_t>();
  if (kind > static_cast<std::uint8_t>(IndexKind::sbtsr)) r.fail("unknown index kind");
  index.kind = static_cast<IndexKind>(kind);
  index.config.min_entries = r.get<std::uint32_t>();
  index.config.max_entries = r.get<std::uint32_t>();
  index.config.k_mbts = r.get<std::uint32_t>();
  index.config.segments = r.get<std::uint32_t>();
  index.config.kmeans_seed = r.get<std::uint64_t>();
  index.series_length = r.get<std::uint64_t>();
  index.series_count = r.get<std::uint64_t>();
  index.root = read_node(r, index.kind);
  if (!r.at_eof()) r.fail("trailing data after tree");
  return index;
}

bool index_equal(const Index& a, const Index& b) {
  if (a.kind != b.kind || !(a.config == b.config)) return false;
  if (a.series_length != b.series_length || a.series_count != b.series_count) return false;
  if (!a.root || !b.root) return a.root == b.root;
  return nodes_equal(*a.root, *b.root);
}

}  // namespace geots
