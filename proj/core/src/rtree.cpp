#include <stdexcept>
#include <utility>

#include "geots/index.hpp"

namespace geots {

void IndexConfig::validate() const {
  if (min_entries < 2) throw std::invalid_argument("index config: min_entries must be >= 2");
  if (min_entries > max_entries / 2)
    throw std::invalid_argument("index config: min_entries must not exceed max_entries/2");
  if (k_mbts < 1) throw std::invalid_argument("index config: k_mbts must be >= 1");
  if (k_mbts > 64) throw std::invalid_argument("index config: k_mbts must be <= 64");
  if (segments < 1) throw std::invalid_argument("index config: segments must be >= 1");
}

namespace {

Mbr item_mbr(const LeafEntry& e) { return Mbr{e.loc, e.loc}; }
Mbr item_mbr(const std::unique_ptr<IndexNode>& c) { return c->mbr; }

template <typename Item>
Mbr cover(const std::vector<Item>& items) {
  Mbr m;
  for (const auto& it : items) m.expand(item_mbr(it));
  return m;
}

// Guttman's quadratic split: seed the two groups with the pair wasting the
// most area, then hand out the entry whose group preference is strongest.
template <typename Item>
std::pair<std::vector<Item>, std::vector<Item>> quadratic_split(std::vector<Item> items,
                                                                std::size_t min_entries) {
  const std::size_t total = items.size();

  std::size_t seed_a = 0;
  std::size_t seed_b = 1;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const Mbr u = mbr_union(item_mbr(items[i]), item_mbr(items[j]));
      const double waste = u.area() - item_mbr(items[i]).area() - item_mbr(items[j]).area();
      if (waste > worst) {
        worst = waste;
        seed_a = i;
        seed_b = j;
      }
    }
  }

  std::vector<Item> group_a;
  std::vector<Item> group_b;
  std::vector<Item> rest;
  group_a.push_back(std::move(items[seed_a]));
  group_b.push_back(std::move(items[seed_b]));
  for (std::size_t i = 0; i < total; ++i)
    if (i != seed_a && i != seed_b) rest.push_back(std::move(items[i]));

  Mbr mbr_a = item_mbr(group_a.front());
  Mbr mbr_b = item_mbr(group_b.front());

  while (!rest.empty()) {
    // if one group needs every remaining entry to reach the minimum, give
    // them all to it
    if (group_a.size() + rest.size() == min_entries) {
      for (auto& it : rest) {
        mbr_a.expand(item_mbr(it));
        group_a.push_back(std::move(it));
      }
      rest.clear();
      break;
    }
    if (group_b.size() + rest.size() == min_entries) {
      for (auto& it : rest) {
        mbr_b.expand(item_mbr(it));
        group_b.push_back(std::move(it));
      }
      rest.clear();
      break;
    }

    // pick the entry with the strongest preference
    std::size_t pick = 0;
    double best_diff = -1.0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const double da = enlargement(mbr_a, item_mbr(rest[i]));
      const double db = enlargement(mbr_b, item_mbr(rest[i]));
      const double diff = std::fabs(da - db);
      if (diff > best_diff) {
        best_diff = diff;
        pick = i;
      }
    }

    const Mbr m = item_mbr(rest[pick]);
    const double da = enlargement(mbr_a, m);
    const double db = enlargement(mbr_b, m);
    bool to_a;
    if (da != db)
      to_a = da < db;
    else if (mbr_a.area() != mbr_b.area())
      to_a = mbr_a.area() < mbr_b.area();
    else
      to_a = group_a.size() <= group_b.size();

    if (to_a) {
      mbr_a.expand(m);
      group_a.push_back(std::move(rest[pick]));
    } else {
      mbr_b.expand(m);
      group_b.push_back(std::move(rest[pick]));
    }
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  return {std::move(group_a), std::move(group_b)};
}

// Least enlargement, then smaller area, then first.
std::size_t choose_child(const IndexNode& node, Point p) {
  std::size_t best = 0;
  double best_enl = std::numeric_limits<double>::infinity();
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const Mbr& m = node.children[i]->mbr;
    const double enl = enlargement(m, Mbr{p, p});
    const double area = m.area();
    if (enl < best_enl || (enl == best_enl && area < best_area)) {
      best = i;
      best_enl = enl;
      best_area = area;
    }
  }
  return best;
}

// Inserts into the subtree; returns the split-off sibling when this node
// overflowed.
std::unique_ptr<IndexNode> insert_into(IndexNode& node, const LeafEntry& entry,
                                       const IndexConfig& cfg) {
  node.mbr.expand(entry.loc);

  if (node.is_leaf) {
    node.entries.push_back(entry);
    if (node.entries.size() <= cfg.max_entries) return nullptr;
    auto [left, right] = quadratic_split(std::move(node.entries), cfg.min_entries);
    node.entries = std::move(left);
    node.mbr = cover(node.entries);
    auto sibling = std::make_unique<IndexNode>();
    sibling->is_leaf = true;
    sibling->entries = std::move(right);
    sibling->mbr = cover(sibling->entries);
    return sibling;
  }

  const std::size_t at = choose_child(node, entry.loc);
  auto split = insert_into(*node.children[at], entry, cfg);
  if (split) {
    node.children.push_back(std::move(split));
    if (node.children.size() > cfg.max_entries) {
      auto [left, right] = quadratic_split(std::move(node.children), cfg.min_entries);
      node.children = std::move(left);
      node.mbr = cover(node.children);
      auto sibling = std::make_unique<IndexNode>();
      sibling->is_leaf = false;
      sibling->children = std::move(right);
      sibling->mbr = cover(sibling->children);
      return sibling;
    }
  }
  return nullptr;
}

}  // namespace

Index build_rtree(const Dataset& data, const IndexConfig& config) {
  config.validate();
  if (data.series.empty()) throw std::invalid_argument("build_rtree: empty dataset");

  Index index;
  index.kind = IndexKind::rtree;
  index.config = config;
  index.series_length = data.n;
  index.series_count = data.series.size();
  index.root = std::make_unique<IndexNode>();
  index.root->is_leaf = true;

  for (const auto& t : data.series) {
    auto split = insert_into(*index.root, LeafEntry{t.id, t.loc}, config);
    if (split) {
      auto new_root = std::make_unique<IndexNode>();
      new_root->is_leaf = false;
      new_root->mbr = mbr_union(index.root->mbr, split->mbr);
      new_root->children.push_back(std::move(index.root));
      new_root->children.push_back(std::move(split));
      index.root = std::move(new_root);
    }
  }
  return index;
}

}  // namespace geots
