#pragma once

// Desk-scale exact group tables.
//
// An ElementTable is the BFS closure of a spec's generators: every element
// stored as its packed canonical key, in deterministic BFS discovery order,
// with a hash index from key to position.  The closure is the membership
// oracle at desk scale, the basis for Cayley graph construction, and the
// source of exact involution censuses.
//
// Enumeration refuses (BudgetError) beyond the element cap -- default two
// million elements -- rather than degrade.  Tables can be cached on disk in
// the "GRRF1" format; reloads re-verify the spec stamp, the element count
// against the order formula, generator membership, a checksum, and a sample
// of structural membership tests.

#include <algorithm>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <optional>
#include <unordered_map>
#include <vector>

#include "grrforge/common.hpp"
#include "grrforge/group.hpp"

namespace grrforge {

struct EnumerateOptions {
  u64 cap = 2'000'000;
  std::string cache_dir;  // empty: no on-disk caching
};

class ElementTable {
 public:
  static ElementTable enumerate(const GroupSpec& spec, const EnumerateOptions& opt = {}) {
    if (spec.family != Family::Perm) {
      Bi order = group_order(spec);
      if (order > opt.cap)
        throw BudgetError("group order " + order.str() + " exceeds the enumeration cap " +
                          std::to_string(opt.cap));
    }
    if (!opt.cache_dir.empty() && spec.family != Family::Perm) {
      auto path = cache_path(opt.cache_dir, spec);
      if (auto cached = try_load(path, spec)) return std::move(*cached);
      ElementTable t = enumerate_fresh(spec, opt);
      t.save(path);
      return t;
    }
    return enumerate_fresh(spec, opt);
  }

  const GroupSpec& spec() const { return spec_; }
  u64 size() const { return keys_.size(); }
  bool loaded_from_cache() const { return from_cache_; }

  Mat element(u32 idx) const { return unpack_key(spec_.field, spec_.n, keys_.at(idx)); }
  Key key(u32 idx) const { return keys_.at(idx); }

  // Looks up any representative (canonicalizes first).
  std::optional<u32> find(const Mat& m) const {
    auto it = index_.find(pack_key(spec_.field, canonical_rep(spec_, m)));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  u32 must_find(const Mat& m) const {
    auto idx = find(m);
    if (!idx) throw DomainError("element is not in the enumerated group");
    return *idx;
  }

  u32 mul(u32 a, u32 b) const {
    Mat p = mat_mul(spec_.field, element(a), element(b));
    return index_.at(pack_key(spec_.field, canonical_rep(spec_, p)));
  }

  u32 inverse(u32 a) const {
    Mat inv = mat_inv(spec_.field, element(a));
    return index_.at(pack_key(spec_.field, canonical_rep(spec_, inv)));
  }

  u32 identity_index() const { return id_idx_; }

  bool is_identity(u32 idx) const { return idx == id_idx_; }

  // Order of the element by doubling against the table (exact, desk scale).
  u64 order_of(u32 idx) const {
    u64 ord = 1;
    u32 v = idx;
    while (v != id_idx_) {
      v = mul(v, idx);
      ++ord;
      if (ord > size()) throw DomainError("order iteration escaped the table (corrupt state)");
    }
    return ord;
  }

  // Indices of the generators used to build the table (inversion-closed).
  const std::vector<u32>& generator_indices() const { return gen_indices_; }
  const std::vector<Mat>& generator_mats() const { return gens_; }

  // Ascending indices of all involutions (order exactly 2).
  const std::vector<u32>& involutions() const {
    if (!involutions_) {
      std::vector<u32> inv;
      for (u32 i = 0; i < size(); ++i) {
        if (i == id_idx_) continue;
        if (mul(i, i) == id_idx_) inv.push_back(i);
      }
      involutions_ = std::move(inv);
    }
    return *involutions_;
  }

  u32 sample_involution(Rng& rng) const {
    const auto& inv = involutions();
    if (inv.empty()) throw DomainError("group has odd order: no involutions to sample");
    return inv[size_t(rng.below(inv.size()))];
  }

  // Left-multiplication permutation sigma_s: v -> index(s * v).  These are
  // the Cayley adjacency maps and the generation test's edges.
  std::vector<u32> left_mult_perm(u32 s) const {
    std::vector<u32> sigma(size(), 0);
    Mat S = element(s);
    for (u32 v = 0; v < size(); ++v) {
      Mat p = mat_mul(spec_.field, S, element(v));
      sigma[v] = index_.at(pack_key(spec_.field, canonical_rep(spec_, p)));
    }
    return sigma;
  }

  // Does the subset generate the whole group?  BFS from the identity over
  // left multiplications by the subset.
  bool generates(const std::vector<u32>& subset) const {
    if (subset.empty()) return size() == 1;
    std::vector<bool> seen(size(), false);
    std::vector<u32> stack{id_idx_};
    seen[id_idx_] = true;
    u64 visited = 1;
    std::vector<Mat> mats;
    mats.reserve(subset.size());
    for (u32 s : subset) mats.push_back(element(s));
    while (!stack.empty()) {
      u32 v = stack.back();
      stack.pop_back();
      Mat M = element(v);
      for (const Mat& S : mats) {
        Mat p = mat_mul(spec_.field, S, M);
        u32 w = index_.at(pack_key(spec_.field, canonical_rep(spec_, p)));
        if (!seen[w]) {
          seen[w] = true;
          ++visited;
          stack.push_back(w);
        }
      }
    }
    return visited == size();
  }

  // |C_G(g)| by full scan; g may be given by any representative.
  Bi centralizer_order(const Mat& g) const {
    Mat cg = canonical_rep(spec_, g);
    must_find(cg);
    u64 count = 0;
    for (u32 h = 0; h < size(); ++h) {
      Mat H = element(h);
      Mat hg = mat_mul(spec_.field, H, cg);
      Mat gh = mat_mul(spec_.field, cg, H);
      if (canonical_rep(spec_, hg) == canonical_rep(spec_, gh)) ++count;
    }
    return Bi(count);
  }

  Bi centralizer_order(u32 g) const { return centralizer_order(element(g)); }

  // Number of involutions commuting with g.
  u64 commuting_involution_count(u32 g) const { return commuting_involution_count(element(g)); }
  u64 commuting_involution_count(const Mat& g) const {
    Mat cg = canonical_rep(spec_, g);
    must_find(cg);
    u64 count = 0;
    for (u32 h : involutions()) {
      Mat H = element(h);
      Mat hg = mat_mul(spec_.field, H, cg);
      Mat gh = mat_mul(spec_.field, cg, H);
      if (canonical_rep(spec_, hg) == canonical_rep(spec_, gh)) ++count;
    }
    return count;
  }

  // ---- cache ------------------------------------------------------------

  static std::string cache_path(const std::string& dir, const GroupSpec& spec) {
    std::string slug = family_name(spec.family) + "_" + std::to_string(spec.n) + "_";
    slug += spec.field.is_binary() ? "b" + std::to_string(spec.field.degree())
                                   : "p" + std::to_string(spec.field.q());
    for (char& c : slug)
      if (c == '+') c = 'P'; else if (c == '-') c = 'M';
    return (std::filesystem::path(dir) / (slug + ".grrf")).string();
  }

  void save(const std::string& path) const {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write cache file " + path);
    out.write("GRRF1", 5);
    put_u8(out, 1);  // version
    put_u8(out, u8(spec_.family));
    put_u8(out, u8(spec_.n));
    put_u8(out, spec_.field.is_binary() ? 0 : 1);
    put_u32(out, spec_.field.is_binary() ? spec_.field.degree() : spec_.field.q());
    put_u32(out, spec_.field.reduction_poly());
    put_u64(out, keys_.size());
    u64 checksum = 0xcbf29ce484222325ULL;
    for (const Key& k : keys_) {
      for (u64 w : k.w) {
        put_u64(out, w);
        checksum = (checksum ^ w) * 0x100000001b3ULL;
      }
    }
    put_u64(out, checksum);
    if (!out) throw DomainError("failed writing cache file " + path);
  }

  static std::optional<ElementTable> try_load(const std::string& path, const GroupSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[5];
    in.read(magic, 5);
    if (!in || std::string(magic, 5) != "GRRF1") return std::nullopt;
    if (get_u8(in) != 1) return std::nullopt;
    if (get_u8(in) != u8(spec.family) || get_u8(in) != u8(spec.n)) return std::nullopt;
    u8 kind = get_u8(in);
    u32 par = get_u32(in), red = get_u32(in);
    if (kind != (spec.field.is_binary() ? 0 : 1)) return std::nullopt;
    if (par != (spec.field.is_binary() ? spec.field.degree() : spec.field.q())) return std::nullopt;
    if (red != spec.field.reduction_poly()) return std::nullopt;
    u64 count = get_u64(in);
    if (spec.family != Family::Perm && Bi(count) != group_order(spec)) return std::nullopt;
    ElementTable t;
    t.spec_ = spec;
    t.keys_.reserve(count);
    t.index_.reserve(size_t(count * 2));
    u64 checksum = 0xcbf29ce484222325ULL;
    for (u64 i = 0; i < count; ++i) {
      Key k;
      for (u64& w : k.w) {
        w = get_u64(in);
        checksum = (checksum ^ w) * 0x100000001b3ULL;
      }
      if (!in) return std::nullopt;
      if (!t.index_.emplace(k, u32(i)).second) return std::nullopt;  // duplicate
      t.keys_.push_back(k);
    }
    if (get_u64(in) != checksum || !in) return std::nullopt;
    // Re-verify: identity present, generators present, and a deterministic
    // sample of elements passes the structural membership test.
    auto id_it = t.index_.find(pack_key(spec.field, mat_identity(spec.n)));
    if (id_it == t.index_.end()) return std::nullopt;
    t.id_idx_ = id_it->second;
    t.gens_ = build_generator_set(spec);
    for (const Mat& g : t.gens_) {
      auto it = t.index_.find(pack_key(spec.field, g));
      if (it == t.index_.end()) return std::nullopt;
      t.gen_indices_.push_back(it->second);
    }
    for (u64 i = 0; i < std::min<u64>(count, 256); ++i) {
      if (!in_group(spec, t.element(u32(i)))) return std::nullopt;
    }
    t.from_cache_ = true;
    return t;
  }

 private:
  static void put_u8(std::ofstream& o, u8 v) { o.put(char(v)); }
  static void put_u32(std::ofstream& o, u32 v) {
    for (int i = 0; i < 4; ++i) o.put(char((v >> (8 * i)) & 0xff));
  }
  static void put_u64(std::ofstream& o, u64 v) {
    for (int i = 0; i < 8; ++i) o.put(char((v >> (8 * i)) & 0xff));
  }
  static u8 get_u8(std::ifstream& in) { return u8(in.get()); }
  static u32 get_u32(std::ifstream& in) {
    u32 v = 0;
    for (int i = 0; i < 4; ++i) v |= u32(u8(in.get())) << (8 * i);
    return v;
  }
  static u64 get_u64(std::ifstream& in) {
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64(u8(in.get())) << (8 * i);
    return v;
  }

  // Canonicalized generators with inverses appended, deduplicated, identity
  // dropped: the working edge set for BFS closures.
  static std::vector<Mat> build_generator_set(const GroupSpec& spec) {
    std::vector<Mat> out;
    auto push = [&](const Mat& m) {
      Mat c = canonical_rep(spec, m);
      if (mat_is_identity(c)) return;
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    };
    for (const Mat& g : standard_generators(spec)) {
      push(g);
      push(mat_inv(spec.field, g));
    }
    return out;
  }

  static ElementTable enumerate_fresh(const GroupSpec& spec, const EnumerateOptions& opt) {
    ElementTable t;
    t.spec_ = spec;
    t.gens_ = build_generator_set(spec);
    for (const Mat& g : t.gens_) {
      if (spec.family != Family::Perm && !in_group(spec, g))
        throw DomainError("generator fails the membership test (bad spec)");
    }
    Mat id = mat_identity(spec.n);
    Key idk = pack_key(spec.field, id);
    t.keys_.push_back(idk);
    t.index_.emplace(idk, 0);
    t.id_idx_ = 0;
    std::deque<u32> queue{0};
    while (!queue.empty()) {
      u32 v = queue.front();
      queue.pop_front();
      Mat M = t.element(v);
      for (const Mat& g : t.gens_) {
        Mat p = canonical_rep(spec, mat_mul(spec.field, M, g));
        Key k = pack_key(spec.field, p);
        auto [it, fresh] = t.index_.emplace(k, u32(t.keys_.size()));
        if (fresh) {
          if (t.keys_.size() >= opt.cap)
            throw BudgetError("enumeration exceeded the cap of " + std::to_string(opt.cap) +
                              " elements");
          t.keys_.push_back(k);
          queue.push_back(u32(t.keys_.size() - 1));
        }
      }
    }
    for (const Mat& g : t.gens_) t.gen_indices_.push_back(t.index_.at(pack_key(spec.field, g)));
    if (spec.family != Family::Perm && Bi(t.keys_.size()) != group_order(spec))
      throw DomainError("closure size " + std::to_string(t.keys_.size()) +
                        " does not match the order formula " + group_order(spec).str() +
                        " (generator defect)");
    return t;
  }

  GroupSpec spec_;
  std::vector<Key> keys_;
  std::unordered_map<Key, u32, KeyHash> index_;
  std::vector<Mat> gens_;
  std::vector<u32> gen_indices_;
  u32 id_idx_ = 0;
  bool from_cache_ = false;
  mutable std::optional<std::vector<u32>> involutions_;
};

}  // namespace grrforge
