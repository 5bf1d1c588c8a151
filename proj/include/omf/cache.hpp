#pragma once

// Class-set cache: one human-readable JSON document per (N, D), fingerprinted
// by seed form and algorithm version. Loading re-derives every Gram matrix
// from the stored basis and recomputes automorphisms, so a corrupted or stale
// file can only ever cause a recompute, never a wrong answer.

#include "omf/builder.hpp"
#include "omf/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace omf {

inline constexpr int kCacheVersion = 1;

inline std::string default_cache_dir() {
  const char* env = std::getenv("OMF_CACHE_DIR");
  return env ? std::string(env) : std::string();
}

// FNV-1a over the identity of the computation
inline std::string classset_fingerprint(i64 N, i64 D, const TernaryForm& seed) {
  std::string key = "omf-classset-v" + std::to_string(kCacheVersion) + "|" + std::to_string(N) +
                    "|" + std::to_string(D) + "|" + form_literal(seed);
  u64 h = 1469598103934665603ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline std::filesystem::path classset_cache_path(const std::string& dir, i64 N, i64 D) {
  return std::filesystem::path(dir) /
         ("classset-" + std::to_string(N) + "-" + std::to_string(D) + ".json");
}

inline Json genus_to_json(const Genus& gen) {
  Json j;
  j["version"] = kCacheVersion;
  j["fingerprint"] = classset_fingerprint(gen.level, gen.disc, gen.seed);
  j["level"] = json_int(gen.level);
  j["disc"] = json_int(gen.disc);
  j["seed"] = form_literal(gen.seed);
  {
    Rat m = eichler_mass(gen.level, gen.disc);
    j["mass"] = numerator(m).str() + "/" + denominator(m).str();
  }
  Json cls = Json::array();
  for (const GenusClass& c : gen.classes) {
    Json e;
    e["gram"] = gram_json(c.lat.gram);
    Json num = Json::array();
    for (int i = 0; i < 3; ++i) {
      Json row = Json::array();
      for (int k = 0; k < 3; ++k) row.push_back(json_int(c.lat.num[i][k]));
      num.push_back(std::move(row));
    }
    e["basisNum"] = std::move(num);
    e["basisDen"] = json_int(c.lat.den);
    e["autOrder"] = json_int(c.aut_order);
    cls.push_back(std::move(e));
  }
  j["classes"] = std::move(cls);
  return j;
}

inline void save_genus(const Genus& gen, const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::filesystem::path path = classset_cache_path(dir, gen.level, gen.disc);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    OMF_CHECK(out.good(), "cannot write cache file");
    out << genus_to_json(gen).dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

inline i64 json_to_i64(const Json& j) {
  if (j.is_string()) return std::stoll(j.get<std::string>());
  return j.get<i64>();
}

// Rebuilds a Genus from cache. Returns nothing on any mismatch: absent file,
// foreign fingerprint, or a class whose basis does not reproduce its Gram.
inline std::optional<Genus> load_genus(i64 N, i64 D, const std::string& dir) {
  if (dir.empty()) return std::nullopt;
  std::filesystem::path path = classset_cache_path(dir, N, D);
  std::ifstream in(path);
  if (!in.good()) return std::nullopt;
  Json j;
  try {
    in >> j;
    if (j.at("version").get<int>() != kCacheVersion) return std::nullopt;
    TernaryForm seed = parse_form_literal(j.at("seed").get<std::string>());
    if (j.at("fingerprint").get<std::string>() != classset_fingerprint(N, D, seed))
      return std::nullopt;
    if (json_to_i64(j.at("level")) != N || json_to_i64(j.at("disc")) != D) return std::nullopt;
    Genus g;
    g.level = N;
    g.disc = D;
    g.seed = seed;
    g.T0 = gram(seed);
    Rat mass = 0;
    for (const Json& e : j.at("classes")) {
      GenusClass c;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
          c.lat.gram[i][k] = json_to_i64(e.at("gram").at(i).at(k));
          c.lat.num[i][k] = json_to_i64(e.at("basisNum").at(i).at(k));
        }
      c.lat.den = json_to_i64(e.at("basisDen"));
      if (gram_in_seed(g.T0, c.lat.num, c.lat.den) != c.lat.gram) return std::nullopt;
      c.rotations = proper_automorphisms(c.lat.gram);
      c.aut_order = 2 * static_cast<i64>(c.rotations.size());
      if (c.aut_order != json_to_i64(e.at("autOrder"))) return std::nullopt;
      mass += Rat(1, c.aut_order);
      g.classes.push_back(std::move(c));
    }
    if (mass != eichler_mass(N, D)) return std::nullopt;
    return g;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct CachedGenus {
  Genus genus;
  bool hit = false;
};

inline CachedGenus genus_cached(i64 N, i64 D, const std::string& dir, i64 neighbor_start = 2) {
  if (std::optional<Genus> g = load_genus(N, D, dir)) return {std::move(*g), true};
  CachedGenus out{build_genus(N, D, neighbor_start), false};
  save_genus(out.genus, dir);
  return out;
}

} // namespace omf
