// omf: ternary lattice modular forms from the command line.
//
// Subcommands cover the pipeline stages: build-lattice finds a seed form,
// classset enumerates the genus (with an optional on-disk cache), hecke
// prints neighbor matrices, eigenforms splits them into rational systems,
// and clifford renders the even Clifford order of a seed form.
//
// Exit codes: 0 success, 2 invalid input, 3 internal invariant breach.

#include "omf/omf.hpp"

#include "omf/cache.hpp"
#include "omf/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace omf;

struct Options {
  i64 level = 0;
  i64 disc = 0; // 0: largest divisor with an odd number of prime factors
  std::vector<std::string> characters;
  std::string primes = "to 7";
  i64 neighbor_prime = 2;
  std::string cache_dir;
  std::string format = "json";
  int threads = 1;
};

i64 default_disc(i64 N) {
  if (!(N > 0 && N % 2 == 1 && is_squarefree(N)))
    throw std::invalid_argument("level must be odd and squarefree");
  std::vector<i64> ps = prime_factors(N);
  return ps.size() % 2 == 1 ? N : N / ps.front();
}

int resolve_threads(int t) {
  if (t > 0) return t;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// "2,3,5" lists exact primes (each must be coprime to N); "to 20" means all
// primes up to the bound, silently skipping divisors of N.
std::vector<i64> parse_primes(const std::string& spec, i64 N) {
  std::string s = spec;
  auto fail = [&]() { throw std::invalid_argument("cannot parse --primes '" + spec + "'"); };
  std::vector<i64> out;
  if (s.rfind("to", 0) == 0) {
    i64 bound = 0;
    try {
      std::size_t pos = 0;
      std::string tail = s.substr(2);
      bound = std::stoll(tail, &pos);
      if (pos != tail.size() && tail.find_first_not_of(" \t", pos) != std::string::npos) fail();
    } catch (const std::logic_error&) {
      fail();
    }
    if (bound < 2) throw std::invalid_argument("--primes bound must be at least 2");
    for (i64 p = 2; p <= bound; p = next_prime(p))
      if (N % p != 0) out.push_back(p);
  } else {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      i64 p = 0;
      try {
        std::size_t pos = 0;
        p = std::stoll(tok, &pos);
        if (pos != tok.size()) fail();
      } catch (const std::logic_error&) {
        fail();
      }
      if (!is_prime_u64(static_cast<u64>(p)))
        throw std::invalid_argument("--primes entry " + tok + " is not prime");
      if (N % p == 0)
        throw std::invalid_argument("prime " + tok + " divides the level; Hecke operators need p coprime to N");
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("--primes selected no usable primes");
  return out;
}

// each token is a squarefree divisor of N; "all" expands to every divisor
std::vector<i64> parse_characters(const std::vector<std::string>& toks, i64 N) {
  std::vector<i64> out;
  for (const std::string& t : toks) {
    if (t == "all") {
      std::vector<i64> ds = divisors(N);
      out.insert(out.end(), ds.begin(), ds.end());
      continue;
    }
    i64 r = 0;
    try {
      std::size_t pos = 0;
      r = std::stoll(t, &pos);
      if (pos != t.size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw std::invalid_argument("cannot parse --character '" + t + "'");
    }
    if (!(r > 0 && N % r == 0))
      throw std::invalid_argument("character " + t + " is not a divisor of the level");
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("no characters selected");
  return out;
}

BigInt bigint_of_i128(i128 v) {
  bool neg = v < 0;
  u128 m = neg ? u128(0) - static_cast<u128>(v) : static_cast<u128>(v);
  BigInt r = BigInt(static_cast<u64>(m >> 64));
  r <<= 64;
  r += BigInt(static_cast<u64>(m));
  return neg ? -r : r;
}

Json out_base(i64 N, i64 D) {
  Json j;
  j["level"] = json_int(N);
  j["disc"] = json_int(D);
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string gram_line(const Mat3<i64>& g) {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < 3; ++r) {
    if (r) os << "; ";
    for (int c = 0; c < 3; ++c) {
      if (c) os << " ";
      os << g[r][c];
    }
  }
  os << "]";
  return os.str();
}

// --- build-lattice ---------------------------------------------------------

int cmd_build_lattice(const Options& o) {
  i64 D = o.disc ? o.disc : default_disc(o.level);
  TernaryForm f = find_seed(o.level, D);
  if (o.format == "table") {
    std::cout << "level " << o.level << "  disc " << D << "\n"
              << "form " << form_literal(f) << "\n"
              << "gram " << gram_line(gram(f)) << "\n";
    return 0;
  }
  Json j = out_base(o.level, D);
  j["form"] = form_json(f);
  emit(j);
  return 0;
}

// --- classset ---------------------------------------------------------------

CachedGenus load_or_build(const Options& o, i64 D) {
  if (o.cache_dir.empty()) {
    CachedGenus cg;
    cg.genus = build_genus(o.level, D, o.neighbor_prime);
    cg.hit = false;
    return cg;
  }
  return genus_cached(o.level, D, o.cache_dir, o.neighbor_prime);
}

int cmd_classset(const Options& o) {
  i64 D = o.disc ? o.disc : default_disc(o.level);
  CachedGenus cg = load_or_build(o, D);
  const Genus& gen = cg.genus;
  Rat mass = eichler_mass(o.level, D);
  Rat found = 0;
  for (const GenusClass& c : gen.classes) found += Rat(1, c.aut_order);
  OMF_CHECK(found == mass, "class set does not meet the mass");
  const char* cache_state = o.cache_dir.empty() ? "off" : (cg.hit ? "hit" : "miss");
  if (o.format == "table") {
    std::cout << "level " << o.level << "  disc " << D << "  classes " << gen.classes.size()
              << "  mass " << mass << "  cache " << cache_state << "\n";
    for (std::size_t i = 0; i < gen.classes.size(); ++i)
      std::cout << i << "  " << form_literal(form_of_gram(gen.classes[i].lat.gram)) << "  aut "
                << gen.classes[i].aut_order << "\n";
    return 0;
  }
  Json j = out_base(o.level, D);
  j["count"] = json_int(static_cast<i64>(gen.classes.size()));
  j["mass"] = json_rat(mass);
  j["massCheck"] = "ok";
  j["cache"] = cache_state;
  j["classes"] = classes_json(gen);
  emit(j);
  return 0;
}

// --- hecke -------------------------------------------------------------------

int cmd_hecke(const Options& o) {
  i64 D = o.disc ? o.disc : default_disc(o.level);
  std::vector<i64> primes = parse_primes(o.primes, o.level);
  std::vector<i64> chars = parse_characters(o.characters, o.level);
  int threads = resolve_threads(o.threads);
  Genus gen = load_or_build(o, D).genus;
  std::vector<std::vector<u32>> masks = stabilizer_masks(gen);

  std::vector<CharacterSpace> spaces;
  for (i64 r : chars) spaces.push_back(supported_classes(gen, masks, r));
  std::vector<std::vector<HeckeMatrix>> mats(chars.size());
  for (i64 p : primes) {
    NeighborTable table = build_neighbor_table(gen, p, threads); // shared across characters
    for (std::size_t k = 0; k < spaces.size(); ++k) mats[k].push_back(assemble_hecke(spaces[k], table));
  }

  if (o.format == "table") {
    for (std::size_t k = 0; k < chars.size(); ++k) {
      for (const HeckeMatrix& m : mats[k]) {
        std::cout << "T_" << m.p << " on character " << chars[k] << " (" << m.a.size()
                  << " classes)\n";
        for (const auto& row : m.a) {
          for (std::size_t c = 0; c < row.size(); ++c) std::cout << (c ? " " : "") << row[c];
          std::cout << "\n";
        }
      }
    }
    return 0;
  }

  Json j = out_base(o.level, D);
  auto char_block = [&](std::size_t k) {
    Json b;
    b["character"] = json_int(chars[k]);
    Json arr = Json::array();
    for (const HeckeMatrix& m : mats[k]) arr.push_back(matrix_json(m));
    b["matrices"] = std::move(arr);
    return b;
  };
  if (chars.size() == 1) {
    Json b = char_block(0);
    j["character"] = b["character"];
    j["matrices"] = b["matrices"];
  } else {
    Json arr = Json::array();
    for (std::size_t k = 0; k < chars.size(); ++k) arr.push_back(char_block(k));
    j["characters"] = std::move(arr);
  }
  emit(j);
  return 0;
}

// --- eigenforms ---------------------------------------------------------------

int cmd_eigenforms(const Options& o) {
  i64 D = o.disc ? o.disc : default_disc(o.level);
  std::vector<i64> primes = parse_primes(o.primes, o.level);
  std::vector<i64> chars = parse_characters(o.characters, o.level);
  int threads = resolve_threads(o.threads);
  Genus gen = load_or_build(o, D).genus;

  std::map<i64, std::vector<EigenSystem>> by_char;
  if (chars.size() == 1) {
    by_char[chars[0]] = eigen_systems(gen, chars[0], primes, threads);
  } else {
    // the neighbor tables dominate; computing every character shares them
    by_char = all_eigen_systems(gen, primes, threads);
  }

  if (o.format == "table") {
    for (i64 r : chars)
      for (const EigenSystem& e : by_char[r]) {
        std::cout << "character " << r << "  dim " << e.dimension << "  degree "
                  << e.field_degree;
        if (e.field_degree == 1)
          for (const auto& [p, a] : e.eigenvalues) std::cout << "  a_" << p << "=" << a;
        std::cout << "  " << e.space << "\n";
      }
    return 0;
  }

  Json j = out_base(o.level, D);
  auto char_block = [&](i64 r) {
    Json b;
    b["character"] = json_int(r);
    Json arr = Json::array();
    for (const EigenSystem& e : by_char[r]) arr.push_back(eigensystem_json(e));
    b["eigensystems"] = std::move(arr);
    return b;
  };
  if (chars.size() == 1) {
    Json b = char_block(chars[0]);
    j["character"] = b["character"];
    j["eigensystems"] = b["eigensystems"];
  } else {
    Json arr = Json::array();
    for (i64 r : chars) arr.push_back(char_block(r));
    j["characters"] = std::move(arr);
  }
  emit(j);
  return 0;
}

// --- clifford -------------------------------------------------------------------

int cmd_clifford(const Options& o) {
  i64 D = o.disc ? o.disc : default_disc(o.level);
  TernaryForm f = find_seed(o.level, D);
  QuaternionOrder O = even_clifford(f);
  static const char* names[4] = {"1", "i", "j", "k"};
  Quat<i128> basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

  TernaryForm back = exterior_form(O);
  OMF_CHECK(back == f, "exterior form does not invert the even Clifford construction");

  if (o.format == "table") {
    std::cout << "level " << o.level << "  disc " << D << "  form " << form_literal(f)
              << "  reduced discriminant " << bigint_of_i128(reduced_discriminant(O)) << "\n";
    for (int s = 1; s < 4; ++s)
      for (int t = 1; t < 4; ++t) {
        Quat<i128> p = qmul(f, basis[s], basis[t]);
        std::cout << names[s] << "*" << names[t] << " =";
        for (int d = 0; d < 4; ++d) std::cout << " " << bigint_of_i128(p[d]);
        std::cout << "\n";
      }
    return 0;
  }

  Json j = out_base(o.level, D);
  j["form"] = form_json(f);
  j["reducedDiscriminant"] = json_int(bigint_of_i128(reduced_discriminant(O)));
  j["basis"] = Json::array({"1", "i", "j", "k"});
  Json table = Json::array();
  for (int s = 0; s < 4; ++s) {
    Json row = Json::array();
    for (int t = 0; t < 4; ++t) {
      Quat<i128> p = qmul(f, basis[s], basis[t]);
      Json coords = Json::array();
      for (int d = 0; d < 4; ++d) coords.push_back(json_int(bigint_of_i128(p[d])));
      row.push_back(std::move(coords));
    }
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  j["exteriorForm"] = form_literal(back);
  emit(j);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"modular forms on ternary quadratic lattices via p-neighbors"};
  app.require_subcommand(1);

  Options o;
  if (const char* env = std::getenv("OMF_CACHE_DIR")) o.cache_dir = env;

  auto add_common = [&](CLI::App* sub, bool wants_spectral) {
    sub->add_option("--level", o.level, "level N (odd, squarefree)")->required();
    sub->add_option("--disc", o.disc,
                    "discriminant D | N with an odd number of prime factors "
                    "(default: largest such divisor)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    if (wants_spectral) {
      sub->add_option("--character", o.characters,
                      "character r | N; repeatable; 'all' expands to every divisor")
          ->take_all();
      sub->add_option("--primes", o.primes, "comma list '2,3,5' or bound 'to 20'")
          ->capture_default_str();
      sub->add_option("--neighbor-prime", o.neighbor_prime,
                      "starting prime for the genus enumeration")
          ->capture_default_str();
      sub->add_option("--cache-dir", o.cache_dir,
                      "class-set cache directory (default: $OMF_CACHE_DIR; empty disables)");
      sub->add_option("--threads", o.threads, "worker threads; 0 picks the hardware count")
          ->capture_default_str();
    }
    return sub;
  };

  CLI::App* build = add_common(app.add_subcommand("build-lattice", "find a seed form"), false);
  CLI::App* cls = add_common(app.add_subcommand("classset", "enumerate the genus"), true);
  CLI::App* hec = add_common(app.add_subcommand("hecke", "neighbor Hecke matrices"), true);
  CLI::App* eig = add_common(app.add_subcommand("eigenforms", "rational eigensystems"), true);
  CLI::App* cli = add_common(app.add_subcommand("clifford", "even Clifford order"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (o.characters.empty()) o.characters = {"1"};

  try {
    if (build->parsed()) return cmd_build_lattice(o);
    if (cls->parsed()) return cmd_classset(o);
    if (hec->parsed()) return cmd_hecke(o);
    if (eig->parsed()) return cmd_eigenforms(o);
    if (cli->parsed()) return cmd_clifford(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const omf::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
