#include "shadowlab/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::strong_ordering compare_rational(Rational const& x, Rational const& y) {
  int const c = cmp(x, y);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z) + 1);
  std::size_t const limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    h = mix(h, static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
  }
  return h;
}

void require_family(GroupSpec const& spec, GroupElement const& g) {
  if (g.family() != spec.family()) {
    throw FamilyMismatch();
  }
}

// n^k for k >= 0 as a rational, or n^k for negative k.
Rational bs_scale(std::int64_t n, std::int64_t k) { return power(Rational(static_cast<long>(n)), k); }

std::string repeat(char c, std::int64_t times) {
  return std::string(static_cast<std::size_t>(times < 0 ? -times : times), c);
}

std::string spelled_power(char letter, std::int64_t exponent) {
  char const c = exponent < 0 ? static_cast<char>(std::toupper(letter)) : letter;
  return repeat(c, exponent);
}

}  // namespace

std::strong_ordering operator<=>(GroupElement const& x, GroupElement const& y) {
  if (auto c = x.payload_.index() <=> y.payload_.index(); c != 0) {
    return c;
  }
  return std::visit(
      Overloaded{
          [&](FreeWord const& a) { return a.letters <=> std::get<FreeWord>(y.payload_).letters; },
          [&](ExponentVector const& a) {
            return a.exponents <=> std::get<ExponentVector>(y.payload_).exponents;
          },
          [&](HeisenbergTriple const& a) {
            auto const& b = std::get<HeisenbergTriple>(y.payload_);
            return std::tie(a.a, a.b, a.c) <=> std::tie(b.a, b.b, b.c);
          },
          [&](BSPair const& a) {
            auto const& b = std::get<BSPair>(y.payload_);
            if (auto c = compare_rational(a.shift, b.shift); c != 0) {
              return c;
            }
            return a.level <=> b.level;
          }},
      x.payload_);
}

std::size_t ElementHash::operator()(GroupElement const& g) const noexcept {
  std::size_t h = g.payload().index();
  std::visit(Overloaded{[&](FreeWord const& w) {
                          for (int l : w.letters) h = mix(h, static_cast<std::size_t>(l));
                        },
                        [&](ExponentVector const& v) {
                          for (auto e : v.exponents) h = mix(h, static_cast<std::size_t>(e));
                        },
                        [&](HeisenbergTriple const& t) {
                          h = mix(mix(mix(h, static_cast<std::size_t>(t.a)),
                                      static_cast<std::size_t>(t.b)),
                                  static_cast<std::size_t>(t.c));
                        },
                        [&](BSPair const& p) {
                          h = mix(h, hash_mpz(p.shift.get_num_mpz_t()));
                          h = mix(h, hash_mpz(p.shift.get_den_mpz_t()));
                          h = mix(h, static_cast<std::size_t>(p.level));
                        }},
             g.payload());
  return h;
}

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec::GroupSpec(Family family, int rank, std::int64_t bs_n)
    : family_(family), rank_(rank), bs_n_(bs_n) {
  std::vector<Generator> gens;
  for (int i = 0; i < rank_; ++i) {
    char const lower = static_cast<char>('a' + i);
    char const upper = static_cast<char>('A' + i);
    gens.push_back({std::string(1, lower), generator(i)});
    gens.push_back({std::string(1, upper), inverse(*this, generator(i))});
  }
  generators_ = GeneratingSet(*this, std::move(gens));

  switch (family_) {
    case Family::Free:
      break;
    case Family::FreeAbelian:
      for (int i = 0; i < rank_; ++i) {
        for (int j = i + 1; j < rank_; ++j) {
          std::string const x(1, static_cast<char>('a' + i));
          std::string const y(1, static_cast<char>('a' + j));
          relations_.push_back({x + y, y + x});
        }
      }
      break;
    case Family::Heisenberg:
      relations_ = {{"c", "abAB"}, {"ac", "ca"}, {"bc", "cb"}};
      break;
    case Family::BaumslagSolitar:
      relations_ = {{"ba", repeat('a', bs_n_) + "b"}};
      break;
  }
}

GroupSpec GroupSpec::free_group(int rank) {
  if (rank < 1 || rank > 26) {
    throw DomainError("free group rank must be in 1..26");
  }
  return GroupSpec(Family::Free, rank, 0);
}

GroupSpec GroupSpec::free_abelian(int rank) {
  if (rank < 1 || rank > 26) {
    throw DomainError("free abelian rank must be in 1..26");
  }
  return GroupSpec(Family::FreeAbelian, rank, 0);
}

GroupSpec GroupSpec::heisenberg() { return GroupSpec(Family::Heisenberg, 3, 0); }

GroupSpec GroupSpec::baumslag_solitar(std::int64_t n) {
  if (n < 2) {
    throw DomainError("BS(1,n) requires n >= 2");
  }
  return GroupSpec(Family::BaumslagSolitar, 2, n);
}

std::string GroupSpec::descriptor() const {
  switch (family_) {
    case Family::Free:
      return "F(" + std::to_string(rank_) + ")";
    case Family::FreeAbelian:
      return "Z^" + std::to_string(rank_);
    case Family::Heisenberg:
      return "Heis";
    case Family::BaumslagSolitar:
      return "BS(1," + std::to_string(bs_n_) + ")";
  }
  return {};
}

GroupElement GroupSpec::identity() const {
  switch (family_) {
    case Family::Free:
      return GroupElement(FreeWord{});
    case Family::FreeAbelian:
      return GroupElement(ExponentVector{std::vector<std::int64_t>(static_cast<std::size_t>(rank_), 0)});
    case Family::Heisenberg:
      return GroupElement(HeisenbergTriple{});
    case Family::BaumslagSolitar:
      return GroupElement(BSPair{Rational(0), 0});
  }
  return {};
}

GroupElement GroupSpec::generator(int i) const {
  if (i < 0 || i >= rank_) {
    throw DomainError("generator index out of range");
  }
  switch (family_) {
    case Family::Free:
      return GroupElement(FreeWord{{i + 1}});
    case Family::FreeAbelian: {
      std::vector<std::int64_t> e(static_cast<std::size_t>(rank_), 0);
      e[static_cast<std::size_t>(i)] = 1;
      return GroupElement(ExponentVector{std::move(e)});
    }
    case Family::Heisenberg:
      return GroupElement(HeisenbergTriple{i == 0 ? 1 : 0, i == 1 ? 1 : 0, i == 2 ? 1 : 0});
    case Family::BaumslagSolitar:
      return GroupElement(i == 0 ? BSPair{Rational(1), 0} : BSPair{Rational(0), 1});
  }
  return {};
}

GroupElement GroupSpec::letter(char c) const {
  bool const lower = std::islower(static_cast<unsigned char>(c)) != 0;
  int const i = std::tolower(static_cast<unsigned char>(c)) - 'a';
  if (!std::isalpha(static_cast<unsigned char>(c)) || i >= rank_) {
    throw DomainError(std::string("letter '") + c + "' is not a generator of " + descriptor());
  }
  GroupElement g = generator(i);
  return lower ? g : inverse(*this, g);
}

// ---------------------------------------------------------------------------
// GeneratingSet

GeneratingSet::GeneratingSet(GroupSpec const& spec, std::vector<Generator> generators)
    : generators_(std::move(generators)), inverse_(generators_.size()) {
  if (generators_.empty()) {
    throw DomainError("generating set is empty");
  }
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (is_identity(generators_[i].element)) {
      throw DomainError("generating set contains the identity ('" + generators_[i].label + "')");
    }
    GroupElement const inv = inverse(spec, generators_[i].element);
    auto const it = std::find_if(generators_.begin(), generators_.end(),
                                 [&](Generator const& s) { return s.element == inv; });
    if (it == generators_.end()) {
      throw DomainError("generating set is not symmetric: inverse of '" + generators_[i].label +
                        "' missing");
    }
    inverse_[i] = static_cast<std::size_t>(it - generators_.begin());
  }
}

GeneratingSet GeneratingSet::from_words(GroupSpec const& spec, std::vector<std::string> const& words) {
  std::vector<Generator> gens;
  gens.reserve(words.size());
  for (auto const& w : words) {
    gens.push_back({w, evaluate_word(spec, w)});
  }
  return GeneratingSet(spec, std::move(gens));
}

std::optional<std::size_t> GeneratingSet::index_of(GroupElement const& g) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].element == g) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<std::string> GeneratingSet::labels() const {
  std::vector<std::string> out;
  for (auto const& g : generators_) {
    out.push_back(g.label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PresentationParser {
 public:
  explicit PresentationParser(std::string_view text) : text_(text) {}

  GroupSpec parse() {
    skip_ws();
    GroupSpec result = GroupSpec::free_group(1);
    if (consume("BS")) {
      expect('(');
      std::int64_t const m = integer();
      expect(',');
      std::size_t const n_pos = pos_;
      std::int64_t const n = integer();
      expect(')');
      if (m != 1) {
        throw DomainError("unsupported family BS(" + std::to_string(m) + "," + std::to_string(n) +
                          "): only m = 1 supported");
      }
      if (n < 2) {
        throw ParseError("BS(1,n) requires n >= 2", n_pos);
      }
      result = GroupSpec::baumslag_solitar(n);
    } else if (consume("Heis")) {
      result = GroupSpec::heisenberg();
    } else if (consume("F")) {
      expect('(');
      result = GroupSpec::free_group(rank());
      expect(')');
    } else if (consume("Z")) {
      expect('^');
      result = GroupSpec::free_abelian(rank());
    } else {
      throw ParseError("unsupported family in '" + std::string(text_) +
                           "' (expected F(k), Z^k, Heis or BS(1,n))",
                       pos_);
    }
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError("trailing characters in presentation", pos_);
    }
    return result;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      skip_ws();
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
    skip_ws();
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t const start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '-') || pos_ - start > 12) {
      throw ParseError("expected integer", start);
    }
    std::int64_t const v = std::strtoll(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    skip_ws();
    return v;
  }

  int rank() {
    std::size_t const start = pos_;
    std::int64_t const k = integer();
    if (k < 1 || k > 26) {
      throw ParseError("rank must be in 1..26", start);
    }
    return static_cast<int>(k);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupSpec parse_presentation(std::string_view text) { return PresentationParser(text).parse(); }

// ---------------------------------------------------------------------------
// Arithmetic

GroupElement multiply(GroupSpec const& spec, GroupElement const& g, GroupElement const& h) {
  require_family(spec, g);
  require_family(spec, h);
  switch (spec.family()) {
    case Family::Free: {
      std::vector<int> out = g.free_word().letters;
      for (int l : h.free_word().letters) {
        if (!out.empty() && out.back() == -l) {
          out.pop_back();
        } else {
          out.push_back(l);
        }
      }
      return GroupElement(FreeWord{std::move(out)});
    }
    case Family::FreeAbelian: {
      auto e = g.exponents().exponents;
      auto const& f = h.exponents().exponents;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += f[i];
      return GroupElement(ExponentVector{std::move(e)});
    }
    case Family::Heisenberg: {
      // b^j a^i' = a^i' b^j c^(-j i')
      auto const& x = g.heisenberg();
      auto const& y = h.heisenberg();
      return GroupElement(HeisenbergTriple{x.a + y.a, x.b + y.b, x.c + y.c - x.b * y.a});
    }
    case Family::BaumslagSolitar: {
      auto const& x = g.bs_pair();
      auto const& y = h.bs_pair();
      Rational shift = x.shift + bs_scale(spec.bs_n(), x.level) * y.shift;
      return GroupElement(BSPair{std::move(shift), x.level + y.level});
    }
  }
  return {};
}

GroupElement inverse(GroupSpec const& spec, GroupElement const& g) {
  require_family(spec, g);
  switch (spec.family()) {
    case Family::Free: {
      std::vector<int> out(g.free_word().letters.rbegin(), g.free_word().letters.rend());
      for (int& l : out) l = -l;
      return GroupElement(FreeWord{std::move(out)});
    }
    case Family::FreeAbelian: {
      auto e = g.exponents().exponents;
      for (auto& v : e) v = -v;
      return GroupElement(ExponentVector{std::move(e)});
    }
    case Family::Heisenberg: {
      auto const& x = g.heisenberg();
      return GroupElement(HeisenbergTriple{-x.a, -x.b, -x.c - x.a * x.b});
    }
    case Family::BaumslagSolitar: {
      auto const& x = g.bs_pair();
      Rational shift = -bs_scale(spec.bs_n(), -x.level) * x.shift;
      return GroupElement(BSPair{std::move(shift), -x.level});
    }
  }
  return {};
}

GroupElement commutator(GroupSpec const& spec, GroupElement const& g, GroupElement const& h) {
  return multiply(spec, multiply(spec, g, h), multiply(spec, inverse(spec, g), inverse(spec, h)));
}

GroupElement power(GroupSpec const& spec, GroupElement const& g, std::int64_t k) {
  GroupElement base = k < 0 ? inverse(spec, g) : g;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  GroupElement result = spec.identity();
  while (e != 0) {
    if (e & 1U) result = multiply(spec, result, base);
    e >>= 1U;
    if (e != 0) base = multiply(spec, base, base);
  }
  return result;
}

bool is_identity(GroupElement const& g) {
  return std::visit(Overloaded{[](FreeWord const& w) { return w.letters.empty(); },
                               [](ExponentVector const& v) {
                                 return std::all_of(v.exponents.begin(), v.exponents.end(),
                                                    [](auto e) { return e == 0; });
                               },
                               [](HeisenbergTriple const& t) { return t.a == 0 && t.b == 0 && t.c == 0; },
                               [](BSPair const& p) { return p.shift == 0 && p.level == 0; }},
                    g.payload());
}

GroupElement evaluate_word(GroupSpec const& spec, std::string_view word) {
  if (word == "e") {
    return spec.identity();
  }
  if (word.empty()) {
    throw ParseError("empty word (use \"e\" for the identity)", 0);
  }
  GroupElement g = spec.identity();
  for (std::size_t i = 0; i < word.size(); ++i) {
    char const c = word[i];
    if (!std::isalpha(static_cast<unsigned char>(c)) ||
        std::tolower(static_cast<unsigned char>(c)) - 'a' >= spec.rank()) {
      throw ParseError(std::string("letter '") + c + "' is not a generator of " + spec.descriptor(), i);
    }
    g = multiply(spec, g, spec.letter(c));
  }
  return g;
}

GroupElement parse_element(GroupSpec const& spec, std::string_view text) {
  if (!text.empty() && text.front() == '(') {
    if (spec.family() != Family::BaumslagSolitar) {
      throw ParseError("pair syntax is only valid for BS(1,n)", 0);
    }
    auto const comma = text.find(',');
    if (comma == std::string_view::npos || text.back() != ')') {
      throw ParseError("expected \"(p/q, m)\"", text.size());
    }
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    Rational const shift = parse_rational(trim(text.substr(1, comma - 1)));
    std::string_view const level_text = trim(text.substr(comma + 1, text.size() - comma - 2));
    Rational const level = parse_rational(level_text);
    if (level.get_den() != 1) {
      throw ParseError("level must be an integer", comma + 1);
    }
    if (!denominator_is_power_of(shift, spec.bs_n())) {
      throw DomainError("shift " + format(shift) + " is not in Z[1/" + std::to_string(spec.bs_n()) + "]");
    }
    return GroupElement(BSPair{shift, level.get_num().get_si()});
  }
  return evaluate_word(spec, text);
}

std::string spell(GroupSpec const& spec, GroupElement const& g) {
  require_family(spec, g);
  if (is_identity(g)) {
    return "e";
  }
  std::string w;
  switch (spec.family()) {
    case Family::Free:
      for (int l : g.free_word().letters) {
        w += l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
      }
      break;
    case Family::FreeAbelian: {
      auto const& e = g.exponents().exponents;
      for (std::size_t i = 0; i < e.size(); ++i) w += spelled_power(static_cast<char>('a' + i), e[i]);
      break;
    }
    case Family::Heisenberg: {
      auto const& t = g.heisenberg();
      w = spelled_power('a', t.a) + spelled_power('b', t.b) + spelled_power('c', t.c);
      break;
    }
    case Family::BaumslagSolitar: {
      // shift = p / n^s  =>  (shift, m) = b^-s a^p b^(s+m)
      auto const& pr = g.bs_pair();
      Integer den = pr.shift.get_den();
      std::int64_t s = 0;
      while (den != 1) {
        den /= static_cast<long>(spec.bs_n());
        ++s;
      }
      Integer const p = pr.shift.get_num();
      if (!p.fits_slong_p() || abs(p) > 1'000'000) {
        throw DomainError("BS element too large to spell as a word");
      }
      w = spelled_power('b', -s) + spelled_power('a', p.get_si()) + spelled_power('b', s + pr.level);
      break;
    }
  }
  return w;
}

std::string format(GroupSpec const& spec, GroupElement const& g) {
  if (spec.family() == Family::BaumslagSolitar && !is_identity(g)) {
    auto const& p = g.bs_pair();
    return "(" + format(p.shift) + ", " + std::to_string(p.level) + ")";
  }
  return spell(spec, g);
}

std::size_t default_ball_cap() {
  if (char const* env = std::getenv("SHADOWLAB_CAP")) {
    char* end = nullptr;
    unsigned long long const v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<std::size_t>(v);
    }
  }
  return 2'000'000;
}

// ---------------------------------------------------------------------------
// Word metric

WordMetric::WordMetric(GroupSpec spec, GeneratingSet generators, std::size_t size_cap)
    : spec_(std::move(spec)), generators_(std::move(generators)), size_cap_(size_cap) {
  GroupElement e = spec_.identity();
  norms_.emplace(e, 0);
  frontier_.push_back(std::move(e));
}

void WordMetric::expand() {
  std::vector<GroupElement> next;
  for (auto const& g : frontier_) {
    for (auto const& s : generators_) {
      GroupElement h = multiply(spec_, s.element, g);
      if (norms_.emplace(h, explored_radius_ + 1).second) {
        next.push_back(std::move(h));
      }
    }
    if (norms_.size() > size_cap_) {
      throw CapExceeded("norm exceeds cap: word-metric search passed " + std::to_string(size_cap_) +
                        " elements");
    }
  }
  frontier_ = std::move(next);
  ++explored_radius_;
}

int WordMetric::norm(GroupElement const& g, int max_radius) {
  require_family(spec_, g);
  while (true) {
    if (auto it = norms_.find(g); it != norms_.end()) {
      return it->second;
    }
    if (explored_radius_ >= max_radius) {
      throw CapExceeded("norm exceeds cap " + std::to_string(max_radius) + " for " + format(spec_, g));
    }
    expand();
  }
}

int word_norm(GroupSpec const& spec, GroupElement const& g, GeneratingSet const& generators,
              int max_radius) {
  WordMetric metric(spec, generators);
  return metric.norm(g, max_radius);
}

// ---------------------------------------------------------------------------
// Cayley balls

std::optional<std::size_t> CayleyBall::index_of(GroupElement const& g) const {
  if (auto it = index_.find(g); it != index_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::vector<std::size_t> CayleyBall::spelling(std::size_t i) const {
  std::vector<std::size_t> out;
  while (i != 0) {
    out.push_back(parents_[i].generator);
    i = parents_[i].parent;
  }
  return out;
}

std::string CayleyBall::word(std::size_t i) const {
  if (i == 0) {
    return "e";
  }
  std::string w;
  for (std::size_t s : spelling(i)) {
    w += generators_[s].label;
  }
  return w;
}

CayleyBall ball(GroupSpec const& spec, GeneratingSet const& generators, int radius, std::size_t cap) {
  if (radius < 0) {
    throw DomainError("ball radius must be nonnegative");
  }
  CayleyBall b;
  b.spec_ = spec;
  b.generators_ = generators;
  b.radius_ = radius;

  GroupElement const e = spec.identity();
  b.elements_.push_back(e);
  b.norms_.push_back(0);
  b.parents_.push_back({});
  b.index_.emplace(e, 0);

  std::size_t layer_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    std::size_t const layer_end = b.elements_.size();
    // First discovery (previous layer in order, generators in order) fixes the parent.
    std::vector<std::pair<GroupElement, CayleyBall::ParentEdge>> found;
    std::unordered_map<GroupElement, std::size_t, ElementHash> seen;
    for (std::size_t p = layer_begin; p < layer_end; ++p) {
      for (std::size_t s = 0; s < generators.size(); ++s) {
        GroupElement g = multiply(spec, generators[s].element, b.elements_[p]);
        if (b.index_.count(g) != 0 || seen.count(g) != 0) {
          continue;
        }
        seen.emplace(g, found.size());
        found.push_back({std::move(g), {p, s}});
      }
      if (b.elements_.size() + found.size() > cap) {
        throw CapExceeded("ball of radius " + std::to_string(radius) + " exceeds cap of " +
                          std::to_string(cap) + " elements");
      }
    }
    std::sort(found.begin(), found.end(), [](auto const& x, auto const& y) { return x.first < y.first; });
    for (auto& [g, edge] : found) {
      b.index_.emplace(g, b.elements_.size());
      b.elements_.push_back(std::move(g));
      b.norms_.push_back(r);
      b.parents_.push_back(edge);
    }
    layer_begin = layer_end;
    if (found.empty()) {
      break;  // finite group exhausted (cannot happen for the supported families)
    }
  }

  b.neighbors_.assign(b.size() * generators.size(), CayleyBall::npos);
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t s = 0; s < generators.size(); ++s) {
      if (auto j = b.index_of(multiply(spec, generators[s].element, b.elements_[i]))) {
        b.neighbors_[i * generators.size() + s] = *j;
      }
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Bilipschitz comparison

BilipschitzReport bilipschitz_constant(GroupSpec const& spec, GeneratingSet const& s,
                                       GeneratingSet const& s_prime, int radius, int search_cap) {
  WordMetric metric_s(spec, s);
  WordMetric metric_prime(spec, s_prime);

  // Each generator of one set must be expressible in the other.
  int stretch = 1;
  for (auto const& g : s) {
    try {
      stretch = std::max(stretch, metric_prime.norm(g.element, search_cap));
    } catch (CapExceeded const&) {
      throw CapExceeded("S' fails to generate '" + g.label + "' within cap " + std::to_string(search_cap));
    }
  }
  for (auto const& g : s_prime) {
    try {
      metric_s.norm(g.element, search_cap);
    } catch (CapExceeded const&) {
      throw CapExceeded("S fails to generate '" + g.label + "' within cap " + std::to_string(search_cap));
    }
  }

  CayleyBall const b = ball(spec, s, radius);
  BilipschitzReport report;
  report.generators = s.labels();
  report.other_generators = s_prime.labels();
  report.radius = radius;
  report.witness = "e";

  std::vector<int> other(b.size(), 0);
  for (std::size_t i = 1; i < b.size(); ++i) {
    other[i] = metric_prime.norm(b.element(i), radius * stretch);
    Rational const n_s(b.norm(i));
    Rational const n_p(other[i]);
    Rational const ratio = std::max(Rational(n_s / n_p), Rational(n_p / n_s));
    if (ratio > report.constant) {
      report.constant = ratio;
      report.witness = b.word(i);
      report.witness_norm = b.norm(i);
      report.witness_other_norm = other[i];
    }
  }
  report.checked = b.size();
  report.verified = true;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Rational const n_s(b.norm(i));
    Rational const n_p(other[i]);
    if (!(n_p / report.constant <= n_s && n_s <= report.constant * n_p)) {
      report.verified = false;
    }
  }
  return report;
}

}  // namespace shadowlab
