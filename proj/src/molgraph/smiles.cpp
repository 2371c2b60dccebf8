#include <array>
#include <cctype>
#include <map>
#include <string>

#include "molbench/molgraph.hpp"

namespace molbench::molgraph {

namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

constexpr std::array<int, 1> kValB{3};
constexpr std::array<int, 1> kValC{4};
constexpr std::array<int, 1> kValN{3};
constexpr std::array<int, 1> kValO{2};
constexpr std::array<int, 2> kValP{3, 5};
constexpr std::array<int, 3> kValS{2, 4, 6};
constexpr std::array<int, 1> kValHalogen{1};

struct PendingRing {
  int atom;
  std::optional<BondOrder> order;
  std::size_t offset;
};

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule run();

private:
  [[noreturn]] void fail(ParseErrorKind kind, std::size_t at, const std::string& detail) const {
    throw SmilesError(kind, at, detail);
  }

  bool done() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void parse_organic_atom();
  void parse_bracket_atom();
  void add_atom(Atom atom, bool organic, std::size_t offset);
  void parse_ring_closure(int number, std::size_t offset);
  void add_bond(int a, int b, BondOrder order, std::size_t offset);
  BondOrder default_order(int a, int b) const;
  void assign_implicit_hydrogens();

  std::string_view text_;
  std::size_t pos_ = 0;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<bool> organic_;
  std::vector<std::size_t> atom_offset_;

  int prev_ = -1;
  std::optional<BondOrder> pending_bond_;
  std::size_t pending_bond_offset_ = 0;
  bool fragment_has_atom_ = false;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, PendingRing> rings_;
};

Molecule Parser::run() {
  if (text_.empty()) fail(ParseErrorKind::empty_fragment, 0, "empty input");

  while (!done()) {
    const std::size_t at = pos_;
    const char c = peek();
    if (static_cast<unsigned char>(c) > 127) fail(ParseErrorKind::syntax, at, "non-ASCII character");

    if (c == '[') {
      parse_bracket_atom();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
      parse_organic_atom();
    } else if (c == '(') {
      if (prev_ < 0) fail(ParseErrorKind::syntax, at, "branch before any atom");
      if (pending_bond_) fail(ParseErrorKind::syntax, at, "bond symbol before branch");
      branches_.emplace_back(prev_, at);
      ++pos_;
      if (peek() == ')') fail(ParseErrorKind::syntax, pos_, "empty branch");
    } else if (c == ')') {
      if (branches_.empty()) fail(ParseErrorKind::unmatched_parenthesis, at, "')' without '('");
      if (pending_bond_) fail(ParseErrorKind::syntax, at, "dangling bond symbol");
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
    } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\') {
      if (prev_ < 0) fail(ParseErrorKind::syntax, at, "bond symbol before any atom");
      if (pending_bond_) fail(ParseErrorKind::syntax, at, "consecutive bond symbols");
      if (c == '-' && peek(1) == '>') fail(ParseErrorKind::syntax, at, "dative bonds are not supported");
      switch (c) {
        case '=': pending_bond_ = BondOrder::double_; break;
        case '#': pending_bond_ = BondOrder::triple; break;
        case ':': pending_bond_ = BondOrder::aromatic; break;
        default: pending_bond_ = BondOrder::single; break;
      }
      pending_bond_offset_ = at;
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (prev_ < 0) fail(ParseErrorKind::syntax, at, "ring closure before any atom");
      ++pos_;
      parse_ring_closure(c - '0', at);
    } else if (c == '%') {
      if (prev_ < 0) fail(ParseErrorKind::syntax, at, "ring closure before any atom");
      if (!std::isdigit(static_cast<unsigned char>(peek(1))) ||
          !std::isdigit(static_cast<unsigned char>(peek(2)))) {
        fail(ParseErrorKind::syntax, at, "'%' must be followed by two digits");
      }
      const int number = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
      parse_ring_closure(number, at);
    } else if (c == '.') {
      if (!fragment_has_atom_) fail(ParseErrorKind::empty_fragment, at, "fragment without atoms");
      if (!branches_.empty()) fail(ParseErrorKind::unmatched_parenthesis, branches_.back().second, "unclosed branch");
      if (pending_bond_) fail(ParseErrorKind::syntax, pending_bond_offset_, "dangling bond symbol");
      prev_ = -1;
      fragment_has_atom_ = false;
      ++pos_;
      if (done()) fail(ParseErrorKind::empty_fragment, pos_, "trailing '.'");
    } else {
      fail(ParseErrorKind::syntax, at, std::string("unexpected character '") + c + "'");
    }
  }

  if (!branches_.empty()) fail(ParseErrorKind::unmatched_parenthesis, branches_.back().second, "unclosed branch");
  if (!rings_.empty()) {
    const auto& [number, ring] = *rings_.begin();
    fail(ParseErrorKind::unclosed_ring, ring.offset, "ring bond " + std::to_string(number) + " never closed");
  }
  if (pending_bond_) fail(ParseErrorKind::syntax, pending_bond_offset_, "dangling bond symbol");
  if (!fragment_has_atom_) fail(ParseErrorKind::empty_fragment, pos_, "fragment without atoms");

  assign_implicit_hydrogens();
  return perceive_rings(Molecule(std::move(atoms_), std::move(bonds_)));
}

void Parser::parse_organic_atom() {
  const std::size_t at = pos_;
  const char c = peek();
  Atom atom;
  std::size_t len = 1;
  switch (c) {
    case 'B':
      if (peek(1) == 'r') {
        atom.atomic_number = 35;
        len = 2;
      } else {
        atom.atomic_number = 5;
      }
      break;
    case 'C':
      if (peek(1) == 'l') {
        atom.atomic_number = 17;
        len = 2;
      } else {
        atom.atomic_number = 6;
      }
      break;
    case 'N': atom.atomic_number = 7; break;
    case 'O': atom.atomic_number = 8; break;
    case 'P': atom.atomic_number = 15; break;
    case 'S': atom.atomic_number = 16; break;
    case 'F': atom.atomic_number = 9; break;
    case 'I': atom.atomic_number = 53; break;
    case 'b': atom.atomic_number = 5; atom.aromatic = true; break;
    case 'c': atom.atomic_number = 6; atom.aromatic = true; break;
    case 'n': atom.atomic_number = 7; atom.aromatic = true; break;
    case 'o': atom.atomic_number = 8; atom.aromatic = true; break;
    case 'p': atom.atomic_number = 15; atom.aromatic = true; break;
    case 's': atom.atomic_number = 16; atom.aromatic = true; break;
    default:
      fail(ParseErrorKind::unknown_element, at, std::string("unknown organic-subset symbol '") + c + "'");
  }
  pos_ += len;
  add_atom(atom, true, at);
}

void Parser::parse_bracket_atom() {
  const std::size_t open = pos_;
  ++pos_;
  Atom atom;

  if (std::isdigit(static_cast<unsigned char>(peek()))) {
    int iso = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      iso = iso * 10 + (peek() - '0');
      if (iso > 999) fail(ParseErrorKind::syntax, pos_, "isotope out of range");
      ++pos_;
    }
    if (iso == 0) fail(ParseErrorKind::syntax, open + 1, "isotope must be positive");
    atom.isotope = iso;
  }

  const std::size_t sym_at = pos_;
  const char first = peek();
  if (!std::isalpha(static_cast<unsigned char>(first))) {
    fail(ParseErrorKind::unknown_element, sym_at, "missing element symbol");
  }
  if (std::islower(static_cast<unsigned char>(first))) {
    // Aromatic bracket symbols: b c n o p s se as te.
    std::string_view two = text_.substr(pos_, 2);
    int z = 0;
    if (two == "se") z = 34;
    else if (two == "as") z = 33;
    else if (two == "te") z = 52;
    if (z != 0) {
      pos_ += 2;
    } else {
      switch (first) {
        case 'b': z = 5; break;
        case 'c': z = 6; break;
        case 'n': z = 7; break;
        case 'o': z = 8; break;
        case 'p': z = 15; break;
        case 's': z = 16; break;
        default: fail(ParseErrorKind::unknown_element, sym_at, std::string("unknown aromatic symbol '") + first + "'");
      }
      ++pos_;
    }
    atom.atomic_number = z;
    atom.aromatic = true;
  } else {
    int z = 0;
    const char second = peek(1);
    if (std::islower(static_cast<unsigned char>(second))) {
      z = element_from_symbol(text_.substr(pos_, 2));
      if (z != 0) pos_ += 2;
    }
    if (z == 0) {
      z = element_from_symbol(text_.substr(pos_, 1));
      if (z == 0) {
        const std::size_t len = std::islower(static_cast<unsigned char>(second)) ? 2 : 1;
        fail(ParseErrorKind::unknown_element, sym_at,
             "unknown element symbol '" + std::string(text_.substr(pos_, len)) + "'");
      }
      ++pos_;
    }
    atom.atomic_number = z;
  }

  // Chirality: @, @@, @TH1, @SP2, @OH15 ...
  while (peek() == '@') {
    ++pos_;
    if (std::isupper(static_cast<unsigned char>(peek())) && std::isupper(static_cast<unsigned char>(peek(1)))) {
      pos_ += 2;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
  }

  int h = 0;
  if (peek() == 'H') {
    ++pos_;
    h = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      h = peek() - '0';
      ++pos_;
    }
  }
  atom.explicit_h = h;

  if (peek() == '+' || peek() == '-') {
    const char sign_char = peek();
    const int sign = sign_char == '+' ? 1 : -1;
    ++pos_;
    int magnitude = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      magnitude = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = magnitude * 10 + (peek() - '0');
        ++pos_;
      }
    } else {
      while (peek() == sign_char) {
        ++magnitude;
        ++pos_;
      }
    }
    if (magnitude > 15) fail(ParseErrorKind::syntax, pos_, "charge out of range");
    atom.formal_charge = sign * magnitude;
  }

  if (peek() == ':') {
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(ParseErrorKind::syntax, pos_, "atom class without digits");
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
  }

  if (peek() != ']') {
    if (done()) fail(ParseErrorKind::syntax, open, "unterminated bracket atom");
    fail(ParseErrorKind::syntax, pos_, std::string("unexpected '") + peek() + "' in bracket atom");
  }
  ++pos_;
  add_atom(atom, false, open);
}

void Parser::add_atom(Atom atom, bool organic, std::size_t offset) {
  const int idx = static_cast<int>(atoms_.size());
  atom.index = idx;
  atoms_.push_back(atom);
  organic_.push_back(organic);
  atom_offset_.push_back(offset);
  if (prev_ >= 0) {
    const BondOrder order = pending_bond_.value_or(default_order(prev_, idx));
    add_bond(prev_, idx, order, offset);
  }
  pending_bond_.reset();
  prev_ = idx;
  fragment_has_atom_ = true;
}

void Parser::parse_ring_closure(int number, std::size_t offset) {
  auto it = rings_.find(number);
  if (it == rings_.end()) {
    rings_.emplace(number, PendingRing{prev_, pending_bond_, offset});
    pending_bond_.reset();
    return;
  }
  const PendingRing open = it->second;
  rings_.erase(it);
  if (open.atom == prev_) fail(ParseErrorKind::syntax, offset, "ring closure to the same atom");
  if (open.order && pending_bond_ && *open.order != *pending_bond_) {
    fail(ParseErrorKind::syntax, offset, "conflicting ring-closure bond symbols");
  }
  BondOrder order = default_order(open.atom, prev_);
  if (open.order) order = *open.order;
  if (pending_bond_) order = *pending_bond_;
  pending_bond_.reset();
  add_bond(open.atom, prev_, order, offset);
}

void Parser::add_bond(int a, int b, BondOrder order, std::size_t offset) {
  for (const Bond& existing : bonds_) {
    if ((existing.begin == a && existing.end == b) || (existing.begin == b && existing.end == a)) {
      fail(ParseErrorKind::syntax, offset, "duplicate bond between the same atoms");
    }
  }
  bonds_.push_back(Bond{a, b, order, false});
}

BondOrder Parser::default_order(int a, int b) const {
  return atoms_[static_cast<std::size_t>(a)].aromatic && atoms_[static_cast<std::size_t>(b)].aromatic
             ? BondOrder::aromatic
             : BondOrder::single;
}

void Parser::assign_implicit_hydrogens() {
  std::vector<int> bond_sum(atoms_.size(), 0);
  for (const Bond& b : bonds_) {
    const int v = b.order == BondOrder::aromatic ? 1 : static_cast<int>(b.order);
    bond_sum[static_cast<std::size_t>(b.begin)] += v;
    bond_sum[static_cast<std::size_t>(b.end)] += v;
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Atom& atom = atoms_[i];
    if (!organic_[i]) {
      atom.implicit_h = 0;
      continue;
    }
    const auto valences = standard_valences(atom.atomic_number);
    const int used = bond_sum[i];
    std::optional<int> target;
    for (int v : valences) {
      if (v >= used) {
        target = v;
        break;
      }
    }
    if (!target) {
      fail(ParseErrorKind::valence_overflow, atom_offset_[i],
           std::string(element_symbol(atom.atomic_number)) + " has bond order sum " + std::to_string(used));
    }
    // An aromatic atom donates one valence unit to the pi system when it has
    // room to; lone-pair donors (furan o, thiophene s) have none left.
    const int h = *target - used - (atom.aromatic ? 1 : 0);
    atom.implicit_h = h > 0 ? h : 0;
  }
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::unclosed_ring: return "unclosed ring bond";
    case ParseErrorKind::unmatched_parenthesis: return "unmatched parenthesis";
    case ParseErrorKind::unknown_element: return "unknown element";
    case ParseErrorKind::valence_overflow: return "valence overflow";
    case ParseErrorKind::empty_fragment: return "empty fragment";
    case ParseErrorKind::syntax: return "syntax error";
  }
  return "parse error";
}

SmilesError::SmilesError(ParseErrorKind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(offset) + ": " + detail),
      kind_(kind),
      offset_(offset) {}

int element_from_symbol(std::string_view symbol) {
  for (std::size_t z = 1; z < kSymbols.size(); ++z) {
    if (kSymbols[z] == symbol) return static_cast<int>(z);
  }
  return 0;
}

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 1 || atomic_number >= static_cast<int>(kSymbols.size())) return "?";
  return kSymbols[static_cast<std::size_t>(atomic_number)];
}

std::span<const int> standard_valences(int atomic_number) {
  switch (atomic_number) {
    case 5: return kValB;
    case 6: return kValC;
    case 7: return kValN;
    case 8: return kValO;
    case 15: return kValP;
    case 16: return kValS;
    case 9:
    case 17:
    case 35:
    case 53: return kValHalogen;
    default: return {};
  }
}

Molecule parse_smiles(std::string_view text) { return Parser(text).run(); }

}  // namespace molbench::molgraph
