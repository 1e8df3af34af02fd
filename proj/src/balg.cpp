#include "stonean/balg.hpp"

#include <algorithm>
#include <set>

#include "stonean/error.hpp"

namespace stonean::balg {

BoolAlg mk_powerset(std::vector<std::string> labels) {
  if (labels.empty()) throw InputError("algebra: no atoms");
  if (labels.size() > static_cast<std::size_t>(kMaxPoints)) throw InputError("algebra: more than 64 atoms");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw InputError("algebra: empty atom label");
    if (!seen.insert(l).second) throw InputError("algebra: duplicate atom label " + l);
  }
  BoolAlg b;
  b.data_ = std::make_shared<const BoolAlg::Data>(BoolAlg::Data{std::move(labels)});
  if (b.atom_count() <= 4) {
    if (auto err = b.check_axioms(); !err.empty()) throw Error("algebra axioms fail: " + err);
  }
  return b;
}

int BoolAlg::atom_index(const std::string& label) const {
  auto it = std::find(labels().begin(), labels().end(), label);
  return it == labels().end() ? -1 : static_cast<int>(it - labels().begin());
}

Elem BoolAlg::top() const { return Elem(*this, Subset::full(atom_count())); }
Elem BoolAlg::bottom() const { return Elem(*this, Subset{}); }
Elem BoolAlg::atom(int i) const { return Elem(*this, Subset::singleton(i)); }
Elem BoolAlg::elem(Subset bits) const { return Elem(*this, bits); }

Elem BoolAlg::from_labels(const std::vector<std::string>& names) const {
  Subset s;
  for (const auto& n : names) {
    int i = atom_index(n);
    if (i < 0) throw InputError("unknown atom " + n);
    s = s.with(i);
  }
  return elem(s);
}

Elem BoolAlg::parse(const std::string& text) const {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '{' && c != '}' && c != '[' && c != ']' && c != '"') t += c;
  if (t == "0") return bottom();
  if (t == "1") return top();
  const std::string vee = "∨";
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 0; i < t.size();) {
    if (t.compare(i, vee.size(), vee) == 0) {
      parts.push_back(cur), cur.clear(), i += vee.size();
    } else if (t[i] == ',' || t[i] == '|') {
      parts.push_back(cur), cur.clear(), ++i;
    } else {
      cur += t[i++];
    }
  }
  parts.push_back(cur);
  for (const auto& p : parts)
    if (p.empty()) throw InputError("malformed element '" + text + "'");
  return from_labels(parts);
}

std::vector<Elem> BoolAlg::elements() const {
  if (atom_count() > 20) throw PreconditionError("element enumeration is limited to 20 atoms");
  std::vector<Elem> out;
  for (std::uint64_t b = 0; b < element_count(); ++b) out.push_back(elem(Subset(b)));
  return out;
}

bool BoolAlg::same_as(const BoolAlg& other) const {
  return data_ == other.data_ || (data_ && other.data_ && data_->labels == other.data_->labels);
}

void BoolAlg::require_same(const BoolAlg& other) const {
  if (!same_as(other)) throw AlgebraMismatch("elements belong to different boolean algebras");
}

std::string BoolAlg::format(Subset bits) const {
  if (bits.empty()) return "0";
  std::string out;
  bits.for_each([&](int i) {
    if (!out.empty()) out += "∨";
    out += label(i);
  });
  if (bits == Subset::full(atom_count())) out += " = 1";
  return out;
}

std::string BoolAlg::check_axioms() const {
  // The laws are checked on the element operations themselves, not on raw bits.
  const auto els = elements();
  const Elem one = top(), zero = bottom();
  for (const auto& a : els) {
    if (!((a | zero) == a) || !((a & one) == a)) return "identity laws at " + a.str();
    if (!((a | ~a) == one) || !((a & ~a) == zero)) return "complement laws at " + a.str();
    if (!(~~a == a)) return "involution at " + a.str();
    for (const auto& b : els) {
      if (!((a | b) == (b | a)) || !((a & b) == (b & a))) return "commutativity at " + a.str() + ", " + b.str();
      if (!((a | (a & b)) == a) || !((a & (a | b)) == a)) return "absorption at " + a.str() + ", " + b.str();
      if (a.leq(b) != ((a & b) == a)) return "order at " + a.str() + ", " + b.str();
      for (const auto& c : els) {
        if (!(((a | b) | c) == (a | (b | c))) || !(((a & b) & c) == (a & (b & c))))
          return "associativity at " + a.str() + ", " + b.str() + ", " + c.str();
        if (!((a & (b | c)) == ((a & b) | (a & c))) || !((a | (b & c)) == ((a | b) & (a | c))))
          return "distributivity at " + a.str() + ", " + b.str() + ", " + c.str();
      }
    }
  }
  return {};
}

Elem::Elem(BoolAlg alg, Subset bits) : alg_(std::move(alg)), bits_(bits) {
  if (!bits.subset_of(Subset::full(alg_.atom_count()))) throw PreconditionError("element has bits outside the atom set");
}

Elem Elem::operator&(const Elem& o) const {
  alg_.require_same(o.alg_);
  return Elem(alg_, bits_ & o.bits_);
}

Elem Elem::operator|(const Elem& o) const {
  alg_.require_same(o.alg_);
  return Elem(alg_, bits_ | o.bits_);
}

Elem Elem::operator~() const { return Elem(alg_, bits_.complement(alg_.atom_count())); }

bool Elem::leq(const Elem& o) const {
  alg_.require_same(o.alg_);
  return bits_.subset_of(o.bits_);
}

bool Elem::operator==(const Elem& o) const {
  alg_.require_same(o.alg_);
  return bits_ == o.bits_;
}

std::vector<std::string> Elem::atom_labels() const {
  std::vector<std::string> out;
  bits_.for_each([&](int i) { out.push_back(alg_.label(i)); });
  std::sort(out.begin(), out.end());
  return out;
}

Filter::Filter(Elem generator) : gen_(std::move(generator)) {
  if (gen_.is_bottom()) throw PreconditionError("filter generator must be nonzero");
}

std::string Filter::str() const {
  std::string g = gen_.is_atom() ? algebra().label(gen_.bits().first())
                  : gen_.is_top()  ? std::string("1")
                                   : algebra().format(gen_.bits());
  return "F_{" + g + "}";
}

BAHom::BAHom(BoolAlg source, BoolAlg target, std::vector<int> atom_map)
    : source_(std::move(source)), target_(std::move(target)), atom_map_(std::move(atom_map)) {
  if (static_cast<int>(atom_map_.size()) != target_.atom_count())
    throw InputError("homomorphism: atom map must cover every atom of the target");
  for (int a : atom_map_)
    if (a < 0 || a >= source_.atom_count()) throw InputError("homomorphism: atom map refers to an unknown atom");
}

BAHom BAHom::identity(const BoolAlg& b) {
  std::vector<int> m(b.atom_count());
  for (int i = 0; i < b.atom_count(); ++i) m[i] = i;
  return BAHom(b, b, m);
}

BAHom BAHom::from_function(const BoolAlg& source, const BoolAlg& target, const std::vector<Subset>& table) {
  if (table.size() != source.element_count()) throw PreconditionError("homomorphism table must list every element");
  // atom c of the target goes to the unique source atom a with c ∈ i({a}).
  std::vector<int> m(target.atom_count(), -1);
  for (int a = 0; a < source.atom_count(); ++a)
    table[Subset::singleton(a).bits()].for_each([&](int c) {
      if (m[c] != -1) throw PreconditionError("function is not a homomorphism: images of atoms overlap");
      m[c] = a;
    });
  for (int c = 0; c < target.atom_count(); ++c)
    if (m[c] == -1) throw PreconditionError("function is not a homomorphism: images of atoms do not cover 1");
  BAHom h(source, target, m);
  for (std::uint64_t b = 0; b < source.element_count(); ++b)
    if (h.apply(Subset(b)) != table[b])
      throw PreconditionError("function is not a homomorphism at " + source.format(Subset(b)));
  return h;
}

Subset BAHom::apply(Subset b) const {
  Subset out;
  for (int c = 0; c < target_.atom_count(); ++c)
    if (b.contains(atom_map_[c])) out = out.with(c);
  return out;
}

Elem BAHom::operator()(const Elem& b) const {
  source_.require_same(b.algebra());
  return target_.elem(apply(b.bits()));
}

Subset BAHom::left_adjoint(Subset c) const {
  Subset out;
  c.for_each([&](int x) { out = out.with(atom_map_[x]); });
  return out;
}

Elem BAHom::left_adjoint(const Elem& c) const {
  target_.require_same(c.algebra());
  return source_.elem(left_adjoint(c.bits()));
}

bool BAHom::injective() const {
  Subset hit;
  for (int a : atom_map_) hit = hit.with(a);
  return hit == Subset::full(source_.atom_count());
}

bool BAHom::surjective() const {
  Subset hit;
  for (int a : atom_map_) {
    if (hit.contains(a)) return false;
    hit = hit.with(a);
  }
  return true;
}

bool operator==(const BAHom& a, const BAHom& b) {
  return a.source_.same_as(b.source_) && a.target_.same_as(b.target_) && a.atom_map_ == b.atom_map_;
}

BAHom compose(const BAHom& g, const BAHom& f) {
  f.target().require_same(g.source());
  std::vector<int> m(g.target().atom_count());
  for (int c = 0; c < g.target().atom_count(); ++c) m[c] = f.atom_map()[g.atom_map()[c]];
  return BAHom(f.source(), g.target(), m);
}

std::vector<Filter> ultrafilters(const BoolAlg& b) {
  std::vector<Filter> out;
  for (int i = 0; i < b.atom_count(); ++i) out.emplace_back(b.atom(i));
  return out;
}

StoneSpace stone_space(const BoolAlg& b) {
  std::vector<std::string> pts;
  for (const auto& l : b.labels()) pts.push_back("G_" + l);
  return StoneSpace{b, topo::FinTop::discrete(pts)};
}

Subset StoneSpace::clopen(const Elem& b) const {
  algebra.require_same(b.algebra());
  // N_b: the ultrafilters containing b.
  Subset n;
  const auto us = ultrafilters(algebra);
  for (int g = 0; g < static_cast<int>(us.size()); ++g)
    if (us[g].contains(b)) n = n.with(g);
  return n;
}

Elem StoneSpace::from_clopen(Subset n) const {
  if (!space.is_open(n)) throw PreconditionError("not a clopen set of the Stone space");
  return algebra.elem(n);
}

Quotient quotient(const Filter& f) {
  const BoolAlg& b = f.algebra();
  const Subset g = f.generator().bits();
  std::vector<int> atoms = g.members();
  std::vector<std::string> labels;
  for (int a : atoms) labels.push_back(b.label(a));
  BoolAlg q = mk_powerset(labels);
  return Quotient{q, BAHom(b, q, atoms), atoms};
}

std::vector<int> dual_map(const BAHom& i) {
  const BoolAlg& src = i.source();
  std::vector<int> out;
  for (int c = 0; c < i.target().atom_count(); ++c) {
    // i⁻¹[G_c] is a filter; find its generator as the meet of its members.
    Subset gen = Subset::full(src.atom_count());
    for (std::uint64_t b = 0; b < src.element_count(); ++b)
      if (i.apply(Subset(b)).contains(c)) gen &= Subset(b);
    if (gen.size() != 1) throw Error("preimage of an ultrafilter is not an ultrafilter");
    out.push_back(gen.first());
  }
  return out;
}

BAHom hom_from_dual(const BoolAlg& source, const BoolAlg& target, const std::vector<int>& dual) {
  StoneSpace ss = stone_space(source);
  std::vector<Subset> table;
  for (std::uint64_t b = 0; b < source.element_count(); ++b) {
    Subset nb = ss.clopen(source.elem(Subset(b)));
    Subset pre;
    for (int c = 0; c < static_cast<int>(dual.size()); ++c)
      if (nb.contains(dual[c])) pre = pre.with(c);
    table.push_back(pre);
  }
  return BAHom::from_function(source, target, table);
}

}  // namespace stonean::balg
