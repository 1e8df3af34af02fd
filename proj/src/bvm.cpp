#include "stonean/bvm.hpp"

#include <algorithm>
#include <functional>

#include "stonean/error.hpp"

namespace stonean::bvm {

using balg::Elem;
using logic::Op;

std::size_t table_size(int arity, int n) {
  std::size_t s = 1;
  for (int i = 0; i < arity; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t tuple_index(const std::vector<int>& tuple, int n) {
  std::size_t idx = 0;
  for (int x : tuple) idx = idx * n + x;
  return idx;
}

std::vector<int> tuple_at(std::size_t index, int arity, int n) {
  std::vector<int> t(arity);
  for (int i = arity - 1; i >= 0; --i) {
    t[i] = static_cast<int>(index % n);
    index /= n;
  }
  return t;
}

Subset BVModel::rel_bits(const std::string& r, const std::vector<int>& tuple) const {
  auto it = rel.find(r);
  if (it == rel.end()) throw InputError("unknown relation " + r);
  return it->second[tuple_index(tuple, size())];
}

int BVModel::index_of(const std::string& id) const {
  auto it = std::find(domain.begin(), domain.end(), id);
  return it == domain.end() ? -1 : static_cast<int>(it - domain.begin());
}

int BVModel::resolve(const std::string& c) const {
  if (auto it = constants.find(c); it != constants.end()) return it->second;
  if (c.rfind(logic::kElementPrefix, 0) != 0) return -1;
  const std::string id = c.substr(2);
  if (int i = index_of(id); i >= 0) return i;
  if (auto it = aliases.find(id); it != aliases.end()) return it->second;
  return -1;
}

BVModel BVModel::blank(balg::BoolAlg alg, Signature sig, std::vector<std::string> domain) {
  BVModel m;
  const int n = static_cast<int>(domain.size());
  if (n == 0) throw InputError("model domain is empty");
  m.algebra = std::move(alg);
  m.sig = std::move(sig);
  m.domain = std::move(domain);
  m.eq.assign(static_cast<std::size_t>(n) * n, Subset{});
  const Subset one = Subset::full(m.algebra.atom_count());
  for (int s = 0; s < n; ++s) m.eq[s * n + s] = one;
  for (const auto& [r, k] : m.sig.relations) m.rel[r].assign(table_size(k, n), Subset{});
  return m;
}

int TarskiModel::resolve(const std::string& c) const {
  if (auto it = constants.find(c); it != constants.end()) return it->second;
  if (c.rfind(logic::kElementPrefix, 0) != 0) return -1;
  const std::string id = c.substr(2);
  if (auto it = std::find(domain.begin(), domain.end(), id); it != domain.end())
    return static_cast<int>(it - domain.begin());
  if (auto it = aliases.find(id); it != aliases.end()) return it->second;
  return -1;
}

ValidationReport validate(const BVModel& m) {
  ValidationReport rep;
  const int n = m.size();
  const Subset one = Subset::full(m.algebra.atom_count());
  constexpr std::size_t kMaxListed = 64;
  auto violate = [&](Violation v) {
    rep.valid = false;
    if (rep.violations.size() < kMaxListed) rep.violations.push_back(std::move(v));
  };
  if (m.eq.size() != static_cast<std::size_t>(n) * n) throw InputError("equality table has the wrong size");
  for (const auto& [r, k] : m.sig.relations) {
    auto it = m.rel.find(r);
    if (it == m.rel.end() || it->second.size() != table_size(k, n))
      throw InputError("relation table for " + r + " has the wrong size");
  }
  for (const auto& [c, x] : m.constants)
    if (x < 0 || x >= n) throw InputError("constant " + c + " names no element");

  for (int s = 0; s < n; ++s)
    if (m.eq_bits(s, s) != one)
      violate({"reflexivity", "", {s}, "[" + m.domain[s] + "=" + m.domain[s] + "] = " + m.algebra.format(m.eq_bits(s, s))});
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (m.eq_bits(s, t) != m.eq_bits(t, s)) violate({"symmetry", "", {s, t}, ""});
      for (int u = 0; u < n; ++u)
        if (!(m.eq_bits(s, t) & m.eq_bits(t, u)).subset_of(m.eq_bits(s, u))) violate({"transitivity", "", {s, t, u}, ""});
      if (s != t && m.eq_bits(s, t) == one) rep.extensional = false;
    }
  for (const auto& [r, k] : m.sig.relations) {
    const std::size_t cells = table_size(k, n);
    const auto& table = m.rel.at(r);
    for (std::size_t a = 0; a < cells; ++a) {
      const auto sa = tuple_at(a, k, n);
      for (std::size_t b = 0; b < cells; ++b) {
        const auto tb = tuple_at(b, k, n);
        Subset lhs = table[a];
        for (int i = 0; i < k; ++i) lhs &= m.eq_bits(sa[i], tb[i]);
        if (!lhs.subset_of(table[b])) {
          std::vector<int> els = sa;
          els.insert(els.end(), tb.begin(), tb.end());
          violate({"congruence", r, els, ""});
        }
      }
    }
  }
  return rep;
}

namespace {

int lookup(const Env& env, const std::string& v) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == v) return it->second;
  return -1;
}

template <class M>
int term_value(const M& m, const logic::Term& t, const Env& env) {
  if (t.is_var()) {
    int x = lookup(env, t.name);
    if (x < 0) throw InputError("free variable " + t.name + " in a formula that must be closed");
    return x;
  }
  int x = m.resolve(t.name);
  if (x < 0) throw InputError("unknown constant " + t.name);
  return x;
}

}  // namespace

Subset eval_bits(const BVModel& m, const Formula& f, Env& env) {
  const Subset one = Subset::full(m.algebra.atom_count());
  switch (f->op) {
    case Op::Rel: {
      std::vector<int> tuple;
      for (const auto& t : f->terms) tuple.push_back(term_value(m, t, env));
      return m.rel_bits(f->symbol, tuple);
    }
    case Op::Eq:
      return m.eq_bits(term_value(m, f->terms[0], env), term_value(m, f->terms[1], env));
    case Op::Not:
      return eval_bits(m, f->kids[0], env).complement(m.algebra.atom_count());
    case Op::And:
      return eval_bits(m, f->kids[0], env) & eval_bits(m, f->kids[1], env);
    case Op::Or:
      return eval_bits(m, f->kids[0], env) | eval_bits(m, f->kids[1], env);
    case Op::Implies:
      return eval_bits(m, f->kids[0], env).complement(m.algebra.atom_count()) | eval_bits(m, f->kids[1], env);
    case Op::Exists:
    case Op::Forall: {
      const bool ex = f->op == Op::Exists;
      Subset acc = ex ? Subset{} : one;
      env.emplace_back(f->symbol, 0);
      for (int x = 0; x < m.size(); ++x) {
        env.back().second = x;
        Subset v = eval_bits(m, f->kids[0], env);
        acc = ex ? (acc | v) : (acc & v);
      }
      env.pop_back();
      return acc;
    }
  }
  return {};
}

Elem eval(const BVModel& m, const Formula& f) {
  Env env;
  return m.algebra.elem(eval_bits(m, f, env));
}

namespace {

// Classes of the relation ⟦σ=τ⟧ ≥ g, representatives are least elements.
void classes(const BVModel& m, Subset g, std::vector<int>& class_of, std::vector<int>& reps) {
  class_of.assign(m.size(), -1);
  reps.clear();
  for (int s = 0; s < m.size(); ++s) {
    if (class_of[s] >= 0) continue;
    class_of[s] = static_cast<int>(reps.size());
    for (int t = s + 1; t < m.size(); ++t)
      if (class_of[t] < 0 && g.subset_of(m.eq_bits(s, t))) class_of[t] = class_of[s];
    reps.push_back(s);
  }
}

std::map<std::string, int> pushed_aliases(const BVModel& m, const std::vector<int>& class_of) {
  std::map<std::string, int> out;
  for (int s = 0; s < m.size(); ++s) out[m.domain[s]] = class_of[s];
  for (const auto& [id, s] : m.aliases) out[id] = class_of[s];
  return out;
}

}  // namespace

QuotientModel quotient_model(const BVModel& m, const balg::Filter& f) {
  m.algebra.require_same(f.algebra());
  QuotientModel q{BVModel{}, balg::quotient(f), {}, {}};
  classes(m, f.generator().bits(), q.class_of, q.reps);
  std::vector<std::string> dom;
  for (int r : q.reps) dom.push_back(m.domain[r]);
  BVModel& out = q.model;
  out = BVModel::blank(q.algebra.algebra, m.sig, dom);
  const int k = out.size();
  const auto& proj = q.algebra.proj;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) out.eq[a * k + b] = proj.apply(m.eq_bits(q.reps[a], q.reps[b]));
  for (const auto& [r, ar] : m.sig.relations)
    for (std::size_t c = 0; c < table_size(ar, k); ++c) {
      auto t = tuple_at(c, ar, k);
      for (auto& x : t) x = q.reps[x];
      out.rel[r][c] = proj.apply(m.rel_bits(r, t));
    }
  for (const auto& [c, x] : m.constants) out.constants[c] = q.class_of[x];
  out.aliases = pushed_aliases(m, q.class_of);
  for (const auto& id : out.domain) out.aliases.erase(id);
  return q;
}

TarskiQuotient tarski_quotient(const BVModel& m, const balg::Filter& g) {
  m.algebra.require_same(g.algebra());
  if (!g.is_ultra()) throw PreconditionError("Tarski quotient needs an ultrafilter");
  const int a = g.generator().bits().first();
  TarskiQuotient q;
  classes(m, g.generator().bits(), q.class_of, q.reps);
  TarskiModel& t = q.model;
  t.sig = m.sig;
  for (int r : q.reps) t.domain.push_back(m.domain[r]);
  const int k = t.size();
  for (const auto& [r, ar] : m.sig.relations) {
    auto& table = t.rel[r];
    table.assign(table_size(ar, k), false);
    for (std::size_t c = 0; c < table.size(); ++c) {
      auto tu = tuple_at(c, ar, k);
      for (auto& x : tu) x = q.reps[x];
      table[c] = m.rel_bits(r, tu).contains(a);
    }
  }
  for (const auto& [c, x] : m.constants) t.constants[c] = q.class_of[x];
  t.aliases = pushed_aliases(m, q.class_of);
  for (const auto& id : t.domain) t.aliases.erase(id);
  return q;
}

bool satisfies(const TarskiModel& t, const Formula& f, Env& env) {
  switch (f->op) {
    case Op::Rel: {
      std::vector<int> tuple;
      for (const auto& x : f->terms) tuple.push_back(term_value(t, x, env));
      auto it = t.rel.find(f->symbol);
      if (it == t.rel.end()) throw InputError("unknown relation " + f->symbol);
      return it->second[tuple_index(tuple, t.size())];
    }
    case Op::Eq:
      return term_value(t, f->terms[0], env) == term_value(t, f->terms[1], env);
    case Op::Not:
      return !satisfies(t, f->kids[0], env);
    case Op::And:
      return satisfies(t, f->kids[0], env) && satisfies(t, f->kids[1], env);
    case Op::Or:
      return satisfies(t, f->kids[0], env) || satisfies(t, f->kids[1], env);
    case Op::Implies:
      return !satisfies(t, f->kids[0], env) || satisfies(t, f->kids[1], env);
    case Op::Exists:
    case Op::Forall: {
      const bool ex = f->op == Op::Exists;
      env.emplace_back(f->symbol, 0);
      bool result = !ex;
      for (int x = 0; x < t.size(); ++x) {
        env.back().second = x;
        if (satisfies(t, f->kids[0], env) == ex) {
          result = ex;
          break;
        }
      }
      env.pop_back();
      return result;
    }
  }
  return false;
}

bool satisfies(const TarskiModel& t, const Formula& f) {
  Env env;
  return satisfies(t, f, env);
}

std::vector<Formula> check_formulas(const Signature& sig, int depth) {
  if (depth < 1) throw PreconditionError("depth must be at least 1");
  return logic::generate_formulas(sig, {"x", "y"}, depth);
}

namespace {

// Calls fn(env) for every assignment of the variables to domain elements.
void for_each_assignment(const std::vector<std::string>& vars, int n, const std::function<void(Env&)>& fn) {
  Env env;
  for (const auto& v : vars) env.emplace_back(v, 0);
  if (n == 0) return;
  while (true) {
    fn(env);
    int p = static_cast<int>(env.size()) - 1;
    while (p >= 0 && ++env[p].second == n) env[p--].second = 0;
    if (p < 0) return;
  }
}

std::string instance_text(const BVModel& m, const Formula& f, const Env& env) {
  Formula g = f;
  for (const auto& [v, x] : env) g = logic::substitute(g, v, logic::kElementPrefix + m.domain[x]);
  return logic::print(g);
}

}  // namespace

std::vector<int> minimal_witness_cover(const BVModel& m, const Formula& f) {
  if (f->op != Op::Exists) throw PreconditionError("witness covers need an existential formula");
  Env env;
  const Subset value = eval_bits(m, f, env);
  std::vector<Subset> w(m.size());
  env.emplace_back(f->symbol, 0);
  for (int x = 0; x < m.size(); ++x) {
    env.back().second = x;
    w[x] = eval_bits(m, f->kids[0], env);
  }
  if (value.empty()) return {};
  if (m.size() <= 16) {
    std::vector<int> best;
    int best_size = m.size() + 1;
    for (std::uint32_t s = 1; s < (1u << m.size()); ++s) {
      int sz = std::popcount(s);
      if (sz >= best_size) continue;
      Subset cover;
      for (int x = 0; x < m.size(); ++x)
        if (s >> x & 1) cover |= w[x];
      if (value.subset_of(cover)) {
        best_size = sz;
        best = Subset(s).members();
      }
    }
    return best;
  }
  std::vector<int> out;
  Subset covered;
  while (!value.subset_of(covered)) {
    int pick = 0;
    for (int x = 1; x < m.size(); ++x)
      if ((w[x] - covered).size() > (w[pick] - covered).size()) pick = x;
    out.push_back(pick);
    covered |= w[pick];
  }
  std::sort(out.begin(), out.end());
  return out;
}

FullnessReport is_full(const BVModel& m, int depth) {
  FullnessReport rep;
  rep.depth = depth;
  const auto formulas = check_formulas(m.sig, depth);
  rep.formulas = formulas.size();
  const auto us = balg::ultrafilters(m.algebra);
  std::vector<TarskiQuotient> tq;
  for (const auto& g : us) tq.push_back(tarski_quotient(m, g));

  for (const auto& f : formulas) {
    const auto fv = logic::free_vars_ordered(f);
    for_each_assignment(fv, m.size(), [&](Env& env) {
      ++rep.instances;
      const Subset v = eval_bits(m, f, env);
      // (a) Łoś: M/G ⊨ φ iff ⟦φ⟧ ∈ G, for every ultrafilter.
      for (std::size_t a = 0; a < us.size(); ++a) {
        Env tenv;
        for (const auto& [var, x] : env) tenv.emplace_back(var, tq[a].class_of[x]);
        if (satisfies(tq[a].model, f, tenv) != v.contains(static_cast<int>(a)) && rep.los_pass) {
          rep.los_pass = false;
          rep.los_failure = std::make_pair(instance_text(m, f, env), static_cast<int>(a));
        }
      }
      // (b) each atom below an existential value is below some witness value.
      if (f->op == Op::Exists) {
        Subset covered;
        env.emplace_back(f->symbol, 0);
        for (int x = 0; x < m.size(); ++x) {
          env.back().second = x;
          covered |= eval_bits(m, f->kids[0], env);
        }
        env.pop_back();
        if (!v.subset_of(covered) && rep.cover_pass) {
          rep.cover_pass = false;
          rep.cover_failure = instance_text(m, f, env);
        }
      }
    });
    if (f->op == Op::Exists && fv.empty() && rep.covers.size() < 32)
      rep.covers.push_back({f, eval(m, f), minimal_witness_cover(m, f)});
  }
  rep.agree = rep.los_pass == rep.cover_pass;
  return rep;
}

std::vector<std::vector<Subset>> antichains(const balg::BoolAlg& b, int max_size) {
  const int atoms = b.atom_count();
  if (atoms > 16) throw PreconditionError("antichain enumeration is limited to 16 atoms");
  const std::uint64_t count = b.element_count();
  std::vector<std::vector<Subset>> out;
  std::vector<Subset> cur;
  std::function<void(std::uint64_t, Subset)> rec = [&](std::uint64_t from, Subset used) {
    if (cur.size() >= 2) out.push_back(cur);
    if (max_size && static_cast<int>(cur.size()) >= max_size) return;
    for (std::uint64_t e = from; e < count; ++e) {
      if (Subset(e).intersects(used)) continue;
      cur.push_back(Subset(e));
      rec(e + 1, used | Subset(e));
      cur.pop_back();
    }
  };
  rec(1, Subset{});
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

MixingReport has_mixing(const BVModel& m, int max_size) {
  MixingReport rep;
  const int n = m.size();
  for (const auto& a : antichains(m.algebra, max_size)) {
    ++rep.antichains;
    const int k = static_cast<int>(a.size());
    std::vector<int> choice(k, 0);
    while (true) {
      bool mixed = false;
      for (int t = 0; t < n && !mixed; ++t) {
        bool ok = true;
        for (int j = 0; j < k && ok; ++j) ok = a[j].subset_of(m.eq_bits(t, choice[j]));
        mixed = ok;
      }
      if (!mixed) {
        rep.pass = false;
        rep.antichain = a;
        rep.assignment = choice;
        return rep;
      }
      int p = k - 1;
      while (p >= 0 && ++choice[p] == n) choice[p--] = 0;
      if (p < 0) break;
    }
  }
  return rep;
}

BVModel product_model(const std::vector<TarskiModel>& factors) {
  if (factors.empty()) throw InputError("product of an empty family");
  for (const auto& f : factors)
    if (!(f.sig == factors[0].sig)) throw InputError("product factors have different signatures");
  const int k = static_cast<int>(factors.size());
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) labels.push_back("i" + std::to_string(i));
  // Choice functions in mixed radix, the last factor varying fastest.
  std::vector<std::vector<int>> funcs{{}};
  for (const auto& f : factors) {
    std::vector<std::vector<int>> next;
    for (const auto& g : funcs)
      for (int x = 0; x < f.size(); ++x) {
        next.push_back(g);
        next.back().push_back(x);
      }
    funcs = std::move(next);
  }
  std::vector<std::string> dom;
  for (const auto& g : funcs) {
    std::string id;
    for (int i = 0; i < k; ++i) id += (i ? "_" : "") + factors[i].domain[g[i]];
    dom.push_back(id);
  }
  BVModel m = BVModel::blank(balg::mk_powerset(labels), factors[0].sig, dom);
  const int n = m.size();
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      Subset v;
      for (int i = 0; i < k; ++i)
        if (funcs[s][i] == funcs[t][i]) v = v.with(i);
      m.eq[s * n + t] = v;
    }
  for (const auto& [r, ar] : m.sig.relations)
    for (std::size_t c = 0; c < table_size(ar, n); ++c) {
      auto tu = tuple_at(c, ar, n);
      Subset v;
      for (int i = 0; i < k; ++i) {
        std::vector<int> comp;
        for (int x : tu) comp.push_back(funcs[x][i]);
        if (factors[i].rel.at(r)[tuple_index(comp, factors[i].size())]) v = v.with(i);
      }
      m.rel[r][c] = v;
    }
  for (const auto& c : m.sig.constants) {
    std::vector<int> g;
    for (const auto& f : factors) {
      auto it = f.constants.find(c);
      if (it == f.constants.end()) throw InputError("factor does not interpret constant " + c);
      g.push_back(it->second);
    }
    m.constants[c] = static_cast<int>(std::find(funcs.begin(), funcs.end(), g) - funcs.begin());
  }
  return m;
}

TarskiModel ultraproduct(const std::vector<TarskiModel>& factors, int index_atom) {
  BVModel p = product_model(factors);
  return tarski_quotient(p, balg::Filter(p.algebra.atom(index_atom))).model;
}

MorphismReport check_morphism(const BVMorphism& m) {
  MorphismReport rep;
  const BVModel& s = m.source;
  const BVModel& t = m.target;
  s.algebra.require_same(m.i.source());
  t.algebra.require_same(m.i.target());
  if (!(s.sig.relations == t.sig.relations)) throw InputError("morphism between models of different signatures");
  if (static_cast<int>(m.phi.size()) != s.size()) throw InputError("domain map is not total");
  auto note = [&](bool strict_fail, bool eq_fail, const std::string& what) {
    if (strict_fail) {
      rep.morphism = false;
      rep.failures.push_back("inequality fails at " + what);
    }
    if (eq_fail) {
      rep.embedding = false;
      if (!strict_fail) rep.failures.push_back("strict inequality at " + what);
    }
  };
  for (int a = 0; a < s.size(); ++a)
    for (int b = 0; b < s.size(); ++b) {
      Subset lhs = m.i.apply(s.eq_bits(a, b)), rhs = t.eq_bits(m.phi[a], m.phi[b]);
      note(!lhs.subset_of(rhs), lhs != rhs, "[" + s.domain[a] + "=" + s.domain[b] + "]");
    }
  for (const auto& [r, ar] : s.sig.relations)
    for (std::size_t c = 0; c < table_size(ar, s.size()); ++c) {
      auto tu = tuple_at(c, ar, s.size());
      std::vector<int> img;
      std::string what = r + "(";
      for (std::size_t j = 0; j < tu.size(); ++j) {
        img.push_back(m.phi[tu[j]]);
        what += (j ? "," : "") + s.domain[tu[j]];
      }
      Subset lhs = m.i.apply(s.rel.at(r)[c]), rhs = t.rel_bits(r, img);
      note(!lhs.subset_of(rhs), lhs != rhs, what + ")");
    }
  const Subset one = Subset::full(t.algebra.atom_count());
  for (const auto& [c, x] : s.constants) {
    auto it = t.constants.find(c);
    if (it != t.constants.end() && t.eq_bits(m.phi[x], it->second) != one) {
      rep.morphism = false;
      rep.failures.push_back("constant " + c + " not preserved");
    }
  }
  rep.embedding = rep.embedding && rep.morphism;
  bool onto = true;
  for (int y = 0; y < t.size() && onto; ++y) {
    bool hit = false;
    for (int x = 0; x < s.size() && !hit; ++x) hit = t.eq_bits(m.phi[x], y) == one;
    onto = hit;
  }
  rep.isomorphism = rep.embedding && onto && m.i.iso();
  return rep;
}

ElementarityReport is_elementary(const BVMorphism& m, int depth) {
  ElementarityReport rep;
  for (const auto& f : check_formulas(m.source.sig, depth)) {
    const auto fv = logic::free_vars_ordered(f);
    for_each_assignment(fv, m.source.size(), [&](Env& env) {
      if (!rep.elementary) return;
      ++rep.checked;
      Env timg = env;
      for (auto& [v, x] : timg) x = m.phi[x];
      if (m.i.apply(eval_bits(m.source, f, env)) != eval_bits(m.target, f, timg)) {
        rep.elementary = false;
        rep.failure = instance_text(m.source, f, env);
      }
    });
    if (!rep.elementary) break;
  }
  return rep;
}

BVMorphism compose(const BVMorphism& g, const BVMorphism& f) {
  if (static_cast<int>(g.phi.size()) != f.target.size()) throw PreconditionError("morphisms do not compose");
  std::vector<int> phi;
  for (int x : f.phi) phi.push_back(g.phi[x]);
  return BVMorphism{f.source, g.target, balg::compose(g.i, f.i), phi};
}

BVMorphism identity_morphism(const BVModel& m) {
  std::vector<int> phi(m.size());
  for (int x = 0; x < m.size(); ++x) phi[x] = x;
  return BVMorphism{m, m, balg::BAHom::identity(m.algebra), phi};
}

BVModel transport(const BVModel& m, const balg::BAHom& iso) {
  m.algebra.require_same(iso.source());
  if (!iso.iso()) throw PreconditionError("transport needs an isomorphism of algebras");
  BVModel out = m;
  out.algebra = iso.target();
  for (auto& v : out.eq) v = iso.apply(v);
  for (auto& [r, t] : out.rel)
    for (auto& v : t) v = iso.apply(v);
  return out;
}

std::optional<std::vector<int>> find_model_isomorphism(const BVModel& a, const BVModel& b) {
  if (!a.algebra.same_as(b.algebra) || a.size() != b.size() || !(a.sig.relations == b.sig.relations))
    return std::nullopt;
  const int n = a.size();
  std::vector<int> f(n, -1);
  std::vector<bool> used(n, false);
  // Unary invariants prune the search.
  auto profile = [](const BVModel& m, int x) {
    std::vector<std::uint64_t> p;
    for (int y = 0; y < m.size(); ++y) p.push_back(m.eq_bits(x, y).bits());
    std::sort(p.begin(), p.end());
    for (const auto& [r, ar] : m.sig.relations)
      if (ar == 1) p.push_back(m.rel.at(r)[x].bits());
    return p;
  };
  std::vector<std::vector<std::uint64_t>> pa(n), pb(n);
  for (int x = 0; x < n; ++x) pa[x] = profile(a, x), pb[x] = profile(b, x);
  auto full_check = [&]() {
    for (const auto& [r, ar] : a.sig.relations)
      for (std::size_t c = 0; c < table_size(ar, n); ++c) {
        auto tu = tuple_at(c, ar, n);
        for (auto& x : tu) x = f[x];
        if (a.rel.at(r)[c] != b.rel_bits(r, tu)) return false;
      }
    for (const auto& [c, x] : a.constants) {
      auto it = b.constants.find(c);
      if (it == b.constants.end() || it->second != f[x]) return false;
    }
    return true;
  };
  std::function<bool(int)> rec = [&](int x) {
    if (x == n) return full_check();
    for (int y = 0; y < n; ++y) {
      if (used[y] || pa[x] != pb[y]) continue;
      bool ok = true;
      for (int z = 0; z < x && ok; ++z) ok = a.eq_bits(x, z) == b.eq_bits(y, f[z]);
      if (!ok) continue;
      f[x] = y, used[y] = true;
      if (rec(x + 1)) return true;
      used[y] = false;
    }
    f[x] = -1;
    return false;
  };
  if (rec(0)) return f;
  return std::nullopt;
}

std::vector<std::string> validity_list() {
  return {
      "A x. (R(x) | ~R(x))",
      "E x. x = x",
      "A x. x = x",
      "((~E x. R(x) -> A x. ~R(x)) & (A x. ~R(x) -> ~E x. R(x)))",
      "A x. A y. (x = y -> y = x)",
      "A x. A y. A z. ((x = y & y = z) -> x = z)",
      "A x. A y. ((x = y & R(x)) -> R(y))",
      "(A x. R(x) -> E x. R(x))",
      "(E x. A y. Q(x, y) -> A y. E x. Q(x, y))",
      "A x. (R(x) -> E y. R(y))",
  };
}

}  // namespace stonean::bvm
