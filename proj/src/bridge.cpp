#include "stonean/bridge.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <functional>
#include <set>

#include "stonean/error.hpp"

namespace stonean::bridge {

using balg::BAHom;
using balg::Filter;
using sheaf::EtaleSpace;
using topo::FinTop;

namespace {

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

int top_level(const Presheaf& f) {
  const int t = f.level_index(f.space.full());
  if (t < 0) throw PreconditionError("presheaf has no section set over the whole space");
  return t;
}

// Model atoms covered by a level of a tagged presheaf.
Subset level_atoms(const Presheaf& f, int level) {
  Subset out;
  f.levels[level].for_each([&](int pt) { out = out.with(f.tag->point_atom[pt]); });
  return out;
}

// Section of L(N) at `level` whose class contains element e of N.
int class_section(const Presheaf& ln, const BVModel& n, int level, int e) {
  const Subset need = level_atoms(ln, level);
  const int pt = ln.levels[level].first();
  for (int s = 0; s < static_cast<int>(ln.sections[level].size()); ++s)
    if (need.subset_of(n.eq_bits(ln.tag->rep[level][s][pt], e))) return s;
  throw PreconditionError("element " + n.domain[e] + " has no class at level " + ln.level_key(level));
}

void require_discrete_full(const Presheaf& f) {
  if (!f.space.is_discrete()) throw PreconditionError("presheaf base is not discrete");
  const auto all = sheaf::open_levels(f.space);
  std::set<Subset> a(all.begin(), all.end()), b(f.levels.begin(), f.levels.end());
  if (a != b) throw PreconditionError("presheaf is not indexed by all nonempty clopen sets");
}

}  // namespace

Presheaf L(const BVModel& m) {
  const balg::StoneSpace st = balg::stone_space(m.algebra);
  const auto levels = sheaf::open_levels(st.space);
  std::vector<bvm::QuotientModel> q;
  std::vector<std::vector<std::string>> secs;
  for (Subset b : levels) {
    q.push_back(bvm::quotient_model(m, Filter(m.algebra.elem(b))));
    secs.emplace_back();
    for (int r : q.back().reps) secs.back().push_back(m.domain[r]);
  }
  Presheaf f = sheaf::make_presheaf(st.space, levels, secs,
                                    [&](int p, int l, int s) { return q[l].class_of[q[p].reps[s]]; });
  sheaf::StructureTag tag{std::make_shared<const BVModel>(m), iota(m.algebra.atom_count()), {}};
  for (std::size_t l = 0; l < levels.size(); ++l) {
    tag.rep.emplace_back();
    for (int r : q[l].reps) {
      std::vector<int> row(st.space.size(), -1);
      levels[l].for_each([&](int pt) { row[pt] = r; });
      tag.rep.back().push_back(row);
    }
  }
  f.tag = std::move(tag);
  return f;
}

BVModel R(const Presheaf& f) {
  require_discrete_full(f);
  const int top = top_level(f);
  const auto sep = sheaf::is_separated(f);
  if (!sep.pass) {
    std::string where = sep.witness ? " at level " + f.level_key(sep.witness->level) : "";
    throw PreconditionError("presheaf is not separated" + where);
  }
  const topo::ROAlgebra ro = topo::ro_algebra(f.space);
  logic::Signature sig;
  if (f.tag) sig = f.tag->model->sig;
  BVModel out = BVModel::blank(ro.algebra, sig, f.sections[top]);
  const int n = out.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Subset agree;
      for (int b = 0; b < f.level_count(); ++b)
        if (f.restrict(top, b, x) == f.restrict(top, b, y)) agree |= f.levels[b];
      out.eq[x * n + y] = ro.from_set(f.space.regularize(agree));
    }
  if (!f.tag) return out;

  const BVModel& m = *f.tag->model;
  const auto& rep = f.tag->rep[top];
  const auto& pa = f.tag->point_atom;
  for (const auto& [r, k] : sig.relations) {
    auto& table = out.rel[r];
    for (std::size_t c = 0; c < table.size(); ++c) {
      const auto tu = bvm::tuple_at(c, k, n);
      Subset val;
      for (int pt = 0; pt < f.space.size(); ++pt) {
        std::vector<int> els;
        for (int x : tu) els.push_back(rep[x][pt]);
        if (m.rel_bits(r, els).contains(pa[pt])) val = val.with(pt);
      }
      table[c] = ro.from_set(val);
    }
  }
  for (const auto& [c, e] : m.constants) {
    int found = -1;
    for (int x = 0; x < n && found < 0; ++x) {
      bool ok = true;
      for (int pt = 0; pt < f.space.size() && ok; ++pt) ok = m.eq_bits(rep[x][pt], e).contains(pa[pt]);
      if (ok) found = x;
    }
    if (found < 0) throw PreconditionError("no global section interprets constant " + c);
    out.constants[c] = found;
  }
  return out;
}

PresheafMorphism L_of(const BVMorphism& h, const Presheaf& ls, const Presheaf& lt) {
  const topo::ROAlgebra r0 = topo::ro_algebra(ls.space), r1 = topo::ro_algebra(lt.space);
  PresheafMorphism out{ls, lt, BAHom(r0.algebra, r1.algebra, h.i.atom_map()), {}};
  for (int v = 0; v < lt.level_count(); ++v) {
    const int w = sheaf::pi_level(out, v);
    const int pt = ls.levels[w].first();
    std::vector<int> th;
    for (std::size_t s = 0; s < ls.sections[w].size(); ++s)
      th.push_back(class_section(lt, h.target, v, h.phi[ls.tag->rep[w][s][pt]]));
    out.theta.push_back(th);
  }
  return out;
}

BVMorphism R_of(const PresheafMorphism& m) {
  const BVModel r0 = R(m.source), r1 = R(m.target);
  const int t0 = top_level(m.source), t1 = top_level(m.target);
  const int w = sheaf::pi_level(m, t1);
  std::vector<int> phi;
  for (int x = 0; x < r0.size(); ++x) phi.push_back(m.theta[t1][m.source.restrict(t0, w, x)]);
  return BVMorphism{r0, r1, BAHom(r0.algebra, r1.algebra, m.i.atom_map()), phi};
}

BVMorphism unit(const BVModel& m, const Presheaf& lm, const BVModel& rlm) {
  if (rlm.algebra.atom_count() != m.algebra.atom_count()) throw PreconditionError("unit: algebras differ in size");
  const int top = top_level(lm);
  std::vector<int> phi;
  for (int t = 0; t < m.size(); ++t) phi.push_back(class_section(lm, m, top, t));
  return BVMorphism{m, rlm, BAHom(m.algebra, rlm.algebra, iota(m.algebra.atom_count())), phi};
}

PresheafMorphism counit(const Presheaf& f, const BVModel& rf, const Presheaf& lrf) {
  const topo::ROAlgebra r0 = topo::ro_algebra(lrf.space), r1 = topo::ro_algebra(f.space);
  if (r0.algebra.atom_count() != r1.algebra.atom_count()) throw PreconditionError("counit: bases differ in size");
  (void)rf;
  const int top = top_level(f);
  PresheafMorphism out{lrf, f, BAHom(r0.algebra, r1.algebra, iota(r1.algebra.atom_count())), {}};
  for (int v = 0; v < f.level_count(); ++v) {
    const int w = sheaf::pi_level(out, v);
    const int pt = lrf.levels[w].first();
    std::vector<int> th;
    for (std::size_t s = 0; s < lrf.sections[w].size(); ++s) th.push_back(f.restrict(top, v, lrf.tag->rep[w][s][pt]));
    out.theta.push_back(th);
  }
  return out;
}

AdjunctionWitness adjunction_witness(const BVModel& m, const Presheaf& f) {
  const Presheaf lm = L(m);
  const BVModel rlm = R(lm);
  const BVModel rf = R(f);
  const Presheaf lrf = L(rf);
  AdjunctionWitness w{unit(m, lm, rlm), counit(f, rf, lrf), {}, {}};

  const auto ur = bvm::check_morphism(w.unit);
  w.unit_morphism = ur.morphism;
  w.unit_iso = ur.isomorphism;
  w.counit_natural = sheaf::check_presheaf_morphism(w.counit).pass;
  w.counit_iso = true;
  for (int v = 0; v < f.level_count() && w.counit_iso; ++v) {
    auto th = w.counit.theta[v];
    std::sort(th.begin(), th.end());
    w.counit_iso = th.size() == f.sections[v].size() && std::adjacent_find(th.begin(), th.end()) == th.end();
  }

  // Id_{R(F)} = R(ε_F) ∘ η_{R(F)}
  {
    const BVMorphism eta = unit(rf, lrf, R(lrf));
    const BVMorphism comp = bvm::compose(R_of(w.counit), eta);
    if (comp.phi != iota(rf.size())) {
      w.triangle_r.pass = false;
      for (int x = 0; x < rf.size(); ++x)
        if (comp.phi[x] != x) {
          w.triangle_r.detail = "element " + rf.domain[x] + " goes to " + rf.domain[comp.phi[x]];
          break;
        }
    } else if (comp.i.atom_map() != iota(rf.algebra.atom_count())) {
      w.triangle_r.pass = false;
      w.triangle_r.detail = "algebra component is not the identity";
    }
  }
  // Id_{L(M)} = ε_{L(M)} ∘ L(η_M)
  {
    const Presheaf lrlm = L(rlm);
    const PresheafMorphism leta = L_of(w.unit, lm, lrlm);
    const PresheafMorphism comp = sheaf::compose(counit(lm, rlm, lrlm), leta);
    for (int v = 0; v < lm.level_count() && w.triangle_l.pass; ++v)
      if (comp.theta[v] != iota(static_cast<int>(lm.sections[v].size()))) {
        w.triangle_l.pass = false;
        w.triangle_l.detail = "component at level " + lm.level_key(v) + " is not the identity";
      }
    if (w.triangle_l.pass && comp.i.atom_map() != iota(lm.space.size())) {
      w.triangle_l.pass = false;
      w.triangle_l.detail = "algebra component is not the identity";
    }
  }
  return w;
}

bool stalks_match_quotients(const BVModel& m, const Presheaf& lm, std::string* failure) {
  const EtaleSpace e = sheaf::lambda0(lm);
  for (int pt = 0; pt < lm.space.size(); ++pt) {
    const int a = lm.tag->point_atom[pt];
    const auto tq = bvm::tarski_quotient(m, Filter(m.algebra.atom(a)));
    std::vector<int> hit(tq.reps.size(), 0);
    int germs = 0;
    e.stalk(pt).for_each([&](int g) {
      ++germs;
      const auto [u, s] = e.germ_rep[g];
      ++hit[tq.class_of[lm.tag->rep[u][s][pt]]];
    });
    const bool ok = germs == static_cast<int>(tq.reps.size()) &&
                    std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; });
    if (!ok) {
      if (failure) *failure = "stalk at " + lm.space.point(pt) + " has " + std::to_string(germs) + " germs, quotient has " +
                              std::to_string(tq.reps.size()) + " classes";
      return false;
    }
  }
  return true;
}

MixingSheafReport mixing_iff_sheaf(const BVModel& m, int max_antichain) {
  MixingSheafReport rep;
  rep.mixing = bvm::has_mixing(m, max_antichain);
  const Presheaf lm = L(m);
  rep.sheaf = sheaf::is_topological_sheaf(lm);

  const EtaleSpace e = sheaf::lambda0(lm);
  const int top = top_level(lm);
  std::set<std::vector<int>> induced;
  for (int s = 0; s < static_cast<int>(lm.sections[top].size()); ++s) {
    std::vector<int> germs;
    for (int pt = 0; pt < lm.space.size(); ++pt) germs.push_back(e.germ_lookup[pt].at({top, s}));
    induced.insert(germs);
  }
  const auto all = sheaf::gamma0(e, lm.space.full());
  rep.global_sections = all.size();
  for (const auto& s : all)
    if (!induced.count(s)) {
      rep.sections_induced = false;
      rep.stray_section = s;
      for (int pt = 0; pt < lm.space.size(); ++pt)
        rep.stray_text += (pt ? ", " : "") + lm.space.point(pt) + "↦[" + e.germ_value[s[pt]] + "]";
      break;
    }
  return rep;
}

Mixification mixify(const BVModel& m) {
  const Presheaf lm = L(m);
  const EtaleSpace e = sheaf::lambda1(lm);
  if (!e.is_ed_bundle()) throw PreconditionError("bundle of the model presheaf is not extremally disconnected");
  Presheaf s = sheaf::gamma_half(e);
  BVModel n = R(s);
  if (n.algebra.atom_count() != m.algebra.atom_count()) throw Error("mixify: algebra size changed");

  const int lt = top_level(lm), st = top_level(s);
  const auto globals = sheaf::gamma1(e, e.base.full());
  std::map<std::vector<int>, int> index;
  for (std::size_t k = 0; k < globals.size(); ++k) index[globals[k]] = static_cast<int>(k);
  std::vector<int> phi;
  for (int t = 0; t < m.size(); ++t) {
    const int cls = class_section(lm, m, lt, t);
    std::vector<int> germs;
    for (int a = 0; a < e.base.size(); ++a) germs.push_back(e.germ_lookup[a].at({lt, cls}));
    phi.push_back(index.at(germs));
  }
  Mixification out{n, BVMorphism{m, n, BAHom(m.algebra, n.algebra, iota(m.algebra.atom_count())), phi}, s, true, {}};

  // Stalk-product oracle.
  std::vector<bvm::TarskiQuotient> tq;
  for (int a = 0; a < m.algebra.atom_count(); ++a) tq.push_back(bvm::tarski_quotient(m, Filter(m.algebra.atom(a))));
  std::size_t product = 1;
  for (const auto& q : tq) product *= q.reps.size();
  std::vector<std::vector<int>> coords;
  for (int f = 0; f < n.size(); ++f) {
    std::vector<int> c(tq.size());
    for (int pt = 0; pt < s.space.size(); ++pt) {
      const int a = s.tag->point_atom[pt];
      c[a] = tq[a].class_of[s.tag->rep[st][f][pt]];
    }
    coords.push_back(c);
  }
  std::set<std::vector<int>> distinct(coords.begin(), coords.end());
  if (static_cast<std::size_t>(n.size()) != product || distinct.size() != product) {
    out.product_oracle = false;
    out.oracle_failure = "domain has " + std::to_string(n.size()) + " elements (" + std::to_string(distinct.size()) +
                         " distinct), product of quotients has " + std::to_string(product);
    return out;
  }
  for (int f = 0; f < n.size() && out.product_oracle; ++f)
    for (int g = 0; g < n.size(); ++g) {
      Subset agree;
      for (std::size_t a = 0; a < tq.size(); ++a)
        if (coords[f][a] == coords[g][a]) agree = agree.with(static_cast<int>(a));
      if (n.eq_bits(f, g) != agree) {
        out.product_oracle = false;
        out.oracle_failure = "[" + n.domain[f] + "=" + n.domain[g] + "] differs from the agreement set";
        break;
      }
    }
  return out;
}

namespace {

void for_each_tuple(int arity, int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> t(arity, 0);
  while (true) {
    fn(t);
    int p = arity - 1;
    while (p >= 0 && ++t[p] == n) t[p--] = 0;
    if (p < 0) return;
  }
}

}  // namespace

PhiBundle phi_bundle(const BVModel& m, const logic::Formula& phi) {
  const auto vars = logic::free_vars_ordered(phi);
  if (vars.empty()) throw PreconditionError("formula has no free variable");
  logic::Formula closed = phi;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) closed = logic::exists(*it, closed);
  const balg::StoneSpace st = balg::stone_space(m.algebra);
  const int atoms = m.algebra.atom_count();
  const balg::Elem b = bvm::eval(m, closed);
  PhiBundle out{phi, vars, b, st.clopen(b), {}, {}, {}, {}, {}};

  std::vector<bvm::TarskiQuotient> tq;
  for (int a = 0; a < atoms; ++a) tq.push_back(bvm::tarski_quotient(m, Filter(m.algebra.atom(a))));
  for_each_tuple(static_cast<int>(vars.size()), m.size(), [&](const std::vector<int>& t) {
    bvm::Env env;
    for (std::size_t j = 0; j < vars.size(); ++j) env.emplace_back(vars[j], t[j]);
    out.tuples.push_back(t);
    out.values.push_back(bvm::eval_bits(m, phi, env));
  });

  EtaleSpace& e = out.space;
  e.base = st.space;
  e.germ_lookup.assign(atoms, {});
  std::map<std::pair<int, std::vector<int>>, int> germ_of;
  auto classes_at = [&](int a, const std::vector<int>& t) {
    std::vector<int> c;
    for (int x : t) c.push_back(tq[a].reps[tq[a].class_of[x]]);
    return c;
  };
  for (std::size_t k = 0; k < out.tuples.size(); ++k)
    out.values[k].for_each([&](int a) {
      out.a_phi = out.a_phi.with(a);
      auto c = classes_at(a, out.tuples[k]);
      if (germ_of.count({a, c})) return;
      const int g = e.size();
      germ_of[{a, c}] = g;
      std::string name = "⟨";
      for (std::size_t j = 0; j < c.size(); ++j) name += (j ? "," : "") + m.domain[c[j]];
      name += "⟩";
      e.germ_value.push_back(name);
      e.germs.push_back(name + "@" + st.space.point(a));
      e.proj.push_back(a);
      e.germ_rep.emplace_back(-1, static_cast<int>(k));
      out.germ_classes.push_back(c);
    });
  if (e.size() > kMaxPoints) throw PreconditionError("formula bundle has more than 64 germs");

  // Basis: for every tuple and every nonzero c ≤ ⟦φ(σ̄)⟧, the germs of σ̄ over N_c.
  std::set<Subset> seen;
  for (std::size_t k = 0; k < out.tuples.size(); ++k) {
    const auto pts = out.values[k].members();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pts.size()); ++mask) {
      Subset o;
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (mask >> j & 1) o = o.with(germ_of.at({pts[j], classes_at(pts[j], out.tuples[k])}));
      if (seen.insert(o).second) {
        e.basic_opens.push_back(o);
        e.provenance.emplace_back(-1, static_cast<int>(k));
      }
    }
  }
  return out;
}

ClauseValues evaluate_clauses(const BVModel& m, const PhiBundle& b, bool mixing) {
  ClauseValues c;
  const int atoms = m.algebra.atom_count();
  logic::Formula closed = b.formula;
  for (auto it = b.vars.rbegin(); it != b.vars.rend(); ++it) closed = logic::exists(*it, closed);

  // (1) Łoś for ∃x̄φ, decided in the Tarski quotients.
  c.full = true;
  for (int a = 0; a < atoms && c.full; ++a) {
    const auto tq = bvm::tarski_quotient(m, Filter(m.algebra.atom(a)));
    c.full = bvm::satisfies(tq.model, closed) == b.n_b.contains(a);
  }
  // (2)
  c.dense_equal = b.a_phi == b.n_b;
  // (3)
  c.closed = b.space.base.closure(b.a_phi) == b.a_phi;
  // (4)
  if (b.n_b.empty()) {
    c.global_section = true;
  } else {
    bool stalks = true;
    b.n_b.for_each([&](int x) { stalks = stalks && !b.space.stalk(x).empty(); });
    c.global_section = stalks && sheaf::gamma0_first(b.space, b.n_b).has_value();
  }
  // (5)
  if (mixing)
    c.product_section = std::any_of(b.values.begin(), b.values.end(), [&](Subset v) { return b.n_b.subset_of(v); });
  return c;
}

FullnessSectionsReport fullness_via_sections(const BVModel& m, int depth) {
  FullnessSectionsReport rep;
  rep.mixing = bvm::has_mixing(m).pass;
  for (const auto& f : bvm::check_formulas(m.sig, depth)) {
    if (logic::free_vars(f).empty()) continue;
    ++rep.formulas;
    const PhiBundle b = phi_bundle(m, f);
    const ClauseValues c = evaluate_clauses(m, b, rep.mixing);
    if (!c.agree() || !c.all_true()) {
      rep.pass = false;
      auto flag = [](bool v) { return v ? "1" : "0"; };
      rep.failure = logic::print(f) + ": clauses " + flag(c.full) + flag(c.dense_equal) + flag(c.closed) +
                    flag(c.global_section) + (c.product_section ? flag(*c.product_section) : "");
      return rep;
    }
  }
  return rep;
}

}  // namespace stonean::bridge
