// Command line front end. Exit codes: 0 all checks pass, 1 a check failed, 2 input error.
#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stonean/bridge.hpp"
#include "stonean/error.hpp"
#include "stonean/io.hpp"
#include "stonean/sample.hpp"

using namespace stonean;
using io::json;

namespace {

struct Options {
  bool as_json = false;
  int depth = 2;
  std::uint64_t seed = sample::kDefaultSeed;
  int max_antichain = 0;
  int count = 50;
  std::vector<std::string> workspace_files;
  std::string name, text, second;
};

struct Report {
  std::string command;
  bool pass = true;
  json data = json::object();
  std::vector<std::string> lines;

  void say(const std::string& s) { lines.push_back(s); }
};

std::string join(const std::vector<std::string>& xs, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string elem_text(const balg::BoolAlg& b, Subset s) { return b.format(s); }

std::vector<std::string> element_names(const bvm::BVModel& m, const std::vector<int>& xs) {
  std::vector<std::string> out;
  for (int x : xs) out.push_back(m.domain[x]);
  return out;
}

std::string mark(bool ok) { return ok ? "yes" : "NO"; }

// ---------------------------------------------------------------------------

Report cmd_validate(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const bvm::ValidationReport r = bvm::validate(m);
  Report rep{"validate", r.valid};
  json vs = json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"axiom", v.axiom}, {"relation", v.relation}, {"elements", element_names(m, v.elements)},
                  {"detail", v.detail}});
    rep.say("violation (" + v.axiom + (v.relation.empty() ? "" : " " + v.relation) + ") at " +
            join(element_names(m, v.elements)) + ": " + v.detail);
  }
  rep.data = {{"model", o.name}, {"valid", r.valid}, {"extensional", r.extensional}, {"violations", vs}};
  rep.say(o.name + ": " + (r.valid ? "valid" : "invalid") + (r.extensional ? ", extensional" : ", not extensional"));
  return rep;
}

Report cmd_eval(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const balg::Elem v = bvm::eval(m, logic::parse(m.sig, o.text));
  Report rep{"eval"};
  rep.data = {{"model", o.name}, {"formula", o.text}, {"value", io::to_json(v)}, {"text", v.str()}};
  rep.say(v.str());
  return rep;
}

Report cmd_quotient(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const balg::Elem g = m.algebra.parse(o.text);
  if (g.is_bottom()) throw InputError("the filter generator must be nonzero");
  const bvm::QuotientModel q = bvm::quotient_model(m, balg::Filter(g));
  Report rep{"quotient"};
  json classes = json::array();
  for (std::size_t c = 0; c < q.reps.size(); ++c) {
    std::vector<std::string> members;
    for (int s = 0; s < m.size(); ++s)
      if (q.class_of[s] == static_cast<int>(c)) members.push_back(m.domain[s]);
    classes.push_back(members);
    rep.say("[" + m.domain[q.reps[c]] + "] = {" + join(members) + "}");
  }
  rep.data = {{"model", o.name}, {"filter", balg::Filter(g).str()}, {"classes", classes}, {"quotient", io::to_json(q.model)}};
  rep.lines.insert(rep.lines.begin(), o.name + "/" + balg::Filter(g).str() + ": " + std::to_string(q.reps.size()) +
                                          " classes over " + join(q.algebra.algebra.labels(), ","));
  return rep;
}

json mixing_json(const bvm::BVModel& m, const bvm::MixingReport& r) {
  json ac = json::array();
  for (Subset s : r.antichain) ac.push_back(m.algebra.elem(s).atom_labels());
  return {{"pass", r.pass}, {"antichains_checked", r.antichains}, {"antichain", ac},
          {"assignment", element_names(m, r.assignment)}};
}

Report cmd_check_mixing(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const bvm::MixingReport r = bvm::has_mixing(m, o.max_antichain);
  Report rep{"check-mixing", r.pass};
  rep.data = mixing_json(m, r);
  rep.data["model"] = o.name;
  rep.say(o.name + ": " + std::to_string(r.antichains) + " antichains checked, mixing " + (r.pass ? "holds" : "fails"));
  if (!r.pass) {
    std::vector<std::string> parts;
    for (std::size_t k = 0; k < r.antichain.size(); ++k)
      parts.push_back(elem_text(m.algebra, r.antichain[k]) + " -> " + m.domain[r.assignment[k]]);
    std::vector<std::string> ac;
    for (Subset s : r.antichain) ac.push_back(elem_text(m.algebra, s));
    rep.say("witness antichain {" + join(ac, ",") + "}, no element mixes " + join(parts));
  }
  return rep;
}

Report cmd_check_full(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const bvm::FullnessReport r = bvm::is_full(m, o.depth);
  Report rep{"check-full", r.full()};
  json covers = json::array();
  for (const auto& c : r.covers)
    covers.push_back({{"formula", logic::print(c.formula)}, {"value", c.value.str()}, {"witnesses", element_names(m, c.witnesses)}});
  rep.data = {{"model", o.name}, {"depth", o.depth}, {"formulas", r.formulas}, {"instances", r.instances},
              {"los", r.los_pass}, {"witness_cover", r.cover_pass}, {"agree", r.agree}, {"covers", covers}};
  rep.say(o.name + " at depth " + std::to_string(o.depth) + ": " + std::to_string(r.instances) + " instances");
  rep.say("  Łoś procedure: " + mark(r.los_pass));
  rep.say("  witness covers: " + mark(r.cover_pass));
  rep.say("  procedures agree: " + mark(r.agree));
  if (r.los_failure) {
    const std::string atom = m.algebra.label(r.los_failure->second);
    rep.data["los_failure"] = {{"formula", r.los_failure->first}, {"ultrafilter", atom}};
    rep.say("  Łoś fails for " + r.los_failure->first + " at G_" + atom);
  }
  if (r.cover_failure) {
    rep.data["cover_failure"] = *r.cover_failure;
    rep.say("  " + *r.cover_failure);
  }
  for (const auto& c : r.covers)
    rep.say("  ⟦" + logic::print(c.formula) + "⟧ = " + c.value.str() + ", witnesses {" + join(element_names(m, c.witnesses)) + "}");
  return rep;
}

std::vector<std::string> describe_presheaf(const sheaf::Presheaf& f) {
  std::vector<std::string> out;
  for (int l = 0; l < f.level_count(); ++l) out.push_back("  F(" + f.level_key(l) + ") = {" + join(f.sections[l]) + "}");
  return out;
}

Report cmd_sheafify(const io::Workspace& ws, const Options& o) {
  const sheaf::Presheaf& f = ws.presheaf(o.name);
  const sheaf::Sheafification s = sheaf::sheafify(f);
  const sheaf::SheafReport st = sheaf::is_stonean_sheaf(s.sheaf);
  const bool natural = sheaf::check_presheaf_morphism(s.unit).pass;
  Report rep{"sheafify", st.pass && natural};
  rep.data = {{"presheaf", o.name}, {"sheaf", io::to_json(s.sheaf)}, {"stonean", st.pass}, {"unit_natural", natural},
              {"germs", s.bundle.germs}};
  rep.say(o.name + ": Γ¹Λ¹ over " + std::to_string(s.sheaf.space.size()) + " ultrafilters, " +
          std::to_string(s.bundle.size()) + " germs");
  for (auto& l : describe_presheaf(s.sheaf)) rep.say(l);
  rep.say("  stonean sheaf: " + mark(st.pass) + ", unit natural: " + mark(natural));
  return rep;
}

Report cmd_mixify(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const bridge::Mixification mx = bridge::mixify(m);
  const bool mixing = bvm::has_mixing(mx.model, o.max_antichain).pass;
  const bool embedding = bvm::check_morphism(mx.embedding).embedding;
  const bvm::ElementarityReport el = bvm::is_elementary(mx.embedding, o.depth);
  Report rep{"mixify", mixing && embedding && el.elementary && mx.product_oracle};
  rep.data = {{"model", o.name},    {"mixification", io::to_json(mx.model)},   {"embedding", element_names(mx.model, mx.embedding.phi)},
              {"mixing", mixing}, {"elementary", el.elementary},             {"product_oracle", mx.product_oracle}};
  rep.say(o.name + " -> " + std::to_string(mx.model.size()) + " elements: " + join(mx.model.domain));
  for (int s = 0; s < m.size(); ++s) rep.say("  " + m.domain[s] + " ↦ " + mx.model.domain[mx.embedding.phi[s]]);
  rep.say("  mixing: " + mark(mixing) + ", embedding: " + mark(embedding) + ", elementary to depth " +
          std::to_string(o.depth) + ": " + mark(el.elementary) + ", product oracle: " + mark(mx.product_oracle));
  if (el.failure) rep.say("  " + *el.failure);
  if (!mx.product_oracle) rep.say("  " + mx.oracle_failure);
  return rep;
}

Report duality_algebra(const std::string& name, const balg::BoolAlg& b) {
  const balg::StoneSpace st = balg::stone_space(b);
  const auto clop = topo::clopens(st.space);
  std::string failure;
  std::set<Subset> images;
  for (const balg::Elem& x : b.elements()) {
    images.insert(st.clopen(x));
    for (const balg::Elem& y : b.elements())
      if (failure.empty() && (st.clopen(x & y) != (st.clopen(x) & st.clopen(y)) || st.clopen(x | y) != (st.clopen(x) | st.clopen(y))))
        failure = "N_b does not preserve the operations at " + x.str() + ", " + y.str();
    if (failure.empty() && !(st.from_clopen(st.clopen(x)) == x)) failure = "b ↦ N_b not injective at " + x.str();
  }
  if (failure.empty() && images != std::set<Subset>(clop.begin(), clop.end())) failure = "N_b misses a clopen";
  const std::size_t ufs = balg::ultrafilters(b).size();
  if (failure.empty() && ufs != static_cast<std::size_t>(b.atom_count())) failure = "ultrafilter count differs from atom count";
  Report rep{"duality-check", failure.empty()};
  rep.data = {{"algebra", name}, {"ultrafilters", ufs}, {"clopens", clop.size()}, {"iso", failure.empty()}};
  rep.say(name + ": " + std::to_string(ufs) + " ultrafilters, " + std::to_string(clop.size()) + " clopens of St(B)");
  rep.say("  B ≅ CLOP(St(B)): " + mark(failure.empty()));
  if (!failure.empty()) {
    rep.data["failure"] = failure;
    rep.say("  " + failure);
  }
  return rep;
}

Report duality_topology(const std::string& name, const topo::FinTop& x) {
  const topo::ROAlgebra ro = topo::ro_algebra(x);
  const std::string law = topo::check_ro_laws(ro);
  const balg::StoneSpace st = balg::stone_space(ro.algebra);
  const bool ed = topo::is_extremally_disconnected(x);
  Report rep{"duality-check", law.empty()};
  std::vector<std::string> atoms;
  for (Subset a : ro.atom_sets) atoms.push_back(x.format(a));
  rep.data = {{"topology", name},      {"regular_opens", x.regular_opens().size()}, {"ro_atoms", atoms},
              {"stone_points", st.space.size()}, {"extremally_disconnected", ed}, {"ro_laws", law.empty()}};
  rep.say(name + ": RO(X) has " + std::to_string(x.regular_opens().size()) + " elements, atoms " + join(atoms));
  rep.say("  St(RO(X)) has " + std::to_string(st.space.size()) + " points; extremally disconnected: " + mark(ed));
  rep.say("  complete boolean algebra laws: " + (law.empty() ? std::string("yes") : "NO, " + law));
  if (!law.empty()) rep.data["failure"] = law;
  return rep;
}

Report duality_poset(const std::string& name, const topo::FinPoset& p) {
  const topo::Completion c = topo::boolean_completion(p);
  const bool ok = c.order_preserving() && c.incompatibility_preserving() && c.dense();
  Report rep{"duality-check", ok};
  std::vector<std::string> images;
  for (int q = 0; q < p.size(); ++q) images.push_back(p.element(q) + " ↦ " + c.e[q].str());
  rep.data = {{"poset", name}, {"completion_atoms", c.ro.algebra.atom_count()}, {"order_preserving", c.order_preserving()},
              {"incompatibility_preserving", c.incompatibility_preserving()}, {"dense", c.dense()}};
  rep.say(name + ": RO(P) has " + std::to_string(c.ro.algebra.atom_count()) + " atoms; " + join(images));
  rep.say("  order: " + mark(c.order_preserving()) + ", incompatibility: " + mark(c.incompatibility_preserving()) +
          ", dense: " + mark(c.dense()));
  return rep;
}

Report cmd_duality(const io::Workspace& ws, const Options& o) {
  switch (ws.kind(o.name)) {
    case io::Workspace::Kind::Algebra: return duality_algebra(o.name, ws.algebra(o.name));
    case io::Workspace::Kind::Topology: return duality_topology(o.name, ws.topology(o.name));
    case io::Workspace::Kind::Poset: return duality_poset(o.name, ws.poset(o.name));
    default: throw InputError(o.name + " is a " + io::kind_name(ws.kind(o.name)) + ", expected an algebra, topology or poset");
  }
}

Report cmd_adjunction(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const sheaf::Presheaf f = o.second.empty() ? bridge::L(m) : ws.presheaf(o.second);
  const bridge::AdjunctionWitness w = bridge::adjunction_witness(m, f);
  Report rep{"adjunction-check", w.pass()};
  const std::string fname = o.second.empty() ? "L(" + o.name + ")" : o.second;
  rep.data = {{"model", o.name}, {"presheaf", fname}, {"triangle_r", w.triangle_r.pass}, {"triangle_l", w.triangle_l.pass},
              {"unit_morphism", w.unit_morphism}, {"counit_natural", w.counit_natural}, {"unit_iso", w.unit_iso},
              {"counit_iso", w.counit_iso}};
  if (!w.triangle_r.pass) rep.data["triangle_r_failure"] = w.triangle_r.detail;
  if (!w.triangle_l.pass) rep.data["triangle_l_failure"] = w.triangle_l.detail;
  rep.say("M = " + o.name + ", F = " + fname);
  rep.say("  η_M a morphism: " + mark(w.unit_morphism) + ", iso: " + mark(w.unit_iso));
  rep.say("  ε_F natural: " + mark(w.counit_natural) + ", iso: " + mark(w.counit_iso));
  rep.say("  Rε ∘ ηR = id: " + mark(w.triangle_r.pass) + (w.triangle_r.pass ? "" : " (" + w.triangle_r.detail + ")"));
  rep.say("  εL ∘ Lη = id: " + mark(w.triangle_l.pass) + (w.triangle_l.pass ? "" : " (" + w.triangle_l.detail + ")"));
  return rep;
}

Report cmd_phi_bundle(const io::Workspace& ws, const Options& o) {
  const bvm::BVModel& m = ws.model(o.name);
  const bridge::PhiBundle b = bridge::phi_bundle(m, logic::parse(m.sig, o.text));
  const bool mixing = bvm::has_mixing(m, o.max_antichain).pass;
  const bridge::ClauseValues c = bridge::evaluate_clauses(m, b, mixing);
  Report rep{"phi-bundle", c.agree()};
  const auto points = [&](Subset s) {
    std::vector<std::string> out;
    s.for_each([&](int a) { out.push_back("G_" + m.algebra.label(a)); });
    return out;
  };
  json clauses{{"1", c.full}, {"2", c.dense_equal}, {"3", c.closed}, {"4", c.global_section}};
  if (c.product_section) clauses["5"] = *c.product_section;
  rep.data = {{"model", o.name}, {"formula", o.text}, {"vars", b.vars}, {"b_phi", b.b_phi.str()},
              {"N_b", points(b.n_b)}, {"A_phi", points(b.a_phi)}, {"germs", b.space.germs}, {"clauses", clauses}};
  rep.say("b_φ = " + b.b_phi.str() + ", N_b = {" + join(points(b.n_b)) + "}, A_φ = {" + join(points(b.a_phi)) + "}");
  rep.say("germs: " + join(b.space.germs));
  rep.say("clauses: (1) " + mark(c.full) + " (2) " + mark(c.dense_equal) + " (3) " + mark(c.closed) + " (4) " +
          mark(c.global_section) + (c.product_section ? " (5) " + mark(*c.product_section) : std::string(" (5) n/a")));
  rep.say(c.agree() ? "clauses agree" : "clauses DISAGREE");
  return rep;
}

Report cmd_random_suite(const io::Workspace&, const Options& o) {
  std::mt19937_64 rng(o.seed);
  Report rep{"random-suite"};
  int mixing = 0;
  json failures = json::array();
  for (int i = 0; i < o.count; ++i) {
    const bvm::BVModel m = sample::random_model(rng);
    std::vector<std::string> bad;
    if (!bvm::validate(m).valid) bad.push_back("validate");
    if (!bvm::is_full(m, o.depth).full()) bad.push_back("is_full");
    const bridge::MixingSheafReport ms = bridge::mixing_iff_sheaf(m, o.max_antichain);
    if (!ms.agree()) bad.push_back("mixing iff sheaf");
    if (!bridge::adjunction_witness(m, bridge::L(m)).pass()) bad.push_back("adjunction");
    if (!bridge::fullness_via_sections(m, o.depth).pass) bad.push_back("fullness via sections");
    mixing += ms.mixing.pass;
    if (!bad.empty()) {
      failures.push_back({{"index", i}, {"checks", bad}, {"model", io::to_json(m)}});
      rep.say("model " + std::to_string(i) + ": " + join(bad));
    }
  }
  rep.pass = failures.empty();
  rep.data = {{"seed", o.seed}, {"models", o.count}, {"depth", o.depth}, {"mixing", mixing}, {"failures", failures}};
  rep.lines.insert(rep.lines.begin(), std::to_string(o.count) + " models (seed " + std::to_string(o.seed) + "), " +
                                          std::to_string(mixing) + " mixing, " + std::to_string(failures.size()) + " failing");
  return rep;
}

Report cmd_list(const io::Workspace& ws, const Options&) {
  Report rep{"list"};
  for (const auto& [name, kind] : ws.entries()) {
    rep.data[name] = io::kind_name(kind);
    rep.say(std::string(io::kind_name(kind)) + "\t" + name);
  }
  return rep;
}

int emit(const Report& r, const Options& o) {
  if (o.as_json) {
    json out = r.data;
    out["command"] = r.command;
    out["pass"] = r.pass;
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& l : r.lines) std::cout << l << "\n";
  }
  return r.pass ? 0 : 1;
}

int input_error(const std::string& what, const Options& o) {
  if (o.as_json)
    std::cout << json{{"error", what}}.dump(2) << "\n";
  std::cerr << "error: " << what << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean-valued models, Stone duality and stonean sheaves on finite inputs"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.as_json, "Emit the report as JSON");
  app.add_option("--depth", o.depth, "Formula depth for the fullness checks")->check(CLI::Range(0, 4));
  app.add_option("--seed", o.seed, "Seed for random suites");
  app.add_option("--max-antichain", o.max_antichain, "Largest antichain to try (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_option("--workspace", o.workspace_files, "Extra registry files")->check(CLI::ExistingFile);

  using Handler = Report (*)(const io::Workspace&, const Options&);
  Handler handler = nullptr;
  const auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&handler, h] { handler = h; });
    return s;
  };
  sub("validate", "Check the equality and congruence axioms", cmd_validate)->add_option("model", o.name)->required();
  auto* ev = sub("eval", "Boolean value of a closed formula", cmd_eval);
  ev->add_option("model", o.name)->required();
  ev->add_option("formula", o.text)->required();
  auto* qu = sub("quotient", "Quotient by the filter generated by an element", cmd_quotient);
  qu->add_option("model", o.name)->required();
  qu->add_option("generator", o.text)->required();
  sub("check-mixing", "Search for an antichain that cannot be mixed", cmd_check_mixing)->add_option("model", o.name)->required();
  sub("check-full", "Łoś and witness-cover fullness procedures", cmd_check_full)->add_option("model", o.name)->required();
  sub("sheafify", "Γ¹Λ¹ of a presheaf", cmd_sheafify)->add_option("presheaf", o.name)->required();
  sub("mixify", "Mixification through the sheaf of L(M)", cmd_mixify)->add_option("model", o.name)->required();
  sub("duality-check", "Stone duality for an algebra, RO(X) for a topology, completion for a poset", cmd_duality)
      ->add_option("name", o.name)
      ->required();
  auto* ad = sub("adjunction-check", "Unit, counit and triangle identities of L ⊣ R", cmd_adjunction);
  ad->add_option("model", o.name)->required();
  ad->add_option("presheaf", o.second, "Separated presheaf on a discrete base (default L(model))");
  auto* pb = sub("phi-bundle", "The bundle of a formula with free variables", cmd_phi_bundle);
  pb->add_option("model", o.name)->required();
  pb->add_option("formula", o.text)->required();
  sub("random-suite", "Run the model checks on random models", cmd_random_suite)
      ->add_option("--count", o.count, "Number of models")
      ->check(CLI::PositiveNumber);
  sub("list", "List the workspace", cmd_list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    io::Workspace ws = io::Workspace::builtin();
    for (const auto& path : o.workspace_files) ws.load_file(path);
    return emit(handler(ws, o), o);
  } catch (const InputError& e) {
    return input_error(e.what(), o);
  } catch (const PreconditionError& e) {
    return input_error(e.what(), o);
  } catch (const AlgebraMismatch& e) {
    return input_error(e.what(), o);
  }
}
