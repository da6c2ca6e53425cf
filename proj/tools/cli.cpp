#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <memory>
#include <sstream>

#include "shapekit/cubical.hpp"
#include "shapekit/descent.hpp"
#include "shapekit/error.hpp"
#include "shapekit/format.hpp"
#include "shapekit/homology.hpp"
#include "shapekit/lifting.hpp"
#include "shapekit/nerve.hpp"
#include "shapekit/pi1.hpp"
#include "shapekit/probe.hpp"
#include "shapekit/random.hpp"
#include "shapekit/shape.hpp"
#include "shapekit/simplicial.hpp"

namespace shapekit::cli {

namespace {

struct Options {
  std::string in, out, presheaf, basepoint, category, which = "boundary", generators = "boundary";
  int dmax = 2, n = 2, m = 1, i = 1, xi = 0, rounds = 3, k = 2, level = -1, dim = 3, cells = 30;
  std::size_t budget = 1u << 24;
  std::uint64_t seed = 0;
  bool json = false, serial = false;
  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

// Ordered key/value lines; the same content renders as text or JSON.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, long value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }

  std::string text() const {
    std::string s;
    for (const auto& [k, v] : lines_) s += k + (v.empty() ? "" : " " + v) + "\n";
    return s;
  }
  std::string json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& [k, v] : lines_) j.push_back({{"key", k}, {"value", v}});
    return j.dump(2) + "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int k = 0; k < len; ++k) s << std::hex << std::setw(2) << std::setfill('0') << int{md[k]};
  return s.str();
}

struct InputError : Error {
  using Error::Error;
};

Document load(const std::string& path, Report& r) {
  if (path.empty()) throw SemanticError("missing --in");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SemanticError("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  r.add("input", path + " sha256 " + sha256(text));
  try {
    return parse_document(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const SemanticError& e) {
    throw SemanticError(path + ": " + e.what());
  }
}

std::string join(const std::vector<long>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

std::string images(const ComplexMap& f) {
  std::string s;
  for (Index c = 0; c < f.source->size(); ++c)
    s += (c ? " " : "") + f.source->cell(c).id + "=" + f.target->ref_string(f.images[c]);
  return s;
}

void add_homology(Report& r, const std::string& prefix, const HomologyReport& h) {
  for (std::size_t n = 0; n < h.groups.size(); ++n) r.add(prefix + "H" + std::to_string(n), to_string(h.groups[n]));
  r.add(prefix + "betti", join(h.betti()));
}

void add_probe(Report& r, const std::string& prefix, const ContractibilityReport& p) {
  r.add(prefix + "connected", p.connected);
  std::string v;
  for (bool b : p.reduced_homology_vanishes) v += (v.empty() ? "" : " ") + std::string(b ? "0" : "x");
  r.add(prefix + "reduced-homology", v);
  r.add(prefix + "pi1-abelianization-trivial", p.pi1_abelianization_trivial);
  r.add(prefix + "verdict", verdict(p));
}

// Any complex-like input as a complex: complexes directly, categories through
// their nerve, presheaves through the nerve of their elements.
ComplexPtr complex_input(const Document& d, int level, const Options& o, Report& r) {
  switch (d.kind) {
    case DocumentKind::simplicial:
    case DocumentKind::cubical:
      return d.complex();
    case DocumentKind::category:
      r.add("via", "nerve of the category, cells to dimension " + std::to_string(level));
      return std::make_shared<const Complex>(nerve(*d.category(), level, o.budget, o.exec()));
    case DocumentKind::presheaf:
      r.add("via", "nerve of the category of elements, cells to dimension " + std::to_string(level));
      return std::make_shared<const Complex>(elements_nerve(*d.presheaf, level, o.budget, o.exec()));
    default:
      throw SemanticError("expected a complex, category or presheaf document, got " + to_string(d.kind));
  }
}

Document expect(Document d, std::initializer_list<DocumentKind> kinds) {
  for (auto k : kinds)
    if (d.kind == k) return d;
  std::string want;
  for (auto k : kinds) want += (want.empty() ? "" : " or ") + to_string(k);
  throw SemanticError("expected a " + want + " document, got " + to_string(d.kind));
}

CategoryPtr category_input(const Options& o, Report& r, bool* operator_category_out = nullptr) {
  if (operator_category_out) *operator_category_out = false;
  if (!o.category.empty()) {
    r.add("category", o.category + (o.category == "terminal" ? "" : " " + std::to_string(o.n)));
    if (o.category == "terminal") return std::make_shared<const FiniteCategory>(terminal_category());
    if (o.n < 1) throw SemanticError("--n must be at least 1");
    if (operator_category_out) *operator_category_out = true;
    if (o.category == "simplex") return std::make_shared<const FiniteCategory>(simplex_category(o.n));
    if (o.category == "cube") return std::make_shared<const FiniteCategory>(cube_category(o.n));
    throw SemanticError("unknown category " + o.category + " (simplex, cube or terminal)");
  }
  return expect(load(o.in, r), {DocumentKind::category}).category();
}

void add_bound(Report& r, const Options& o, const std::string& what) {
  r.add("bound", what);
  r.add("budget", static_cast<long>(o.budget));
}

using Command = std::function<void(const Options&, Report&, std::string* produced)>;

void cmd_homology(const Options& o, Report& r, std::string*) {
  const Document d = load(o.in, r);
  const auto x = complex_input(d, o.dmax + 1, o, r);
  // Above the top cell homology vanishes; the degrees shown stop there.
  const int shown = x->truncation() ? o.dmax : std::min(o.dmax, std::max(x->dim(), 0));
  const auto h = homology(*x, shown, o.exec());
  r.add("counts", join(x->counts()));
  add_homology(r, "", h);
  if (shown < o.dmax) r.add("vanishes-above", static_cast<long>(shown));
  r.add("euler", euler_characteristic(h));
  add_bound(r, o, "degrees <= " + std::to_string(o.dmax));
}

void cmd_pi1(const Options& o, Report& r, std::string*) {
  const Document d = load(o.in, r);
  const auto x = complex_input(d, 2, o, r);
  if (x->shape() != Shape::simplicial) throw SemanticError("pi1 needs a simplicial input");
  if (x->count(0) == 0) throw SemanticError("pi1 of the empty complex");
  const std::string base = o.basepoint.empty() ? x->cell(x->first(0)).id : o.basepoint;
  const auto p = pi1_presentation(*x, base, o.budget);
  r.add("basepoint", p.basepoint);
  r.add("presentation", to_string(p));
  r.add("generators", static_cast<long>(p.generators.size()));
  r.add("relators", static_cast<long>(p.relators.size()));
  r.add("abelianization", to_string(abelianization(p)));
  r.add("tietze-moves", static_cast<long>(p.moves));
  r.add("tietze-budget-exhausted", p.budget_exhausted);
  r.add("bound", "presentation from the 2-skeleton; equality of groups is not decided");
}

void cmd_probe(const Options& o, Report& r, std::string*) {
  const Document d = load(o.in, r);
  const auto x = complex_input(d, o.dmax + 1, o, r);
  add_probe(r, "", contractibility_probe(*x, o.dmax));
  add_bound(r, o, "evidence in degrees <= " + std::to_string(o.dmax) + " only");
}

void cmd_shape(const Options& o, Report& r, std::string*) {
  const Document d = load(o.in, r);
  SetPresheaf x;
  if (d.kind == DocumentKind::presheaf) {
    x = *d.presheaf;
  } else if (d.kind == DocumentKind::simplicial || d.kind == DocumentKind::cubical) {
    const auto c = d.complex();
    const int level = o.level >= 0 ? o.level : std::max(c->dim(), 0) + o.dmax + 1;
    r.add("base", std::string(c->shape() == Shape::simplicial ? "simplex" : "cube") + " category truncated at " +
                      std::to_string(level));
    x = presheaf_of(*c, std::make_shared<const FiniteCategory>(operator_category(c->shape(), level)));
  } else {
    throw SemanticError("expected a presheaf or complex document, got " + to_string(d.kind));
  }
  const auto s = shape_invariants(x, o.dmax, o.budget, o.exec());
  r.add("element-objects", static_cast<long>(s.element_objects));
  r.add("element-morphisms", static_cast<long>(s.element_morphisms));
  r.add("nerve-counts", join(s.nerve_counts));
  add_homology(r, "", s.homology);
  r.add("pi1", to_string(s.pi1));
  r.add("pi1-abelianization", to_string(s.pi1_abelianization));
  add_probe(r, "", s.contractibility);
  add_bound(r, o, "invariants in degrees <= " + std::to_string(o.dmax));
}

void add_test_report(Report& r, const TestCategoryReport& t) {
  r.add("mode", std::string(t.interval_mode ? "interval" : "omega"));
  if (t.interval_mode) {
    r.add("interval-valid", t.interval_valid);
    r.add("separating", t.separating);
  }
  for (const auto& p : t.objects)
    r.add("object", p.label + " elements " + std::to_string(p.elements) + " " + verdict(p.probe));
  r.add("obstructed", t.obstructed);
  if (!t.witness.empty()) r.add("witness", t.witness);
}

void cmd_omega(const Options& o, Report& r, std::string*) {
  const auto a = category_input(o, r);
  add_test_report(r, test_category_probe(a, o.dmax, std::nullopt, o.budget, o.exec()));
  add_bound(r, o, "probes in degrees <= " + std::to_string(o.dmax) + "; not a proof");
}

void cmd_testcat(const Options& o, Report& r, std::string*) {
  bool operators = false;
  const auto a = category_input(o, r, &operators);
  std::optional<IntervalData> interval;
  if (operators) interval = standard_interval(a);
  add_test_report(r, test_category_probe(a, o.dmax, interval, o.budget, o.exec()));
  add_bound(r, o, "probes in degrees <= " + std::to_string(o.dmax) + "; not a proof");
}

void cmd_sifted(const Options& o, Report& r, std::string*) {
  const auto a = category_input(o, r);
  const auto s = sifted_probe(a, o.dmax, o.budget, o.exec());
  add_probe(r, "nerve-", s.nerve);
  for (const auto& p : s.pairs)
    r.add("pair", p.label + " elements " + std::to_string(p.elements) + " " + verdict(p.probe));
  r.add("obstructed", s.obstructed);
  if (!s.witness.empty()) r.add("witness", s.witness);
  add_bound(r, o, "probes in degrees <= " + std::to_string(o.dmax) + "; not a proof");
}

void cmd_compare(const Options& o, Report& r, std::string*) {
  const Document fd = expect(load(o.in, r), {DocumentKind::functor});
  const Document pd = expect(load(o.presheaf, r), {DocumentKind::presheaf});
  const FunctorData& u = *fd.functor;
  if (serialize(category_document(u.target)) != serialize(category_document(pd.presheaf->base)))
    throw SemanticError("the presheaf does not live on the functor's target category");
  SetPresheaf x = *pd.presheaf;
  x.base = u.target;
  const auto c = nerve_comparison(u, x, o.dmax, std::nullopt, o.budget, o.exec());
  add_homology(r, "source-", c.source.homology);
  add_homology(r, "target-", c.target.homology);
  r.add("source-pi1-abelianization", to_string(c.source.pi1_abelianization));
  r.add("target-pi1-abelianization", to_string(c.target.pi1_abelianization));
  r.add("equal", c.equal);
  r.add("certified", c.certified);
  if (!c.mismatch.empty()) r.add("mismatch", c.mismatch);
  add_bound(r, o, "homology and abelianized pi1 in degrees <= " + std::to_string(o.dmax));
}

void cmd_cech(const Options& o, Report& r, std::string* produced) {
  const Document d = expect(load(o.in, r), {DocumentKind::cover});
  const Cover& c = *d.cover;
  if (auto cell = uncovered_cell(c)) throw SemanticError("uncovered cell: " + *cell);
  const auto diag = std::make_shared<const Complex>(cech_diagonal(c, o.dmax + 1, o.budget));
  const auto hd = homology(*diag, o.dmax, o.exec());
  const auto hx = homology(*c.ambient, o.dmax, o.exec());
  r.add("members", static_cast<long>(c.names.size()));
  r.add("diagonal-counts", join(diag->counts()));
  add_homology(r, "diagonal-", hd);
  add_homology(r, "ambient-", hx);
  r.add("agree", hd == hx);
  add_bound(r, o, "degrees <= " + std::to_string(o.dmax));
  *produced = serialize(complex_document(diag, "cech"));
}

void cmd_bar(const Options& o, Report& r, std::string* produced) {
  const Document d = expect(load(o.in, r), {DocumentKind::diagram});
  const auto bar = std::make_shared<const Complex>(bar_diagonal(*d.diagram, o.dmax + 1, o.budget));
  const auto strict = colimit(*d.diagram, o.budget);
  const auto hb = homology(*bar, o.dmax, o.exec());
  const auto hs = homology(*strict.complex, std::min(o.dmax, std::max(strict.complex->dim(), 0)), o.exec());
  r.add("bar-counts", join(bar->counts()));
  add_homology(r, "bar-", hb);
  add_homology(r, "colimit-", hs);
  add_bound(r, o, "degrees <= " + std::to_string(o.dmax));
  *produced = serialize(complex_document(bar, "bar"));
}

void cmd_colimit(const Options& o, Report& r, std::string* produced) {
  const Document d = expect(load(o.in, r), {DocumentKind::diagram});
  const auto c = colimit(*d.diagram, o.budget);
  r.add("counts", join(c.complex->counts()));
  add_homology(r, "", homology(*c.complex, std::min(o.dmax, std::max(c.complex->dim(), 0)), o.exec()));
  add_bound(r, o, "strict colimit; homology in degrees <= " + std::to_string(o.dmax));
  *produced = serialize(complex_document(c.complex, "colimit"));
}

void cmd_vankampen(const Options& o, Report& r, std::string*) {
  const Document d = expect(load(o.in, r), {DocumentKind::cover});
  const auto v = van_kampen_check(*d.cover, o.dmax);
  add_homology(r, "ambient-", v.ambient);
  add_homology(r, "first-", v.first);
  add_homology(r, "second-", v.second);
  add_homology(r, "intersection-", v.intersection);
  r.add("into-sum-ranks", join(v.into_sum));
  r.add("out-of-sum-ranks", join(v.out_of_sum));
  r.add("mayer-vietoris", v.mayer_vietoris);
  if (!v.mayer_vietoris_failure.empty()) r.add("mayer-vietoris-failure", v.mayer_vietoris_failure);
  r.add("pi1-checked", v.pi1_checked);
  if (!v.note.empty()) r.add("note", v.note);
  if (v.pi1_checked) {
    r.add("basepoint", v.basepoint);
    std::string bp;
    for (const auto& b : v.component_basepoints) bp += (bp.empty() ? "" : " ") + b;
    r.add("intersection-basepoints", bp);
    r.add("amalgam", to_string(v.amalgam));
    r.add("amalgam-abelianization", to_string(v.amalgam_abelianization));
    r.add("direct-abelianization", to_string(v.direct_abelianization));
    r.add("pi1-agrees", v.pi1_agrees);
  }
  r.add("bound", "rational ranks in degrees <= " + std::to_string(o.dmax) + "; groups compared by abelianization");
}

void cmd_lift(const Options& o, Report& r, std::string* produced) {
  const Document d = expect(load(o.in, r), {DocumentKind::lifting_problem});
  const auto sq = d.square();
  const auto h = find_lift(sq, o.budget);
  r.add("lift", h.has_value());
  if (h) {
    r.add("images", images(*h));
    r.add("verified", is_lift(sq, *h));
    auto complexes = d.complexes;
    *produced = serialize(maps_document(complexes, {{"h", *h}}, "lift"));
  }
  add_bound(r, o, "exhaustive search within budget");
}

void cmd_boxslash(const Options& o, Report& r, std::string*) {
  const Document d = expect(load(o.in, r), {DocumentKind::maps, DocumentKind::lifting_problem});
  const auto v = boxslash(d.map("i"), d.map("p"), o.budget, o.exec());
  r.add("holds", v.holds);
  r.add("squares", static_cast<long>(v.squares));
  if (v.witness) {
    r.add("witness-f", images(v.witness->f));
    r.add("witness-g", images(v.witness->g));
  }
  add_bound(r, o, "every square enumerated; exact for these finite inputs");
}

std::vector<ComplexMap> generator_set(const Options& o, Report& r) {
  std::vector<ComplexMap> gens;
  const bool bnd = o.generators == "boundary" || o.generators == "both";
  const bool hrn = o.generators == "horn" || o.generators == "both";
  if (!bnd && !hrn) throw SemanticError("unknown generators " + o.generators + " (boundary, horn or both)");
  for (int k = 0; k <= o.k; ++k) {
    const auto full = std::make_shared<const Complex>(simplex(k));
    if (bnd) gens.push_back(inclusion(std::make_shared<const Complex>(boundary(k)), full));
    if (hrn)
      for (int j = 0; j <= k && k >= 1; ++j)
        gens.push_back(inclusion(std::make_shared<const Complex>(horn(k, j)), full));
  }
  r.add("generators", o.generators + " up to dimension " + std::to_string(o.k));
  return gens;
}

void cmd_factor(const Options& o, Report& r, std::string* produced) {
  const Document d = expect(load(o.in, r), {DocumentKind::maps});
  const auto& f = d.map("f");
  const auto gens = generator_set(o, r);
  const auto res = factor_bounded(f, gens, o.rounds, o.budget);
  r.add("rounds", static_cast<long>(res.rounds));
  r.add("attachments", static_cast<long>(res.history.size()));
  for (const auto& a : res.history) {
    std::string s = "round " + std::to_string(a.round) + " generator " + std::to_string(a.generator) + " prefix " +
                    a.prefix + " along";
    for (const auto& c : a.attaching) s += " " + c;
    r.add("attach", s);
  }
  r.add("middle-counts", join(res.middle->counts()));
  r.add("residual-squares", static_cast<long>(res.residual.size()));
  r.add("bound", "at most " + std::to_string(o.rounds) + " rounds; the factorization is not functorial");
  r.add("budget", static_cast<long>(o.budget));
  *produced = serialize(maps_document({{"X", f.source}, {"Z", res.middle}, {"Y", f.target}},
                                      {{"left", res.left}, {"right", res.right}}, "factorization"));
}

void cmd_retract(const Options& o, Report& r, std::string*) {
  const Document d = expect(load(o.in, r), {DocumentKind::maps});
  const auto found = retract_search(d.map("f"), d.map("g"), o.budget);
  r.add("retract", found.has_value());
  if (found) {
    r.add("s", images(found->s));
    r.add("r", images(found->r));
    r.add("t", images(found->t));
    r.add("q", images(found->q));
  }
  add_bound(r, o, "exhaustive search within budget");
}

void cmd_cube_verify(const Options& o, Report& r, std::string*) {
  PushoutCase which;
  if (o.which == "boundary")
    which = PushoutCase::boundary;
  else if (o.which == "horn-left")
    which = PushoutCase::horn_left;
  else if (o.which == "horn-right")
    which = PushoutCase::horn_right;
  else
    throw SemanticError("unknown case " + o.which + " (boundary, horn-left or horn-right)");
  const auto v = verify_pushout_product(o.m, o.n, which, o.i, o.xi, o.budget);
  r.add("case", o.which + " m " + std::to_string(o.m) + " n " + std::to_string(o.n) +
                    (which == PushoutCase::boundary ? "" : " i " + std::to_string(o.i) + " xi " + std::to_string(o.xi)));
  r.add("verdict", v.isomorphism);
  r.add("pushout-counts", join(v.counts));
  r.add("target-counts", join(v.target->counts()));
  if (!v.witness.empty()) r.add("witness", v.witness);
  add_bound(r, o, "degreewise bijection of finite sets; exact");
}

void cmd_triangulate(const Options& o, Report& r, std::string* produced) {
  const Document d = expect(load(o.in, r), {DocumentKind::cubical});
  const auto x = d.complex();
  const auto t = std::make_shared<const Complex>(triangulate(*x, o.dmax + 1, o.budget));
  r.add("counts", join(t->counts()));
  const auto ht = homology(*t, o.dmax, o.exec());
  const auto hx = homology(*x, x->truncation() ? o.dmax : std::min(o.dmax, std::max(x->dim(), 0)), o.exec());
  add_homology(r, "", ht);
  add_homology(r, "cubical-", hx);
  add_bound(r, o, "cells to dimension " + std::to_string(o.dmax + 1) + ", homology in degrees <= " +
                      std::to_string(o.dmax));
  *produced = serialize(complex_document(t, "triangulation"));
}

void cmd_random(const Options& o, Report& r, std::string* produced) {
  const auto x = std::make_shared<const Complex>(random_complex(o.seed, o.dim, static_cast<std::size_t>(o.cells)));
  r.add("seed", std::to_string(o.seed));
  r.add("counts", join(x->counts()));
  *produced = serialize(complex_document(x, "random" + std::to_string(o.seed)));
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite shapes, descent and lifting"};
  app.name("shapekit");
  app.require_subcommand(1);
  app.set_help_flag("-h,--help", "Print this help");

  struct Entry {
    std::string name, help;
    Command run;
  };
  const std::vector<Entry> table{
      {"homology", "integral homology of a complex, category nerve or presheaf", cmd_homology},
      {"pi1", "fundamental group presentation", cmd_pi1},
      {"probe", "bounded contractibility probe", cmd_probe},
      {"shape", "invariants of the nerve of the category of elements", cmd_shape},
      {"omega", "test-category probe against the subobject classifier", cmd_omega},
      {"testcat", "test-category probe (interval mode for operator categories)", cmd_testcat},
      {"sifted", "siftedness probe", cmd_sifted},
      {"compare", "compare shapes along a functor", cmd_compare},
      {"cech", "Cech diagonal of a cover against the covered complex", cmd_cech},
      {"bar", "bar construction of a diagram against its strict colimit", cmd_bar},
      {"colimit", "strict colimit of a diagram", cmd_colimit},
      {"vankampen", "Mayer-Vietoris and Van Kampen for a two-member cover", cmd_vankampen},
      {"lift", "solve a lifting problem", cmd_lift},
      {"boxslash", "lifting property of i against p", cmd_boxslash},
      {"factor", "bounded small object argument for f", cmd_factor},
      {"retract", "is f a retract of g", cmd_retract},
      {"cube-verify", "pushout-product of cubical boundaries and horns", cmd_cube_verify},
      {"triangulate", "triangulate a cubical set", cmd_triangulate},
      {"random", "seeded random simplicial set", cmd_random},
  };
  std::map<CLI::App*, const Entry*> by_app;
  for (const auto& e : table) {
    CLI::App* s = app.add_subcommand(e.name, e.help);
    s->add_option("--in", o.in, "input document");
    s->add_option("--out", o.out, "write the constructed object (or the report) here");
    s->add_option("--dmax", o.dmax, "top degree")->check(CLI::Range(0, 12));
    s->add_option("--budget", o.budget, "enumeration budget");
    s->add_option("--seed", o.seed, "random seed");
    s->add_flag("--json", o.json, "report as JSON");
    s->add_flag("--serial", o.serial, "use the serial reference kernels");
    if (e.name == "pi1") s->add_option("--basepoint", o.basepoint, "basepoint vertex id");
    if (e.name == "shape") s->add_option("--level", o.level, "truncation of the operator category");
    if (e.name == "omega" || e.name == "testcat" || e.name == "sifted") {
      s->add_option("--category", o.category, "builtin category: simplex, cube or terminal");
      s->add_option("--n", o.n, "truncation of a builtin category");
    }
    if (e.name == "compare") s->add_option("--presheaf", o.presheaf, "presheaf on the target category")->required();
    if (e.name == "factor") {
      s->add_option("--generators", o.generators, "boundary, horn or both");
      s->add_option("--k", o.k, "top generator dimension")->check(CLI::Range(0, 4));
      s->add_option("--rounds", o.rounds, "attachment rounds")->check(CLI::Range(0, 16));
    }
    if (e.name == "cube-verify") {
      s->add_option("--m", o.m, "dimension of the first cube")->check(CLI::Range(0, 6));
      s->add_option("--n", o.n, "dimension of the second cube")->check(CLI::Range(0, 6));
      s->add_option("--case", o.which, "boundary, horn-left or horn-right");
      s->add_option("--i", o.i, "horn direction");
      s->add_option("--xi", o.xi, "horn side")->check(CLI::Range(0, 1));
    }
    if (e.name == "random") {
      s->add_option("--dim", o.dim, "top dimension")->check(CLI::Range(1, 6));
      s->add_option("--cells", o.cells, "cell count bound")->check(CLI::Range(1, 2000));
    }
    by_app[s] = &e;
  }

  if (!args.empty() && args[0] != "-h" && args[0] != "--help" &&
      std::none_of(table.begin(), table.end(), [&](const Entry& e) { return e.name == args[0]; })) {
    err << "shapekit: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "shapekit: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  const Entry* entry = nullptr;
  for (auto* s : app.get_subcommands()) entry = by_app.at(s);
  Report r;
  std::string command = "shapekit";
  for (const auto& a : args) command += " " + a;
  r.add("command", command);
  std::string produced;
  try {
    entry->run(o, r, &produced);
  } catch (const InputError& e) {
    err << "shapekit: parse error: " << e.what() << "\n";
    return kRejected;
  } catch (const BudgetExceeded& e) {
    err << "shapekit: budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const SemanticError& e) {
    err << "shapekit: rejected: " << e.what() << "\n";
    return kRejected;
  }
  const std::string report = o.json ? r.json() : r.text();
  out << report;
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "shapekit: cannot write " << o.out << "\n";
      return kRejected;
    }
    f << (produced.empty() ? report : produced);
  }
  return kOk;
}

}  // namespace shapekit::cli
