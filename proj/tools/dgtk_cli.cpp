// Batch driver: parse presentations, dispatch computations, emit artifacts.
//
// Exit codes: 0 = all requested checks pass; 1 = a mathematical check failed
// (the report is still written); 2 = parse/schema/usage errors (nothing is
// written).  Artifacts are JSON-first; --format text renders the same data.

#include <CLI11.hpp>
#include <iostream>

#include "dgtk/json_io.hpp"
#include "dgtk/presets.hpp"
#include "dgtk/tannaka.hpp"

using namespace dgtk;

namespace {

struct Opts {
  std::string input;
  int max_level = -1;
  std::vector<int> window;
  int depth = 2;
  bool normalised = false;
  std::string field;
  std::string format = "json";
  std::string out;
};

[[noreturn]] void usage_error(const std::string& what) { throw CLI::ValidationError(what); }

FieldSpec parse_field_flag(const std::string& s) {
  if (s == "Q") return FieldSpec::rationals();
  if (s.rfind("Fp:", 0) == 0) return FieldSpec::prime(std::stoul(s.substr(3)));
  usage_error("--field must be Q or Fp:<p>");
}

// Re-normalize every scalar of a parsed file into the requested field.
SparseMatrix retarget(const SparseMatrix& m, FieldSpec F) {
  SparseMatrix nm(F, m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r)
    for (auto& [cc, v] : m.entries[r]) nm.set(r, cc, v);
  return nm;
}

Complex retarget(const Complex& c, FieldSpec F) {
  Complex out(F);
  out.basis = c.basis;
  for (auto& [n, m] : c.d) {
    SparseMatrix nm = retarget(m, F);
    if (!nm.is_zero()) out.set_diff(n, std::move(nm));
  }
  return out;
}

void retarget(CategoryFile& cf, FieldSpec F) {
  cf.A.field = F;
  for (auto& [pr, c] : cf.A.hom) c = retarget(c, F);
  for (auto& [k, lc] : cf.A.comp)
    for (auto& [i, v] : lc) v = F.normalize(v);
  if (cf.omega) {
    for (auto& c : cf.omega->val) c = retarget(c, F);
    for (auto& [k, f] : cf.omega->act)
      for (auto& [n, m] : f.blocks) m = retarget(m, F);
  }
  if (cf.monoidal)
    for (auto& [k, lc] : cf.monoidal->mor)
      for (auto& [i, v] : lc) v = F.normalize(v);
  if (cf.monoidal_fibre)
    for (auto& [k, f] : cf.monoidal_fibre->iso)
      for (auto& [n, m] : f.blocks) m = retarget(m, F);
}

std::string render_text(const Json& j, int indent = 0) {
  std::string pad(indent, ' ');
  std::string out;
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if (v.is_object() || v.is_array()) {
        out += pad + k + ":\n" + render_text(v, indent + 2);
      } else {
        out += pad + k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) {
      if (v.is_object() || v.is_array())
        out += pad + "-\n" + render_text(v, indent + 2);
      else
        out += pad + "- " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
    if (j.empty()) out += pad + "(none)\n";
  } else {
    out += pad + j.dump() + "\n";
  }
  return out;
}

Json dims_json(const std::map<int, int>& dims) {
  Json out;
  for (auto& [n, d] : dims) out[std::to_string(n)] = d;
  return out;
}

Json complex_dims(const Complex& c) {
  Json out;
  for (auto& [n, labels] : c.basis) out[std::to_string(n)] = (int)labels.size();
  return out;
}

Preset preset_from(const CategoryFile& cf) {
  if (!cf.omega) usage_error("this command needs a fibre block in the input file");
  Preset p;
  p.A = cf.A;
  p.omega = *cf.omega;
  p.monoidal = cf.monoidal;
  p.monoidal_fibre = cf.monoidal_fibre;
  return p;
}

struct Job {
  std::string command;
  Opts o;
  Json inputs_hashes;
  Json payload;
  bool ok = true;
};

void require_window(const Opts& o) {
  if (o.window.size() != 2) usage_error("this command needs --window <lo> <hi>");
  if (o.window[0] > o.window[1]) usage_error("window lo must be <= hi");
}

void require_level(const Opts& o) {
  if (o.max_level < 0) usage_error("this command needs --max-level <L> with L >= 0");
}

void run_job(Job& job, const Json& in) {
  const Opts& o = job.o;
  std::string schema = in.value("schema", in.contains("degrees") ? "complex" : "");

  auto load_category = [&]() {
    CategoryFile cf = category_from_json(in);
    if (!o.field.empty()) retarget(cf, parse_field_flag(o.field));
    return cf;
  };

  if (job.command == "validate") {
    std::vector<std::string> failures;
    if (schema == "dgcat.json") {
      CategoryFile cf = load_category();
      auto push = [&](std::vector<std::string> r) {
        failures.insert(failures.end(), r.begin(), r.end());
      };
      push(validate_category(cf.A));
      if (cf.omega) push(validate_functor(cf.A, *cf.omega));
      if (cf.monoidal) push(validate_monoidal(cf.A, *cf.monoidal));
      if (cf.monoidal && cf.monoidal_fibre && cf.omega)
        push(validate_monoidal_fibre(cf.A, *cf.omega, *cf.monoidal, *cf.monoidal_fibre));
      if (cf.A.nilpotence) push(validate_nilpotence(cf.A));
    } else if (schema == "algebra.json") {
      failures = validate_positive_algebra(algebra_from_json(in));
    } else if (schema == "coalgebra.json") {
      failures = check_conilpotent_coalgebra(conilpotent_from_json(in));
    } else if (schema == "complex") {
      failures = check_complex(complex_from_json(in));
    } else {
      throw std::runtime_error("schema: unknown schema '" + schema + "'");
    }
    job.payload["failures"] = failures;
    job.ok = failures.empty();
    return;
  }

  if (job.command == "cohomology") {
    require_window(o);
    Complex c = complex_from_json(in);
    CohomologyResult h = cohomology(c, o.window[0], o.window[1]);
    job.payload["dims"] = dims_json(h.dims);
    return;
  }

  if (job.command == "hochschild") {
    require_level(o);
    CategoryFile cf = load_category();
    Preset p = preset_from(cf);
    Bimodule F =
        product_bimodule(p.A, module_omega(p.A, p.omega), module_omega_dual(p.A, p.omega));
    SimplicialLevels lv = hochschild_levels(p.A, F, o.max_level);
    if (o.normalised) lv = normalize(lv);
    auto [tot, window] = hochschild_total(lv);
    job.payload["total"] = complex_to_json(tot);
    job.payload["trusted_window"] = window.describe();
    return;
  }

  if (job.command == "tannaka-dual") {
    require_level(o);
    CategoryFile cf = load_category();
    Preset p = preset_from(cf);
    TannakianDualResult td = tannakian_dual(p.A, p.omega, o.max_level, o.normalised);
    std::vector<std::string> failures = check_coalgebra(td.C);
    job.payload["coalgebra"] = dg_coalgebra_to_json(td.C);
    job.payload["trusted_window"] = td.window.describe();
    job.payload["failures"] = failures;
    job.ok = failures.empty();
    return;
  }

  if (job.command == "universal-coalgebra") {
    require_level(o);
    CategoryFile cf = load_category();
    UniversalCoalgebra D = universal_coalgebra(cf.A, o.max_level, false);
    std::vector<std::string> failures = D.contraction_report();
    Json pairs;
    for (int W = 0; W < (int)cf.A.objects.size(); ++W)
      for (int V = 0; V < (int)cf.A.objects.size(); ++V) {
        auto [tot, window] = hochschild_total(D.at(W, V));
        Json row;
        row["dims"] = complex_dims(tot);
        row["trusted_window"] = window.describe();
        pairs[cf.A.objects[W] + ">" + cf.A.objects[V]] = std::move(row);
      }
    job.payload["pairs"] = std::move(pairs);
    job.payload["contraction_failures"] = failures;
    job.ok = failures.empty();
    return;
  }

  if (job.command == "tilting") {
    require_level(o);
    CategoryFile cf = load_category();
    Preset p = preset_from(cf);
    TiltingModule T = tilting_module(p.A, p.omega, o.max_level, o.normalised);
    Json per;
    bool ok = true;
    for (auto& [W, cert] : T.certs) {
      Json row;
      row["P_dims"] = complex_dims(T.P.at(W).underlying);
      row["cert"] = certificate_to_json(cert);
      std::vector<std::string> failures = check_comodule(T.P.at(W));
      row["comodule_failures"] = failures;
      ok = ok && cert.all_true() && failures.empty();
      per[p.A.objects[W]] = std::move(row);
    }
    job.payload["objects"] = std::move(per);
    job.ok = ok;
    return;
  }

  if (job.command == "counit-check") {
    require_level(o);
    require_window(o);
    CategoryFile cf = load_category();
    Preset p = preset_from(cf);
    TiltingModule T = tilting_module(p.A, p.omega, o.max_level, true);
    Comodule k = trivial_comodule(*T.C, {0, 0}, true);
    QuasiIsoCertificate c1 = counit_check(p.A, T, k, o.window[0], o.window[1], o.depth);
    Comodule cc = coalgebra_as_comodule(*T.C, true);
    QuasiIsoCertificate c2 = counit_check(p.A, T, cc, o.window[0], o.window[1], o.depth);
    job.payload["trivial"] = certificate_to_json(c1);
    job.payload["coalgebra"] = certificate_to_json(c2);
    job.ok = c1.all_true() && c2.all_true();
    return;
  }

  if (job.command == "bar") {
    require_level(o);
    PositiveDgAlgebraOverS A = algebra_from_json(in);
    std::vector<std::string> failures = validate_positive_algebra(A);
    BarResult bar = bar_beta(A, o.max_level);
    for (auto& l : check_conilpotent_coalgebra(bar.B)) failures.push_back(l);
    for (auto& l : tangent_check(bar, A)) failures.push_back(l);
    job.payload["coalgebra"] = conilpotent_to_json(bar.B);
    job.payload["failures"] = failures;
    job.ok = failures.empty();
    return;
  }

  if (job.command == "cobar") {
    require_level(o);
    ConilpotentDgCoalgebra C = conilpotent_from_json(in);
    std::vector<std::string> failures = check_conilpotent_coalgebra(C);
    CobarAlgebraResult cb = cobar_beta_star(C, o.max_level);
    for (auto& l : validate_positive_algebra(cb.A)) failures.push_back(l);
    job.payload["algebra"] = algebra_to_json(cb.A);
    job.payload["failures"] = failures;
    job.ok = failures.empty();
    return;
  }

  if (job.command == "koszul-check") {
    require_level(o);
    require_window(o);
    QuasiIsoCertificate cert;
    if (schema == "coalgebra.json") {
      cert = unit_check(conilpotent_from_json(in), o.max_level, o.window[0], o.window[1]);
      job.payload["direction"] = "unit: C -> beta beta*(C)";
    } else if (schema == "algebra.json") {
      cert = counit_check(algebra_from_json(in), o.max_level, o.window[0], o.window[1]);
      job.payload["direction"] = "counit: beta* beta(A) -> A";
    } else {
      throw std::runtime_error("schema: koszul-check takes an algebra or coalgebra file");
    }
    job.payload["cert"] = certificate_to_json(cert);
    job.ok = cert.all_true();
    return;
  }

  if (job.command == "bialgebra") {
    require_level(o);
    CategoryFile cf = load_category();
    Preset p = preset_from(cf);
    if (!p.monoidal) usage_error("bialgebra needs a monoidal block");
    MonoidalAssemblyResult r = monoidal_assembly(p, o.max_level, o.normalised);
    std::vector<std::string> failures = check_coalgebra(r.C);
    job.payload["coalgebra"] = dg_coalgebra_to_json(r.C);
    job.payload["structure_cert"] = certificate_to_json(r.structure_cert);
    job.payload["failures"] = failures;
    job.ok = failures.empty() && r.structure_cert.all_true();
    return;
  }

  if (job.command == "antipode-check") {
    require_level(o);
    CategoryFile cf = load_category();
    Preset p = preset_from(cf);
    if (!p.monoidal) usage_error("antipode-check needs a monoidal block");
    if (!cf.dual) usage_error("antipode-check needs a dual block");
    MonoidalAssemblyResult r = monoidal_assembly(p, o.max_level, o.normalised);
    auto rep = involution_and_antipode_check(r.levels, *cf.dual, r.C, o.normalised);
    std::vector<std::string> hard, chain;
    for (auto& l : rep)
      (l.rfind("chain-level:", 0) == 0 ? chain : hard).push_back(l);
    job.payload["h0_failures"] = hard;
    job.payload["chain_level"] = chain;
    job.ok = hard.empty();
    return;
  }

  throw std::runtime_error("unknown command " + job.command);
}

int dispatch(const std::string& command, const Opts& o) {
  Json in;
  Job job;
  job.command = command;
  job.o = o;
  try {
    std::string raw = read_file(o.input);
    in = Json::parse(raw, nullptr, true, false);
    job.inputs_hashes[o.input] = fnv1a64_hex(raw);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    run_job(job, in);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    // schema and parse problems: no artifact
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // mathematical preconditions (invalid_argument, logic_error)
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  Json artifact;
  artifact["signs"] = kSignConvention;
  artifact["command"] = job.command;
  artifact["inputs"] = job.inputs_hashes;
  Json params;
  if (o.max_level >= 0) params["max_level"] = o.max_level;
  if (o.window.size() == 2) params["window"] = o.window;
  if (job.command == "counit-check") params["depth"] = o.depth;
  params["normalised"] = o.normalised;
  artifact["params"] = std::move(params);
  artifact["ok"] = job.ok;
  for (auto& [k, v] : job.payload.items()) artifact[k] = v;

  std::string text =
      o.format == "text" ? render_text(artifact) : artifact.dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_file_atomic(o.out, text);
  return job.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Hochschild/Tannaka/Koszul toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {
      "validate",     "hochschild", "tannaka-dual",  "universal-coalgebra",
      "tilting",      "counit-check", "bar",         "cobar",
      "koszul-check", "bialgebra",  "antipode-check", "cohomology"};

  std::map<std::string, Opts> opts;
  for (auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    Opts& o = opts[name];
    sub->add_option("input", o.input, "input JSON file")->required();
    sub->add_option("--max-level", o.max_level, "tensor-length cutoff L");
    sub->add_option("--window", o.window, "degree window lo hi")->expected(2);
    sub->add_option("--depth", o.depth, "cobar coresolution depth");
    sub->add_flag("--normalised", o.normalised, "use normalised levels");
    sub->add_option("--field", o.field, "field override: Q or Fp:<p>");
    sub->add_option("--format", o.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", o.out, "artifact path (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& name : commands)
    if (app.got_subcommand(name)) return dispatch(name, opts[name]);
  return 2;
}
