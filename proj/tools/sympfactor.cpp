// Command-line surface over the factorization and vector-field library.
// Machine-readable JSON goes to stdout, human summaries to stderr.
// Exit codes: 0 success, 1 usage, 2 domain error, 3 tolerance failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sympfactor/acceptance.hpp"
#include "sympfactor/factorize.hpp"
#include "sympfactor/json_io.hpp"
#include "sympfactor/random.hpp"
#include "sympfactor/span.hpp"
#include "sympfactor/typetable.hpp"

using namespace sympfactor;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

cdouble parse_complex_arg(const std::string& text) {
  double re = 0, im = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf", &re, &im) < 1)
    throw DomainError("expected a complex number as 're,im'");
  return {re, im};
}

std::vector<std::uint32_t> tuple_from_json(VarPool& pool, const json& vars) {
  std::vector<std::uint32_t> x;
  for (const auto& v : vars) {
    if (!v.is_array() || v.size() != 3)
      throw DomainError("tuple entries must be [level, i, j] with 1-based indices");
    x.push_back(pool.z(v[0].get<int>(), v[1].get<int>() - 1, v[2].get<int>() - 1));
  }
  return x;
}

struct FieldSpec {
  std::string kind;  // "minor", "lift", "coordinate"
  int n = 0, K = 0;
  json x;
  int jstar = 1, i = 1, j = 1;
};

FieldSpec parse_field_spec(const json& j) {
  FieldSpec s;
  s.kind = j.at("field").get<std::string>();
  s.n = j.at("n").get<int>();
  s.K = j.at("K").get<int>();
  if (j.contains("x")) s.x = j["x"];
  s.jstar = j.value("jstar", 1);
  s.i = j.value("i", 1);
  s.j = j.value("j", 1);
  return s;
}

PolyVectorField build_field(VarPool& pool, const FieldSpec& s, PolyVec& preserved) {
  if (s.kind == "minor") {
    auto x = tuple_from_json(pool, s.x);
    preserved = phi_block(pool, s.n, s.K);
    return jacobian_minor_field(x, preserved);
  }
  if (s.kind == "lift") {
    auto x = tuple_from_json(pool, s.x);
    preserved = phi_components(pool, s.n, s.K);
    return lifted_minor_field(pool, s.n, s.K, x, s.jstar - 1);
  }
  if (s.kind == "coordinate") {
    preserved = phi_components(pool, s.n, s.K);
    return lifted_coordinate_field(pool, s.n, s.K, s.i - 1, s.j - 1, s.jstar - 1);
  }
  throw DomainError("field kind must be 'minor', 'lift' or 'coordinate'");
}

int run(int argc, char** argv) {
  CLI::App app{"factorization of symplectic matrices into elementary factors, "
               "with the symbolic fiber machinery"};
  app.set_config("--config", "", "read defaults from a TOML/INI file");

  Tolerances tol;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--tol-symp", tol.symplectic, "symplectic validation tolerance");
  app.add_option("--tol-factor", tol.factor, "factorization residual tolerance");
  app.add_option("--tol-rank", tol.rank, "relative numeric rank cutoff");
  app.add_option("--tol-solve", tol.solve, "symmetric solve residual tolerance");
  app.add_option("--seed", seed, "seed for randomized subcommands")
      ->each([&](const std::string&) { seed_given = true; });
  app.require_subcommand(1);

  // factor
  auto* factor_cmd = app.add_subcommand("factor", "decompose a symplectic matrix");
  std::string factor_input, emit_path;
  bool factor_compact = false, factor_exact = false;
  factor_cmd->add_option("matrix", factor_input, "matrix JSON file")->required();
  factor_cmd->add_flag("--compact", factor_compact, "merge adjacent same-side factors");
  factor_cmd->add_flag("--exact", factor_exact, "exact rational arithmetic");
  factor_cmd->add_option("--emit", emit_path, "also write the word to this file");

  // reconstruct
  auto* rec_cmd = app.add_subcommand("reconstruct", "multiply a word back out");
  std::string rec_input;
  bool rec_exact = false;
  rec_cmd->add_option("word", rec_input, "word JSON file")->required();
  rec_cmd->add_flag("--exact", rec_exact, "exact rational arithmetic");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "check the symplectic conditions");
  std::string val_input;
  val_cmd->add_option("matrix", val_input, "matrix JSON file")->required();

  // lift
  auto* lift_cmd = app.add_subcommand("lift", "section of the last-row map");
  std::string lift_target;
  int lift_K = 3;
  lift_cmd->add_option("--target", lift_target, "target JSON file {a, b}")->required();
  lift_cmd->add_option("--K", lift_K, "number of factors (>= 3)");

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "membership in the singular set");
  std::string cls_point;
  cls_cmd->add_option("--point", cls_point, "point JSON file")->required();

  // phi
  auto* phi_cmd = app.add_subcommand("phi", "evaluate the alternating product map");
  std::string phi_point;
  phi_cmd->add_option("--point", phi_point, "point JSON file")->required();

  // fields group
  auto* fields_cmd = app.add_subcommand("fields", "symbolic vector-field operations");
  fields_cmd->require_subcommand(1);

  auto* check_cmd = fields_cmd->add_subcommand("check-type", "run the completeness table");
  std::string check_type = "all";
  int check_n = 2, check_K = 3;
  check_cmd->add_option("--type", check_type, "1..8, 'all', or 'example'");
  check_cmd->add_option("--n", check_n, "dimension")->required();
  check_cmd->add_option("--K", check_K, "number of levels")->required();

  auto* lie_cmd = fields_cmd->add_subcommand("lie", "exact fiber-preservation check");
  std::string lie_spec;
  lie_cmd->add_option("--spec", lie_spec, "field spec JSON file")->required();

  auto* flow_cmd = fields_cmd->add_subcommand("flow", "closed-form affine flow");
  std::string flow_spec, flow_point, flow_time = "1,0";
  flow_cmd->add_option("--spec", flow_spec, "field spec JSON file")->required();
  flow_cmd->add_option("--point", flow_point, "point JSON file")->required();
  flow_cmd->add_option("--t", flow_time, "complex time 're,im'");

  auto span_adder = [&](CLI::App* parent) {
    auto* cmd = parent->add_subcommand("span", "fiber tangent span check");
    auto opts = std::make_shared<std::pair<std::string, std::string>>();
    cmd->add_option("--point", opts->first, "point JSON file")->required();
    cmd->add_option("--collection", opts->second, "builtin:k2 | builtin:k3 | builtin:k4")
        ->default_val("builtin:k3");
    return std::make_pair(cmd, opts);
  };
  auto [span_cmd, span_opts] = span_adder(fields_cmd);
  auto [span_alias, span_alias_opts] = span_adder(&app);

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints usage or help text
    return code == 0 ? 0 : 1;
  }

  if (!seed_given) {
    if (const char* env = std::getenv("SYMPFACTOR_SEED"))
      seed = std::strtoull(env, nullptr, 10);
  }

  if (factor_cmd->parsed()) {
    json input = load_json(factor_input);
    json out;
    if (factor_exact) {
      auto m = matrix_from_json<GaussianRational>(input);
      auto res = factorize(m, tol, factor_compact);
      out = json{{"n", res.word.n},
                 {"factor_count", res.factor_count},
                 {"bound", res.bound},
                 {"residual", res.residual},
                 {"relative_residual", res.relative_residual},
                 {"word", to_json(res.word)}};
    } else {
      auto m = matrix_from_json<cdouble>(input);
      auto res = factorize(m, tol, factor_compact);
      out = json{{"n", res.word.n},
                 {"factor_count", res.factor_count},
                 {"bound", res.bound},
                 {"residual", res.residual},
                 {"relative_residual", res.relative_residual},
                 {"word", to_json(res.word)}};
    }
    if (!emit_path.empty()) {
      std::ofstream f(emit_path);
      f << out["word"].dump(2) << "\n";
    }
    std::cerr << "factored into " << out["factor_count"] << " factors (bound "
              << out["bound"] << "), relative residual " << out["relative_residual"]
              << "\n";
    emit(out);
    return 0;
  }

  if (rec_cmd->parsed()) {
    json input = load_json(rec_input);
    if (rec_exact) {
      auto w = word_from_json<GaussianRational>(input);
      emit(json{{"n", w.n}, {"M", to_json(Mat<GaussianRational>(reconstruct(w)))}});
    } else {
      auto w = word_from_json<cdouble>(input);
      emit(json{{"n", w.n}, {"M", to_json(CMat(reconstruct(w)))}});
    }
    return 0;
  }

  if (val_cmd->parsed()) {
    auto m = matrix_from_json<cdouble>(load_json(val_input));
    auto res = symplectic_residuals(m);
    bool ok = true;
    std::string message;
    try {
      validate_symplectic(m, tol.symplectic);
    } catch (const NotSymplecticError& e) {
      ok = false;
      message = e.what();
    }
    emit(json{{"symplectic", ok},
              {"residual", res.form},
              {"block_residuals",
               json{{"AtC_CtA", res.block_ac},
                    {"BtD_DtB", res.block_bd},
                    {"AtD_CtB_I", res.block_unit}}}});
    if (!ok) {
      std::cerr << message << "\n";
      return 2;
    }
    return 0;
  }

  if (lift_cmd->parsed()) {
    auto y = target_from_json<cdouble>(load_json(lift_target));
    auto p = lift(y, lift_K, tol.zero);
    double residual = max_norm(CVec(phi(p) - y.stacked()));
    auto rep = classify(p, tol);
    emit(json{{"point", to_json(p)}, {"residual", residual}, {"in_WK", rep.in_wk}});
    if (residual > tol.solve) {
      std::cerr << "lift residual " << residual << " exceeds tolerance\n";
      return 3;
    }
    return 0;
  }

  if (cls_cmd->parsed()) {
    auto p = point_from_json<cdouble>(load_json(cls_point));
    auto rep = classify(p, tol);
    emit(json{{"in_WK", rep.in_wk},
              {"in_SK", rep.in_sk},
              {"jacobian_rank", rep.jacobian_rank},
              {"wk_matrix_rank", rep.wk_matrix_rank},
              {"tolerance", rep.tolerance}});
    return 0;
  }

  if (phi_cmd->parsed()) {
    auto p = point_from_json<cdouble>(load_json(phi_point));
    emit(json{{"value", to_json(CVec(phi(p)))}});
    return 0;
  }

  if (check_cmd->parsed()) {
    if (check_type == "example") {
      auto inst = make_incomplete_example(check_n);
      auto outcome = affine_flow_certificate(inst.x, inst.ambient, false);
      auto witness = quadratic_self_witness(inst.x, inst.ambient);
      emit(json{{"covered", outcome.covered()},
                {"witness_degree", witness ? witness->degree : 0}});
      return 0;
    }
    auto report = verify_type_table(check_n, check_K);
    json entries = json::array();
    for (const auto& e : report.entries) {
      if (check_type != "all" && e.label.rfind("type" + check_type, 0) != 0) continue;
      entries.push_back(json{{"tuple", e.label}, {"covered", e.covered}});
    }
    emit(json{{"checked", report.checked},
              {"failures", report.failures},
              {"entries", entries}});
    std::cerr << report.checked << " tuples checked, " << report.failures << " failures\n";
    return report.failures == 0 ? 0 : 3;
  }

  if (lie_cmd->parsed()) {
    VarPool pool;
    PolyVec preserved;
    FieldSpec spec = parse_field_spec(load_json(lie_spec));
    PolyVectorField field = build_field(pool, spec, preserved);
    bool preserved_ok = field.annihilates(preserved);
    emit(json{{"fiber_preserving", preserved_ok},
              {"components_checked", static_cast<int>(preserved.size())}});
    return preserved_ok ? 0 : 3;
  }

  if (flow_cmd->parsed()) {
    VarPool pool;
    PolyVec preserved;
    FieldSpec spec = parse_field_spec(load_json(flow_spec));
    auto p = point_from_json<cdouble>(load_json(flow_point));
    cdouble t = parse_complex_arg(flow_time);

    std::vector<cdouble> values;
    AffineFlowSystem sys;
    if (spec.kind == "minor") {
      auto x = tuple_from_json(pool, spec.x);
      PolyVec block = phi_block(pool, spec.n, spec.K);
      auto outcome = affine_flow_certificate(x, block);
      if (!outcome.covered())
        throw DomainError("field is not covered by the completeness criterion");
      values = coordinate_values(pool, p);
      sys = instantiate_affine(*outcome.certificate, values);
    } else {
      PolyVectorField field = build_field(pool, spec, preserved);
      values = coordinate_values(pool, p);
      sys = field_affine_system(field, values);
    }
    CVec start(static_cast<int>(sys.vars.size()));
    for (size_t r = 0; r < sys.vars.size(); ++r)
      start(static_cast<int>(r)) = values[sys.vars[r]];
    CVec moved = flow(sys, start, t);
    PhiPoint<cdouble> moved_point = p;
    for (size_t r = 0; r < sys.vars.size(); ++r) {
      auto [k, i, j] = pool.coordinate(sys.vars[r]);
      moved_point.zs[k - 1].set(i, j, moved(static_cast<int>(r)));
    }
    emit(json{{"point", to_json(moved_point)}});
    return 0;
  }

  auto run_span = [&](const std::string& point_path, const std::string& collection) {
    auto p = point_from_json<cdouble>(load_json(point_path));
    int K = 0;
    if (collection == "builtin:k2") K = 2;
    if (collection == "builtin:k3") K = 3;
    if (collection == "builtin:k4") K = 4;
    if (K == 0) throw DomainError("unknown collection " + collection);
    if (p.K != K) throw DomainError("point has K=" + std::to_string(p.K) +
                                    " but the collection needs K=" + std::to_string(K));
    VarPool pool;
    auto fields = builtin_collection(pool, p.n, K, p, tol.zero);
    auto rep = span_report(pool, p, fields, tol);
    emit(json{{"kernel_dim", rep.kernel_dim},
              {"spanned_dim", rep.spanned_dim},
              {"dominated", rep.dominated},
              {"field_count", static_cast<int>(fields.size())},
              {"worst_tangency", rep.worst_tangency}});
    return 0;
  };
  if (span_cmd->parsed()) return run_span(span_opts->first, span_opts->second);
  if (span_alias->parsed()) return run_span(span_alias_opts->first, span_alias_opts->second);

  if (self_cmd->parsed()) {
    auto result = run_acceptance(seed ? seed : 20260808, tol, std::cerr);
    emit(json{{"passed", result.passed}, {"failed", result.failed}});
    return result.ok() ? 0 : 3;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ToleranceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
