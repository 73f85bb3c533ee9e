#include "fpgrank/cli.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "fpgrank/errors.hpp"
#include "fpgrank/localization.hpp"
#include "fpgrank/rank_approx.hpp"
#include "fpgrank/skew.hpp"

namespace fpgrank {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table{
      {"zp2", "p = 2\ngens = g\n"},
      {"zp3", "p = 3\ngens = g\n"},
      {"free2", "p = 2\ngens = x, y\n"},
      {"free3", "p = 2\ngens = x, y, z\n"},
      {"mild1", "p = 2\ngens = x, g\nrels = [x,g] = x^2\n"},
      {"mild2", "p = 2\ngens = x, y, g\nrels = [x,g] = [y,x]\n"},
  };
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string rational_string(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

/// Writes to --out when given; returns the stream for the summary.
std::ostream& emit_report(const RunConfig& cfg, const std::string& report, std::ostream& out, std::ostream& err) {
  if (cfg.out_path.empty()) {
    out << report;
    return err;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + cfg.out_path + "'");
  f << report;
  return out;
}

void check_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format must be csv or json");
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

std::optional<GroupPresentation> preset_presentation(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) return std::nullopt;
  return parse_presentation(it->second);
}

GroupPresentation load_presentation(const RunConfig& cfg) {
  if (cfg.preset.empty() == cfg.presentation_path.empty())
    throw ConfigError("give exactly one of --preset and --presentation");
  if (!cfg.preset.empty()) {
    auto pres = preset_presentation(cfg.preset);
    if (!pres) throw ConfigError("unknown preset '" + cfg.preset + "'");
    return *pres;
  }
  return parse_presentation(read_file(cfg.presentation_path));
}

std::vector<int> resolve_k_list(const RunConfig& cfg, int default_k_max) {
  if (cfg.k_max && !cfg.k_list.empty()) throw ConfigError("give at most one of --kmax and --k");
  std::vector<int> ks = cfg.k_list;
  if (ks.empty())
    for (int k = 2; k <= (cfg.k_max ? cfg.k_max : default_k_max); ++k) ks.push_back(k);
  if (ks.empty()) throw ConfigError("--kmax must be at least 2");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 2) throw ConfigError("k values must be at least 2");
    if (i && ks[i] <= ks[i - 1]) throw ConfigError("k values must be strictly increasing");
  }
  return ks;
}

int cmd_rank_approx(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_format(cfg);
  const GroupPresentation pres = load_presentation(cfg);
  const std::vector<int> ks = resolve_k_list(cfg, 5);
  if (cfg.matrix_path.empty()) throw ConfigError("rank-approx needs --matrix");
  const GroupRingMatrix a = GroupRingMatrix::from_json(read_file(cfg.matrix_path), pres);

  const RankReport report = rank_sequence(pres, a, ks, cfg.budget, cfg.jobs);
  const IntegralityDiagnostics diag = integrality_report(report);
  std::ostream& summary =
      emit_report(cfg, cfg.format == "json" ? report_to_json(report, diag) + "\n" : report_to_csv(report), out, err);
  if (report.levels.empty()) {
    summary << "no level completed: " << report.truncation_reason << "\n";
  } else {
    summary << "integrality: nearest=" << diag.nearest << " final_gap=" << rational_string(diag.final_gap)
            << " consistent=" << (diag.consistent ? "yes" : "no")
            << " strictly_decreasing=" << (diag.strictly_decreasing ? "yes" : "no") << "\n";
  }
  if (report.truncated) {
    summary << "budget exceeded: " << report.truncation_reason << "\n";
    return exit_budget_exceeded;
  }
  return exit_ok;
}

int cmd_quotient_info(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_format(cfg);
  const GroupPresentation pres = load_presentation(cfg);
  const std::vector<int> ks = resolve_k_list(cfg, 4);
  const FlagInfo info = validate_flag(pres);
  const bool free = pres.relators.empty();
  const std::int64_t d = std::int64_t(pres.num_generators());

  std::ostringstream csv, json;
  csv << "k,algebra_dim,graded_dims,order,lie_oracle,hilbert\n";
  json << "{\"levels\":[";
  bool all_match = true;
  std::string budget_reason;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const int k = ks[i];
    std::shared_ptr<const QuotientAlgebra> qa;
    std::size_t order = 0;
    try {
      qa = build_quotient(pres, k, cfg.budget);
      order = enumerate_quotient(qa, cfg.budget.max_elements).order();
    } catch (const BudgetExceeded& e) {
      budget_reason = "k=" + std::to_string(k) + ": " + e.what();
      break;
    }
    const auto& dims = qa->graded_dims();

    std::string oracle = "n/a";
    if (free) {
      bool ok = BigInt(order) == restricted_lie_order_oracle(d, pres.p, k).order;
      std::int64_t expect = 1;
      for (auto g : dims) {
        ok = ok && g == expect;
        expect *= d;
      }
      oracle = ok ? "match" : "mismatch";
    }
    std::string hilbert = "skipped";
    if (info.is_mild) hilbert = hilbert_mild_flag(info, k) == dims ? "match" : "mismatch";
    all_match = all_match && oracle != "mismatch" && hilbert != "mismatch";

    csv << k << ',' << qa->dim() << ",\"" << join(dims) << "\"," << order << ',' << oracle << ',' << hilbert << "\n";
    json << (i ? "," : "") << "{\"k\":" << k << ",\"algebra_dim\":" << qa->dim() << ",\"graded_dims\":" << join(dims)
         << ",\"order\":" << order << ",\"lie_oracle\":\"" << oracle << "\",\"hilbert\":\"" << hilbert << "\"}";
  }
  json << "],\"flag\":" << (info.is_flag ? "true" : "false") << ",\"mild\":" << (info.is_mild ? "true" : "false")
       << "}\n";

  std::ostream& summary = emit_report(cfg, cfg.format == "json" ? json.str() : csv.str(), out, err);
  summary << "presentation: " << (info.is_mild ? "mild flag" : info.is_flag ? "flag" : "not a flag")
          << (info.is_mild ? "" : ", Hilbert check skipped") << "\n";
  if (!budget_reason.empty()) {
    summary << "budget exceeded: " << budget_reason << "\n";
    return exit_budget_exceeded;
  }
  if (!all_match) {
    summary << "oracle comparison failed\n";
    return exit_check_failed;
  }
  return exit_ok;
}

int cmd_skew_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const GroupPresentation pres = load_presentation(cfg);
  std::vector<int> ks = cfg.k_list;
  if (ks.empty()) ks.push_back(cfg.k_max ? cfg.k_max : 6);
  for (int k : ks)
    if (k < 2) throw ConfigError("k values must be at least 2");
  if (!validate_flag(pres).is_mild) throw ConfigError("skew-check needs a mild flag presentation");

  for (int k : ks) {
    DecompositionCheck c;
    try {
      c = check_decomposition(pres, k, cfg.samples, cfg.seed, cfg.budget);
    } catch (const StructureError& e) {
      out << "skew-check k=" << k << ": FAIL (" << e.what() << ")\n";
      return exit_check_failed;
    }
    if (!c.passed) {
      out << "skew-check k=" << k << ": FAIL after " << c.checked << " pairs\ncounterexample: " << c.counterexample
          << "\n";
      return exit_check_failed;
    }
    out << "skew-check k=" << k << ": pass (" << c.checked << " pairs)\n";
  }
  return exit_ok;
}

int cmd_localize_eval(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.triples_path.empty()) throw ConfigError("localize-eval needs --triples");
  const TripleFile file = parse_triples_json(read_file(cfg.triples_path));
  const EvalTarget target = parse_target(cfg.target, file.ring);
  const BaseRing& S = target.target;
  const BaseRing& R = file.ring;

  std::vector<std::optional<BaseRing::Element>> values;
  for (std::size_t i = 0; i < file.triples.size(); ++i) {
    try {
      values.push_back(loc_eval(file.triples[i], target));
      out << "triple " << i << ": " << S.to_string(*values.back()) << "\n";
    } catch (const std::domain_error&) {
      values.push_back(std::nullopt);
      out << "triple " << i << ": middle matrix not invertible in " << target.name << "\n";
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<LocTriple> pool = file.triples;
  std::uniform_int_distribution<int> size(1, 3);
  for (std::size_t s = 0; s < cfg.samples; ++s) pool.push_back(random_triple(R, std::size_t(size(rng)), rng));

  std::size_t checks = 0;
  auto fail = [&](const std::string& law) {
    out << "law check: FAIL (" << law << ") after " << checks << " checks\n";
    return exit_check_failed;
  };
  auto try_eval = [&](const LocTriple& t) -> std::optional<BaseRing::Element> {
    try {
      return loc_eval(t, target);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  };
  auto unit_triangular = [&](std::size_t n) {
    RingMatrix m = RingMatrix::identity(R, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) m.at(i, j) = R.random(rng);
    return m;
  };

  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto e1 = try_eval(pool[i]);
    if (!e1) continue;
    const LocTriple& t2 = pool[(i + 1) % pool.size()];
    const auto e2 = try_eval(t2);
    if (e2) {
      ++checks;
      const auto sum = try_eval(loc_add(pool[i], t2));
      if (!sum || *sum != S.add(*e1, *e2)) return fail("ev(t1 + t2) = ev t1 + ev t2");
      ++checks;
      const auto prod = try_eval(loc_mul(pool[i], t2));
      if (!prod || *prod != S.mul(*e1, *e2)) return fail("ev(t1 t2) = ev t1 ev t2");
    }
    ++checks;
    const std::size_t n = pool[i].size();
    const auto moved = try_eval(r1_transform(pool[i], unit_triangular(n), unit_triangular(n).negated()));
    if (!moved || *moved != *e1) return fail("R1 transform preserves ev");
    ++checks;
    const auto r = R.random(rng);
    if (loc_eval(loc_lambda(R, r), target) != target.phi(r)) return fail("ev(lambda(r)) = phi(r)");
  }
  out << "law check: pass (" << checks << " checks, target " << target.name << ")\n";
  return exit_ok;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-quotient rank approximations over F_p group algebras"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string k_text;

  auto add_presentation = [&](CLI::App* sub) {
    sub->add_option("--preset", cfg.preset, "Bundled presentation")->check(CLI::IsMember(preset_names()));
    sub->add_option("--presentation", cfg.presentation_path, "Presentation file");
  };
  auto add_ks = [&](CLI::App* sub) {
    sub->add_option("--kmax", cfg.k_max, "Levels 2..kmax");
    sub->add_option("--k", k_text, "Comma-separated levels");
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--max-order", cfg.budget.max_elements, "Largest enumerated quotient");
    sub->add_option("--max-dim", cfg.budget.max_ambient_dim, "Largest truncated free algebra");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--out", cfg.out_path, "Report file");
  };

  CLI::App* rank = app.add_subcommand("rank-approx", "Normalized ranks over G/D_k");
  add_presentation(rank);
  add_ks(rank);
  add_budget(rank);
  add_output(rank);
  rank->add_option("--matrix", cfg.matrix_path, "Matrix JSON file");
  rank->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* info = app.add_subcommand("quotient-info", "Graded dimensions, orders and oracle checks");
  add_presentation(info);
  add_ks(info);
  add_budget(info);
  add_output(info);

  CLI::App* skew = app.add_subcommand("skew-check", "Skew power series decomposition check");
  add_presentation(skew);
  add_ks(skew);
  add_budget(skew);
  skew->add_option("--samples", cfg.samples, "Random pairs");
  skew->add_option("--seed", cfg.seed, "Random seed");

  CLI::App* loc = app.add_subcommand("localize-eval", "Evaluate localization triples");
  loc->add_option("--triples", cfg.triples_path, "Triple JSON file");
  loc->add_option("--target", cfg.target, "trunc, fp or matrix:R");
  loc->add_option("--samples", cfg.samples, "Random triples for the law check");
  loc->add_option("--seed", cfg.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  try {
    if (!k_text.empty()) {
      std::stringstream s(k_text);
      std::string item;
      while (std::getline(s, item, ',')) {
        std::size_t used = 0;
        int k = 0;
        try {
          k = std::stoi(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError("--k expects comma-separated integers");
        cfg.k_list.push_back(k);
      }
    }
    if (cfg.budget.max_elements == 0 || cfg.budget.max_ambient_dim == 0) throw ConfigError("budgets must be positive");
    if (rank->parsed()) return cmd_rank_approx(cfg, out, err);
    if (info->parsed()) return cmd_quotient_info(cfg, out, err);
    if (skew->parsed()) return cmd_skew_check(cfg, out, err);
    return cmd_localize_eval(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return exit_budget_exceeded;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_check_failed;
  }
}

}  // namespace fpgrank
