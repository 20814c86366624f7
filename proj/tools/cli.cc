// Copyright 2026 The privdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "privdist/fixpoint.h"
#include "privdist/formula_export.h"
#include "privdist/lmc.h"
#include "privdist/model_gen.h"
#include "privdist/rational.h"
#include "privdist/skew_kantorovich.h"
#include "privdist/tv_oracle.h"

namespace privdist {
namespace {

using nlohmann::ordered_json;

// Raised for bad flag values; maps to kExitUsage.
struct UsageError {
  std::string message;
};

// Exact decimal when the denominator has only factors 2 and 5, else twelve
// truncated digits followed by "...".
std::string Decimal(const Rational& r) {
  mpz_class den = r.denominator();
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return r.ToDecimal(12) + "...";
  const int digits = std::max(twos, fives);
  return digits == 0 ? r.ToString() : r.ToDecimal(digits);
}

Rational ParseRat(const std::string& text, const std::string& flag) {
  absl::StatusOr<Rational> r = ParseRational(text);
  if (!r.ok()) {
    throw UsageError{absl::StrCat(flag, ": ", r.status().message())};
  }
  return *r;
}

Alpha ParseAlpha(const std::string& text) {
  absl::StatusOr<Alpha> a = Alpha::Create(ParseRat(text, "--alpha"));
  if (!a.ok())
    throw UsageError{absl::StrCat("--alpha: ", a.status().message())};
  return *a;
}

Lmc Load(const std::string& path) {
  absl::StatusOr<Lmc> lmc = LoadLmcFile(path);
  if (!lmc.ok()) throw UsageError{std::string(lmc.status().message())};
  return *std::move(lmc);
}

StateId State(const Lmc& lmc, absl::string_view name) {
  std::optional<StateId> s = lmc.FindState(name);
  if (!s.has_value())
    throw UsageError{absl::StrCat("unknown state '", name, "'")};
  return *s;
}

std::pair<StateId, StateId> ParsePair(const Lmc& lmc, const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ',');
  if (parts.size() != 2) {
    throw UsageError{absl::StrCat("expected S,S' but got '", text, "'")};
  }
  return {State(lmc, parts[0]), State(lmc, parts[1])};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{absl::StrCat("cannot read ", path)};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Common {
  bool json = false;
  int threads = 0;
};

struct EngineFlags {
  std::string mode = "primal";
  int max_iters = 10'000;
  std::string stop_gap;

  void Register(CLI::App* app) {
    app->add_option("--mode", mode, "Kantorovich program: primal or dual")
        ->check(CLI::IsMember({"primal", "dual"}));
    app->add_option("--max-iters", max_iters, "Iteration budget")
        ->check(CLI::PositiveNumber);
    app->add_option("--stop-gap", stop_gap, "Stop when no entry moves more");
  }

  EngineOptions Build(const Common& common) const {
    EngineOptions o;
    o.max_iters = max_iters;
    if (!stop_gap.empty()) {
      o.stop_gap = ParseRat(stop_gap, "--stop-gap");
      if (o.stop_gap.sign() < 0) throw UsageError{"--stop-gap must be >= 0"};
    }
    o.gamma.mode =
        mode == "dual" ? KantorovichMode::kDual : KantorovichMode::kPrimal;
    o.gamma.threads = common.threads;
    return o;
  }
};

ordered_json MatrixJson(const Lmc& lmc, const DistanceMatrix& d) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < d.size(); ++i) {
    for (int j = i; j < d.size(); ++j) {
      out.push_back({{"s", lmc.name(i)},
                     {"t", lmc.name(j)},
                     {"d", d.at(i, j).ToString()}});
    }
  }
  return out;
}

void Emit(std::ostream& out, const ordered_json& j) {
  out << j.dump(2) << "\n";
}

int CmdValidate(const Common& c, const std::string& file, bool dot,
                std::ostream& out) {
  absl::StatusOr<Lmc> lmc = LoadLmcFile(file);
  if (!lmc.ok()) {
    if (c.json) {
      Emit(out,
           {{"valid", false}, {"error", std::string(lmc.status().message())}});
    } else {
      out << "invalid: " << lmc.status().message() << "\n";
    }
    return kExitNegative;
  }
  if (dot) {
    out << FormatDot(*lmc);
    return kExitOk;
  }
  std::size_t transitions = 0;
  for (StateId s = 0; s < lmc->num_states(); ++s)
    transitions += lmc->row(s).size();
  if (c.json) {
    Emit(out, {{"valid", true},
               {"states", lmc->num_states()},
               {"symbols", lmc->alphabet_size()},
               {"transitions", transitions}});
  } else {
    out << "valid: " << lmc->num_states() << " states, " << lmc->alphabet_size()
        << " symbols, " << transitions << " transitions\n";
  }
  return kExitOk;
}

int CmdBisim(const Common& c, const std::string& file, std::ostream& out) {
  const Lmc lmc = Load(file);
  std::vector<std::vector<std::string>> blocks;
  for (const auto& block : BisimilarityPartition(lmc).Blocks()) {
    std::vector<std::string> names;
    for (StateId s : block) names.push_back(lmc.name(s));
    std::sort(names.begin(), names.end());
    blocks.push_back(std::move(names));
  }
  std::sort(blocks.begin(), blocks.end());
  if (c.json) {
    Emit(out, {{"blocks", blocks}});
  } else {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      out << "block " << k << ": " << absl::StrJoin(blocks[k], " ") << "\n";
    }
  }
  return kExitOk;
}

int CmdDistance(const Common& c, const std::string& file,
                const std::string& alpha_text, const std::string& pair_text,
                const EngineFlags& flags, std::ostream& out) {
  const Lmc lmc = Load(file);
  const Alpha alpha = ParseAlpha(alpha_text);
  const auto [s, t] = ParsePair(lmc, pair_text);
  const ExactResult r = ExactValue(alpha, lmc, s, t, flags.Build(c));
  const Rational& lo = r.bounds.lower.at(s, t);
  const Rational& hi = r.bounds.upper.at(s, t);
  if (c.json) {
    ordered_json j = {{"pair", {lmc.name(s), lmc.name(t)}},
                      {"alpha", alpha.value().ToString()},
                      {"resolution", ResolutionName(r.resolution)},
                      {"lower", lo.ToString()},
                      {"upper", hi.ToString()},
                      {"iterations", r.bounds.iterations}};
    j["value"] = r.value.has_value() ? ordered_json(r.value->ToString())
                                     : ordered_json(nullptr);
    Emit(out, j);
  } else if (r.value.has_value()) {
    out << "bd = " << *r.value << " (" << ResolutionName(r.resolution) << ")";
    if (!r.value->is_integer()) out << " = " << Decimal(*r.value);
    out << "\n";
  } else {
    out << "bd in [" << lo << ", " << hi << "] (bounds-only after "
        << r.bounds.iterations
        << (r.bounds.iterations == 1 ? " iteration)\n" : " iterations)\n");
  }
  return kExitOk;
}

int CmdThreshold(const Common& c, const std::string& file,
                 const std::string& alpha_text, const std::string& pair_text,
                 const std::string& theta_text, const std::string& cert_out,
                 const EngineFlags& flags, std::ostream& out) {
  const Lmc lmc = Load(file);
  const Alpha alpha = ParseAlpha(alpha_text);
  const auto [s, t] = ParsePair(lmc, pair_text);
  const Rational theta = ParseRat(theta_text, "--theta");
  absl::StatusOr<ThresholdResult> r =
      Threshold(alpha, lmc, s, t, theta, flags.Build(c));
  if (!r.ok()) throw UsageError{std::string(r.status().message())};
  if (r->answer == Answer::kYes && !cert_out.empty()) {
    std::ofstream f(cert_out);
    f << FormatCertificate(lmc, alpha, r->certificate->d);
    if (!f) throw UsageError{absl::StrCat("cannot write ", cert_out)};
  }
  const Rational& lo = r->bounds.lower.at(s, t);
  const Rational& hi = r->bounds.upper.at(s, t);
  if (c.json) {
    ordered_json j = {{"answer", AnswerName(r->answer)},
                      {"theta", theta.ToString()},
                      {"lower", lo.ToString()},
                      {"upper", hi.ToString()}};
    if (r->answer == Answer::kYes) {
      j["certificate"] = MatrixJson(lmc, r->certificate->d);
    } else if (r->answer == Answer::kNo) {
      j["iterate_index"] = r->iterate_index;
      j["iterate_value"] = r->iterate->at(s, t).ToString();
    }
    Emit(out, j);
  } else {
    out << AnswerName(r->answer) << "\n";
    switch (r->answer) {
      case Answer::kYes:
        out << "evidence: pre-fixed certificate with d(" << lmc.name(s) << ", "
            << lmc.name(t) << ") = " << r->certificate->d.at(s, t)
            << " <= " << theta << "\n";
        break;
      case Answer::kNo:
        out << "evidence: iterate " << r->iterate_index << " has d("
            << lmc.name(s) << ", " << lmc.name(t)
            << ") = " << r->iterate->at(s, t) << " > " << theta << "\n";
        break;
      case Answer::kUnknown:
        out << "enclosure: [" << lo << ", " << hi << "] straddles " << theta
            << "\n";
        break;
    }
  }
  return r->answer == Answer::kYes ? kExitOk : kExitNegative;
}

int ReportCertificate(const Common& c, const Lmc& lmc,
                      const absl::StatusOr<Certificate>& cert,
                      std::ostream& out) {
  if (!cert.ok() || !cert->checked) {
    const std::string why =
        cert.ok() ? cert->reason : std::string(cert.status().message());
    if (c.json) {
      Emit(out, {{"valid", false}, {"reason", why}});
    } else {
      out << "invalid: " << why << "\n";
    }
    return kExitNegative;
  }
  if (c.json) {
    Emit(out, {{"valid", true},
               {"alpha", cert->alpha.value().ToString()},
               {"d", MatrixJson(lmc, cert->d)}});
  } else {
    out << "valid: pre-fixed point at alpha = " << cert->alpha.value() << "\n";
  }
  return kExitOk;
}

int CmdCertify(const Common& c, const std::string& file,
               const std::string& cert_file, const std::string& model_file,
               const std::string& alpha_text, std::ostream& out) {
  const Lmc lmc = Load(file);
  if (cert_file.empty() == model_file.empty()) {
    throw UsageError{"exactly one of --cert and --model is required"};
  }
  if (!model_file.empty()) {
    if (alpha_text.empty()) throw UsageError{"--model needs --alpha"};
    return ReportCertificate(
        c, lmc,
        ValidateModel(lmc, ParseAlpha(alpha_text), ReadFile(model_file)), out);
  }
  absl::StatusOr<std::pair<Alpha, DistanceMatrix>> parsed =
      ParseCertificate(lmc, ReadFile(cert_file));
  if (!parsed.ok()) return ReportCertificate(c, lmc, parsed.status(), out);
  CertificateOptions options;
  options.threads = c.threads;
  return ReportCertificate(
      c, lmc, CheckCertificate(parsed->first, lmc, parsed->second, options),
      out);
}

int CmdDeltaBound(const Common& c, const std::string& file,
                  const std::string& alpha_text,
                  const std::string& epsilon_text, int exp_terms,
                  const std::vector<std::string>& pair_lists,
                  const EngineFlags& flags, std::ostream& out) {
  const Lmc lmc = Load(file);
  std::vector<std::pair<StateId, StateId>> pairs;
  for (const std::string& list : pair_lists) {
    for (absl::string_view p : absl::StrSplit(list, ';', absl::SkipEmpty())) {
      pairs.push_back(ParsePair(lmc, std::string(p)));
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::make_pair(lmc.name(a.first), lmc.name(a.second)) <
           std::make_pair(lmc.name(b.first), lmc.name(b.second));
  });
  const EngineOptions options = flags.Build(c);
  absl::StatusOr<DeltaBoundResult> r =
      !alpha_text.empty()
          ? DeltaBoundForAlpha(ParseAlpha(alpha_text), lmc, pairs, options)
          : DeltaBound(lmc, ParseRat(epsilon_text, "--epsilon"), pairs, options,
                       exp_terms);
  if (!r.ok()) throw UsageError{std::string(r.status().message())};
  if (c.json) {
    ordered_json j = {{"alpha", r->alpha.value().ToString()}};
    if (r->exp_terms > 0) j["exp_terms"] = r->exp_terms;
    ordered_json rows = ordered_json::array();
    for (const PairDelta& p : r->pairs) {
      rows.push_back({{"s", lmc.name(p.s)},
                      {"t", lmc.name(p.t)},
                      {"delta", p.delta.ToString()},
                      {"lower", p.lower.ToString()},
                      {"resolution", ResolutionName(p.resolution)}});
    }
    j["pairs"] = rows;
    j["max_delta"] = r->max_delta.ToString();
    Emit(out, j);
  } else {
    if (r->exp_terms > 0) {
      out << "alpha = " << r->alpha.value() << " (" << r->exp_terms
          << "-term lower bound on e^epsilon)\n";
    }
    for (const PairDelta& p : r->pairs) {
      out << lmc.name(p.s) << "," << lmc.name(p.t) << ": delta ≤ " << p.delta
          << " (" << Decimal(p.delta) << ") [" << ResolutionName(p.resolution)
          << "]\n";
    }
    out << "delta ≤ " << r->max_delta << " (" << Decimal(r->max_delta) << ")\n";
  }
  return kExitOk;
}

int CmdTvLower(const Common& c, const std::string& file,
               const std::string& alpha_text, const std::string& pair_text,
               int horizon, bool show_event, bool strict, std::ostream& out,
               std::ostream& err) {
  const Lmc lmc = Load(file);
  const Alpha alpha = ParseAlpha(alpha_text);
  const auto [s, t] = ParsePair(lmc, pair_text);
  HorizonOptions options = HorizonOptionsFromEnv();
  options.strict = strict;
  absl::StatusOr<TvResult> r = TvLowerBound(alpha, lmc, s, t, horizon, options);
  if (!r.ok()) throw UsageError{std::string(r.status().message())};
  std::vector<std::string> traces;
  for (const Trace& u : r->event.included)
    traces.push_back(TraceToString(lmc, u));
  std::sort(traces.begin(), traces.end());
  if (c.json) {
    ordered_json j = {{"value", r->value.ToString()},
                      {"horizon", horizon},
                      {"direction", TvDirectionName(r->direction)}};
    if (show_event) j["event"] = traces;
    Emit(out, j);
  } else {
    out << "tv_lower = " << r->value << " (" << Decimal(r->value)
        << ") at h = " << horizon << ", direction "
        << TvDirectionName(r->direction) << "\n";
    if (show_event) {
      for (const std::string& u : traces) out << u << "\n";
    }
  }
  if (r->limit_exceeded) {
    err << "warning: horizon " << horizon << " exceeds the explosion limit of "
        << options.explosion_limit << " trace entries\n";
  }
  return kExitOk;
}

int CmdGenDc(const Common& c, int n, const std::string& p_text,
             std::ostream& out) {
  DiningConfig config;
  config.n = n;
  config.p = ParseRat(p_text, "--p");
  absl::StatusOr<DiningChain> chain = GenerateDining(config);
  if (!chain.ok()) throw UsageError{std::string(chain.status().message())};
  out << (c.json ? FormatLmcJson(chain->lmc) : FormatDining(*chain));
  return kExitOk;
}

int CmdGenRandom(const Common& c, int states, int alphabet,
                 const std::string& density_text, std::uint64_t seed,
                 std::ostream& out) {
  absl::StatusOr<Lmc> lmc = GenerateRandom(
      states, alphabet, ParseRat(density_text, "--density"), seed);
  if (!lmc.ok()) throw UsageError{std::string(lmc.status().message())};
  out << (c.json ? FormatLmcJson(*lmc) : FormatLmc(*lmc));
  return kExitOk;
}

int CmdExportSmt(const std::string& file, const std::string& alpha_text,
                 bool lfp, const std::string& threshold, std::ostream& out) {
  const Lmc lmc = Load(file);
  const Alpha alpha = ParseAlpha(alpha_text);
  if (lfp == !threshold.empty()) {
    throw UsageError{"exactly one of --lfp and --threshold is required"};
  }
  if (lfp) {
    out << ExportLfpFormula(alpha, lmc);
    return kExitOk;
  }
  std::vector<std::string> parts = absl::StrSplit(threshold, ',');
  if (parts.size() != 3) throw UsageError{"--threshold expects S,S',THETA"};
  absl::StatusOr<std::string> script = ExportThresholdFormula(
      alpha, lmc, State(lmc, parts[0]), State(lmc, parts[1]),
      ParseRat(parts[2], "--threshold"));
  if (!script.ok()) throw UsageError{std::string(script.status().message())};
  out << *script;
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Skewed bisimilarity distances of labelled Markov chains"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json, "Machine-readable output");
  app.add_option("--threads", common.threads,
                 "Worker threads for pair-level work (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string file, alpha, epsilon, pair, theta, cert, model, cert_out,
      threshold_spec, p_text = "1/2", density = "1/2";
  std::vector<std::string> pairs;
  bool dot = false, show_event = false, strict = false, lfp = false;
  int horizon = 0, n = 2, states = 4, alphabet_size = 2, exp_terms = 0;
  std::uint64_t seed = 0;
  EngineFlags engine;

  CLI::App* validate =
      app.add_subcommand("validate", "Parse and check a chain");
  validate->add_option("FILE", file)->required();
  validate->add_flag("--dot", dot, "Print the chain as a DOT graph");

  CLI::App* bisim = app.add_subcommand("bisim", "Bisimilarity classes");
  bisim->add_option("FILE", file)->required();

  CLI::App* distance = app.add_subcommand("distance", "Compute bd_alpha");
  distance->add_option("FILE", file)->required();
  distance->add_option("--alpha", alpha)->required();
  distance->add_option("--pair", pair, "S,S'")->required();
  engine.Register(distance);

  CLI::App* thresh =
      app.add_subcommand("threshold", "Decide bd_alpha <= theta");
  thresh->add_option("FILE", file)->required();
  thresh->add_option("--alpha", alpha)->required();
  thresh->add_option("--pair", pair, "S,S'")->required();
  thresh->add_option("--theta", theta)->required();
  thresh->add_option("--cert-out", cert_out, "Write the certificate on yes");
  engine.Register(thresh);

  CLI::App* certify = app.add_subcommand("certify", "Re-check a certificate");
  certify->add_option("FILE", file)->required();
  certify->add_option("--cert", cert, "Certificate file");
  certify->add_option("--model", model, "SMT model with d_i_j values");
  certify->add_option("--alpha", alpha, "Skew factor for --model");

  CLI::App* delta = app.add_subcommand("delta-bound", "Certified delta bounds");
  delta->add_option("FILE", file)->required();
  CLI::Option* alpha_opt = delta->add_option("--alpha", alpha);
  CLI::Option* eps_opt = delta->add_option("--epsilon", epsilon);
  alpha_opt->excludes(eps_opt);
  delta->add_option("--exp-terms", exp_terms, "Series terms for --epsilon");
  delta->add_option("--pairs", pairs, "S,S'[;S,S'...]")->required();
  engine.Register(delta);

  CLI::App* tv = app.add_subcommand("tv-lower", "Finite-horizon lower bound");
  tv->add_option("FILE", file)->required();
  tv->add_option("--alpha", alpha)->required();
  tv->add_option("--pair", pair, "S,S'")->required();
  tv->add_option("--horizon", horizon)
      ->required()
      ->check(CLI::NonNegativeNumber);
  tv->add_flag("--show-event", show_event, "List the maximizing event");
  tv->add_flag("--strict", strict,
               "Fail instead of warning at the explosion limit");

  CLI::App* gen = app.add_subcommand("gen", "Generate chains");
  gen->require_subcommand(1);
  CLI::App* gen_dc = gen->add_subcommand("dc", "Dining cryptographers");
  gen_dc->add_option("--n", n);
  gen_dc->add_option("--p", p_text);
  CLI::App* gen_random = gen->add_subcommand("random", "Seeded random chain");
  gen_random->add_option("--states", states);
  gen_random->add_option("--alphabet", alphabet_size);
  gen_random->add_option("--density", density);
  gen_random->add_option("--seed", seed);

  CLI::App* smt = app.add_subcommand("export-smt", "SMT-LIB encodings");
  smt->add_option("FILE", file)->required();
  smt->add_option("--alpha", alpha)->required();
  smt->add_flag("--lfp", lfp, "Least pre-fixed point formula");
  smt->add_option("--threshold", threshold_spec, "S,S',THETA");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return CmdValidate(common, file, dot, out);
    if (bisim->parsed()) return CmdBisim(common, file, out);
    if (distance->parsed()) {
      return CmdDistance(common, file, alpha, pair, engine, out);
    }
    if (thresh->parsed()) {
      return CmdThreshold(common, file, alpha, pair, theta, cert_out, engine,
                          out);
    }
    if (certify->parsed()) {
      return CmdCertify(common, file, cert, model, alpha, out);
    }
    if (delta->parsed()) {
      if (alpha.empty() && epsilon.empty()) {
        throw UsageError{"one of --alpha and --epsilon is required"};
      }
      return CmdDeltaBound(common, file, alpha, epsilon, exp_terms, pairs,
                           engine, out);
    }
    if (tv->parsed()) {
      return CmdTvLower(common, file, alpha, pair, horizon, show_event, strict,
                        out, err);
    }
    if (gen_dc->parsed()) return CmdGenDc(common, n, p_text, out);
    if (gen_random->parsed()) {
      return CmdGenRandom(common, states, alphabet_size, density, seed, out);
    }
    if (smt->parsed()) {
      return CmdExportSmt(file, alpha, lfp, threshold_spec, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    return kExitUsage;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace privdist
