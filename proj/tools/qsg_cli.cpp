/*
 * Copyright 2026 The qsg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// qsg: command-line front end. Exit codes: 0 yes/success, 1 no, 2 budget
// exhausted, 3 usage error, 4 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsg/json_io.hpp"
#include "qsg/qsg.hpp"

using namespace qsg;
using io::json;

namespace {

constexpr int kYes = 0, kNo = 1, kBudget = 2, kUsage = 3, kInput = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ModelError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out)
    throw ModelError("cannot write '" + path + "'");
  out << text;
}

std::string meta_path(const std::string& arena) { return arena + ".meta.json"; }

struct Common {
    std::string arena;
    std::string vertex;
    std::string format = "json";
    bool deterministic = false;
};

struct Loaded {
    Arena a;
    Vertex v;
};

Loaded load(const Common& c) {
  Arena a = parse_arena(slurp(c.arena));
  Vertex v;
  if (!c.vertex.empty())
    v = a.at(c.vertex);
  else if (a.init())
    v = *a.init();
  else
    throw ModelError("no --vertex given and the arena has no init line");
  return {std::move(a), v};
}

Rational parse_q(const std::string& s, const char* what) {
  try {
    return Rational::parse(s);
  } catch (const std::exception& e) {
    throw ModelError(std::string("--") + what + ": " + e.what());
  }
}

/// lambda from the option, else from the generator sidecar.
Rational lambda_for(const std::string& arena, const std::string& opt) {
  if (!opt.empty())
    return parse_q(opt, "lambda");
  std::ifstream probe(meta_path(arena));
  if (!probe)
    throw ModelError("no --lambda given and no " + meta_path(arena) + " sidecar");
  auto meta = json::parse(slurp(meta_path(arena)));
  return io::rat_of(meta.at("lambda"));
}

void emit(const Common& c, const json& j, const std::string& text) {
  if (c.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

MealyStrategy leader_from(const Arena& a, const std::string& file, const std::string& choices) {
  if (!file.empty())
    return io::strategy_of(a, json::parse(slurp(file)));
  return io::strategy_of_choices(a, Player::Zero, choices);
}

void add_common(CLI::App* sub, Common& c, bool needVertex = true) {
  sub->add_option("--arena", c.arena, "arena file")->required();
  if (needVertex)
    sub->add_option("--vertex", c.vertex, "start vertex (default: the arena's init)");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
  sub->add_flag("--deterministic", c.deterministic, "fixed enumeration order (always the case)");
}

std::string seq(const Arena& a, const std::vector<Vertex>& p) {
  std::string s;
  for (Vertex u : p)
    s += (s.empty() ? "" : " ") + a.name(u);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg values of two-player quantitative games on graphs"};
  app.require_subcommand(1);
  Common common;

  // asv-mp-threshold
  std::string cOpt, dOpt, lambdaOpt, epsOpt, mode = "csv", stratFile, choices, certFile, outFile;
  std::string aOpt, bOpt, tOpt, weightsOpt, payoff = "mp";
  int dim = 0, maximizer = 0;

  auto* thr = app.add_subcommand("asv-mp-threshold", "decide ASV(v) > c for mean payoff, with a witness");
  add_common(thr, common);
  thr->add_option("--c", cOpt, "threshold p/q")->required();

  auto* val = app.add_subcommand("asv-mp-value", "exact ASV(v) for mean payoff");
  add_common(val, common);

  auto* lam = app.add_subcommand("lambda-region", "thresholds (c, d) player 1 can enforce from v");
  add_common(lam, common);
  lam->add_option("--c", cOpt, "query point c");
  lam->add_option("--d", dOpt, "query point d");

  auto* ver = app.add_subcommand("verify-witness", "re-check a witness certificate");
  add_common(ver, common, false);
  ver->add_option("--certificate", certFile, "certificate JSON (or asv-mp-threshold output)")->required();

  auto* brm = app.add_subcommand("br-mp", "player 1's best mean-payoff response to a leader strategy");
  add_common(brm, common);
  brm->add_option("--strategy", stratFile, "leader strategy JSON");
  brm->add_option("--choice", choices, "memoryless leader as u=v,...");

  auto* dse = app.add_subcommand("ds-evaluate", "CSV/ASV of a leader strategy for discounted sum");
  add_common(dse, common);
  dse->add_option("--lambda", lambdaOpt, "discount factor p/q (default: from the sidecar)");
  dse->add_option("--strategy", stratFile, "leader strategy JSON");
  dse->add_option("--choice", choices, "memoryless leader as u=v,...");

  auto* gap = app.add_subcommand("ds-gap", "gap problem for discounted-sum Stackelberg values");
  add_common(gap, common);
  gap->add_option("--lambda", lambdaOpt, "discount factor p/q (default: from the sidecar)");
  gap->add_option("--c", cOpt, "threshold")->required();
  gap->add_option("--epsilon", epsOpt, "gap")->required();
  gap->add_option("--mode", mode, "csv or asv")->check(CLI::IsMember({"csv", "asv"}));

  auto* gtds = app.add_subcommand("gen-tds", "game for a target discounted-sum instance");
  gtds->add_option("--a", aOpt)->required();
  gtds->add_option("--b", bOpt)->required();
  gtds->add_option("--t", tOpt)->required();
  gtds->add_option("--lambda", lambdaOpt)->required();
  gtds->add_option("--out", outFile, "arena file to write (sidecar goes next to it)")->required();

  auto* gpart = app.add_subcommand("gen-partition", "gap-problem game for a partition instance");
  gpart->add_option("--weights", weightsOpt, "comma separated positive integers")->required();
  gpart->add_option("--out", outFile, "arena file to write (sidecar goes next to it)")->required();

  auto* zs = app.add_subcommand("zerosum", "value of a zero-sum game on one dimension");
  add_common(zs, common);
  zs->add_option("--payoff", payoff, "mp or ds")->check(CLI::IsMember({"mp", "ds"}));
  zs->add_option("--dim", dim, "weight dimension")->check(CLI::Range(0, 1));
  zs->add_option("--maximizer", maximizer, "maximising player")->check(CLI::Range(0, 1));
  zs->add_option("--lambda", lambdaOpt, "discount factor for ds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (thr->parsed()) {
      auto [a, v] = load(common);
      Rational c = parse_q(cOpt, "c");
      LambdaCache cache(a);
      auto r = asv_threshold(a, v, c, &cache);
      json j = {{"answer", r.yes ? "yes" : "no"}, {"vertex", a.name(v)}, {"c", io::rat(c)}};
      std::ostringstream txt;
      txt << (r.yes ? "yes" : "no") << "\n";
      if (r.yes) {
        const auto& w = *r.certificate;
        j["certificate"] = io::to_json(a, w);
        if (auto l = accepted_witness_lasso(a, w, &cache))
          j["witness"] = io::to_json(a, *l);
        auto leader = synthesize_leader_strategy(a, w);
        j["leader"] = leader.summary();
        txt << "payoff (" << w.cPrime << ", " << w.d << ") mixing " << w.alpha << " : " << w.beta << "\n"
            << leader.summary();
      }
      emit(common, j, txt.str());
      return r.yes ? kYes : kNo;
    }
    if (val->parsed()) {
      auto [a, v] = load(common);
      auto r = asv_value(a, v);
      emit(common, {{"vertex", a.name(v)}, {"value", io::rat(r.value)}, {"attained", r.attained}},
           r.value.str() + "\nattained=" + (r.attained ? "true" : "false") + "\n");
      return kYes;
    }
    if (lam->parsed()) {
      auto [a, v] = load(common);
      auto t = lambda_region(a, v);
      json j = {{"vertex", a.name(v)}, {"profile", io::to_json(t.profile)}, {"region", io::to_json(t.region)}};
      std::ostringstream txt;
      txt << "(c, d) is enforceable by player 1 iff d <= f(c), f given by pieces [from, value, slope]:\n";
      for (auto& p : t.profile.pieces())
        txt << "  " << p.x0 << " " << p.y0 << " " << p.slope << "\n";
      int code = kYes;
      if (!cOpt.empty() || !dOpt.empty()) {
        if (cOpt.empty() || dOpt.empty())
          throw ModelError("--c and --d go together");
        bool in = t.region.contains({parse_q(cOpt, "c"), parse_q(dOpt, "d")});
        j["member"] = in;
        txt << (in ? "member\n" : "not a member\n");
        code = in ? kYes : kNo;
      }
      emit(common, j, txt.str());
      return code;
    }
    if (ver->parsed()) {
      Arena a = parse_arena(slurp(common.arena));
      auto doc = json::parse(slurp(certFile));
      const json& cj = doc.contains("certificate") ? doc["certificate"] : doc;
      auto w = io::certificate_of(a, cj);
      auto rep = verify_certificate(a, w);
      emit(common, {{"valid", rep.ok}, {"reason", rep.reason}, {"cost", rep.cost}},
           std::string(rep.ok ? "valid" : "invalid: " + rep.reason) + "\n");
      return rep.ok ? kYes : kNo;
    }
    if (brm->parsed()) {
      auto [a, v] = load(common);
      auto s = leader_from(a, stratFile, choices);
      auto r = best_response_mp(a, s, v);
      json j = {{"value", io::rat(r.value)},     {"response", io::to_json(a, r.response)},
                {"mp0Low", io::rat(r.mp0Low)},   {"mp0High", io::rat(r.mp0High)},
                {"tie", r.tie()}};
      std::ostringstream txt;
      txt << "value " << r.value << "\nresponse " << seq(a, r.response.prefix) << " (" << seq(a, r.response.cycle)
          << ")^w\nMP0 over optimal responses in [" << r.mp0Low << ", " << r.mp0High << "]\n";
      emit(common, j, txt.str());
      return kYes;
    }
    if (dse->parsed()) {
      auto [a, v] = load(common);
      Rational l = lambda_for(common.arena, lambdaOpt);
      auto s = leader_from(a, stratFile, choices);
      auto br = ds_best_response(a, l, s, v);
      Rational csv = evaluate_csv(a, l, s, v), asv = evaluate_asv(a, l, s, v);
      emit(common,
           {{"csv", io::rat(csv)}, {"asv", io::rat(asv)}, {"bestResponseValue", io::rat(br.value)},
            {"response", io::to_json(a, br.response)}},
           "csv " + csv.str() + "\nasv " + asv.str() + "\nbest response " + br.value.str() + "\n");
      return kYes;
    }
    if (gap->parsed()) {
      auto [a, v] = load(common);
      Rational l = lambda_for(common.arena, lambdaOpt);
      auto g = gap_decide(a, l, v, parse_q(cOpt, "c"), parse_q(epsOpt, "epsilon"),
                          mode == "csv" ? Semantics::Cooperative : Semantics::Adversarial);
      emit(common, io::to_json(a, g),
           std::string(g.yes ? "yes" : "no") + "\nbest leader value " + g.value.str() + " (horizon " +
               std::to_string(g.horizon.N) + ")\n");
      return g.yes ? kYes : kNo;
    }
    if (gtds->parsed()) {
      TdsInstance in{parse_q(aOpt, "a"), parse_q(bOpt, "b"), parse_q(tOpt, "t"), parse_q(lambdaOpt, "lambda")};
      auto g = build_tds_reduction(in);
      spit(outFile, serialize_arena(g.arena));
      json meta = {{"kind", "tds"},         {"a", io::rat(in.a)},       {"b", io::rat(in.b)},
                   {"t", io::rat(in.t)},    {"lambda", io::rat(in.lambda)}, {"vertex", g.arena.name(g.v)}};
      spit(meta_path(outFile), meta.dump(2) + "\n");
      std::cout << meta.dump(2) << "\n";
      return kYes;
    }
    if (gpart->parsed()) {
      std::vector<long> w;
      std::stringstream ss(weightsOpt);
      for (std::string item; std::getline(ss, item, ',');)
        w.push_back(std::stol(item));
      PartitionInstance in(w);
      auto g = build_partition_reduction(in);
      spit(outFile, serialize_arena(g.arena));
      json meta = {{"kind", "partition"}, {"weights", w},
                   {"T", in.T},           {"lambda", io::rat(g.lambda)},
                   {"epsilon", io::rat(g.epsilon)}, {"c", io::rat(g.c)},
                   {"vertex", g.arena.name(g.v0)}, {"solvable", in.solvable()}};
      spit(meta_path(outFile), meta.dump(2) + "\n");
      std::cout << meta.dump(2) << "\n";
      return kYes;
    }
    if (zs->parsed()) {
      auto [a, v] = load(common);
      Player mx = maximizer == 0 ? Player::Zero : Player::One;
      ZeroSumResult r = payoff == "mp" ? mp_game_value(a, dim, mx, v)
                                       : ds_game_value(a, lambda_for(common.arena, lambdaOpt), dim, mx, v);
      emit(common,
           {{"value", io::rat(r.value)},
            {"maximizerStrategy", io::to_json(a, r.optimalStrategyMax)},
            {"minimizerStrategy", io::to_json(a, r.optimalStrategyMin)}},
           r.value.str() + "\n");
      return kYes;
    }
  } catch (const BudgetExceeded& e) {
    json j = {{"error", "budget"}, {"resource", e.resource()}, {"cap", e.cap()}, {"required", e.required()}};
    std::cerr << j.dump() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ModelError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput + 1;
  }
  return kUsage;
}
