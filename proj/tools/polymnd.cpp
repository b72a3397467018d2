// Command-line surface: catalogue, enumeration, classifier analysis,
// tameness certification with replayable certificates, algebra computations
// with oracle cross-checks, and DOT/JSON export.
//
// Exit codes: 0 success/confirmed, 1 refuted, 2 inconclusive, 64 usage.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polymnd/algebra.hpp"
#include "polymnd/classifier.hpp"
#include "polymnd/monad.hpp"

using namespace polymnd;
using nlohmann::json;

namespace {

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 64;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

MonadPtr load_monad(const std::string& name, const std::string& monad_json) {
  if (!monad_json.empty()) return finite_monad_from_json(slurp(monad_json));
  return builtin(name);
}

json classifier_report_json(const MonadPtr& T, int bound, ClsKind kind) {
  Classifier cls(T, kind, bound);
  auto comps = components(cls);
  json out;
  out["schema_version"] = 1;
  out["monad"] = T->name();
  out["bound"] = bound;
  out["kind"] = kind == ClsKind::Semifree ? "semifree" : "extension";
  auto arr = json::array();
  for (auto& c : comps) {
    json cj;
    cj["verdict"] = c.verdict;
    cj["closed"] = c.closed;
    auto mem = json::array();
    for (auto& m : c.members) mem.push_back(cls.object_text(m));
    cj["members"] = mem;
    auto cand = json::array();
    for (auto& t : c.terminal_candidates) cand.push_back(cls.object_text(t));
    cj["terminal_candidates"] = cand;
    auto refs = json::array();
    for (auto& r : c.refutations) {
      json rj;
      rj["candidate"] = cls.object_text(r.candidate);
      rj["witness"] = cls.object_text(r.witness);
      rj["hom_count"] = r.hom_count;
      refs.push_back(rj);
    }
    cj["refutations"] = refs;
    arr.push_back(cj);
  }
  out["components"] = arr;
  return out;
}

std::string classifier_dot(const MonadPtr& T, int bound) {
  Classifier cls(T, ClsKind::Semifree, bound);
  auto comps = components(cls);
  std::ostringstream os;
  os << "digraph classifier {\n  rankdir=BT;\n";
  auto node = [&](const ClsObject& o) {
    std::string s = cls.object_text(o);
    for (auto& ch : s)
      if (ch == '"') ch = '\'';
    return s;
  };
  for (auto& c : comps) {
    std::set<std::string> terminal;
    for (auto& t : c.terminal_candidates) terminal.insert(node(t));
    for (auto& m : c.members) {
      os << "  \"" << node(m) << "\"";
      if (terminal.count(node(m)))
        os << " [shape=doublecircle,style=filled,fillcolor=lightgrey]";
      os << ";\n";
    }
    for (auto& b : c.members)
      for (auto& m : cls.morphisms_into(b)) {
        if (m.source == m.target) continue;
        os << "  \"" << node(m.source) << "\" -> \"" << node(m.target) << "\";\n";
      }
  }
  os << "}\n";
  return os.str();
}

FinSetAlgebra algebra_from_json(const MonadPtr& T, const json& j) {
  FinSetAlgebra A;
  A.T = T;
  std::string kind = j.value("kind", "trivial");
  if (kind == "trivial") {
    for (auto& c : T->colours(6)) A.carrier[c] = {"*"};
    A.act = [](OpId, const std::vector<int>&) { return 0; };
    return A;
  }
  if (kind == "monoid-table") {
    std::vector<std::string> names;
    for (auto& e : j.at("elements")) names.push_back(e.get<std::string>());
    std::vector<std::vector<int>> table;
    for (auto& row : j.at("table")) {
      std::vector<int> r;
      for (auto& v : row) r.push_back(v.get<int>());
      table.push_back(r);
    }
    int unit = j.value("unit", 0);
    A.carrier["*"] = names;
    A.act = [table, unit](OpId, const std::vector<int>& args) {
      int acc = unit;
      for (int a : args) acc = table[acc][a];
      return acc;
    };
    return A;
  }
  if (kind == "free") {
    Collection K;
    for (auto& [c, lst] : j.at("generators").items())
      for (auto& v : lst) K.at[c].push_back(v.get<std::string>());
    int bound = j.value("bound", 5);
    auto fa = FreeAlgebra::make(T, K, bound);
    return fa.as_algebra();
  }
  throw std::runtime_error("unknown algebra kind: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polymnd: graph calculus, polynomial monads, classifiers and "
               "free algebra computations"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "catalogue of builtin monads");
  std::string filter;
  list->add_option("filter", filter, "substring filter");

  auto* enumc = app.add_subcommand("enumerate", "enumerate operations by size");
  std::string monad = "monoids", monad_json;
  int bound = 5;
  bool as_json = false;
  enumc->add_option("--monad", monad, "builtin monad name");
  enumc->add_option("--monad-json", monad_json, "user monad JSON file");
  enumc->add_option("--bound", bound, "size bound");
  enumc->add_flag("--json", as_json, "JSON output");

  auto* classifyc = app.add_subcommand("classify", "classifier component analysis");
  std::string kind = "semifree", json_out, dot_out;
  classifyc->add_option("--monad", monad, "builtin monad name");
  classifyc->add_option("--monad-json", monad_json, "user monad JSON file");
  classifyc->add_option("--bound", bound, "size bound");
  classifyc->add_option("--kind", kind, "semifree|extension");
  classifyc->add_option("--json", json_out, "write report JSON here");
  classifyc->add_option("--dot", dot_out, "write component quiver DOT here");

  auto* certifyc = app.add_subcommand("certify", "tameness certification");
  std::string cert_out;
  certifyc->add_option("--monad", monad, "builtin monad name");
  certifyc->add_option("--monad-json", monad_json, "user monad JSON file");
  certifyc->add_option("--bound", bound, "size bound");
  certifyc->add_option("--out", cert_out, "certificate JSON path");

  auto* verifyc = app.add_subcommand("verify", "replay a tameness certificate");
  std::string cert_in;
  verifyc->add_option("certificate", cert_in, "certificate JSON")->required();

  auto* computec = app.add_subcommand("compute", "free | coproduct | pushout");
  std::string what, world = "finset", input, output;
  bool check_oracle = false;
  long long seed = 0;
  computec->add_option("what", what, "free|coproduct|pushout")->required();
  computec->add_option("--monad", monad, "builtin monad name");
  computec->add_option("--monad-json", monad_json, "user monad JSON file");
  computec->add_option("--world", world, "finset|vect:q|vect:f2|chain:f2");
  computec->add_option("--bound", bound, "size bound");
  computec->add_option("--input", input, "problem JSON");
  computec->add_option("--out", output, "result JSON path");
  computec->add_flag("--check-oracle", check_oracle, "cross-check with the oracle");
  computec->add_option("--seed", seed, "seed recorded in the output");

  auto* exportc = app.add_subcommand("export", "DOT export of the classifier");
  exportc->add_option("--monad", monad, "builtin monad name");
  exportc->add_option("--bound", bound, "size bound");
  exportc->add_option("--dot", dot_out, "output DOT path")->required();

  auto* obstr = app.add_subcommand(
      "obstruction", "characteristic-2 symmetric-square obstruction witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*list) {
      for (auto& b : builtin_catalogue()) {
        if (!filter.empty() && b.name.find(filter) == std::string::npos &&
            b.insertional_class.find(filter) == std::string::npos)
          continue;
        std::cout << b.name << " / " << b.insertional_class << " / " << b.table_verdict
                  << "\n";
      }
      return 0;
    }
    if (*enumc) {
      auto T = load_monad(monad, monad_json);
      auto ops = T->enumerate(bound);
      if (as_json) {
        json out;
        out["schema_version"] = 1;
        out["monad"] = T->name();
        out["bound"] = bound;
        auto arr = json::array();
        for (OpId b : ops) {
          json oj;
          oj["key"] = T->op_key(b);
          oj["colour"] = T->colour_of(b);
          oj["size"] = T->size(b);
          oj["sources"] = T->sources(b);
          arr.push_back(oj);
        }
        out["operations"] = arr;
        std::cout << out.dump(2) << "\n";
      } else {
        for (OpId b : ops)
          std::cout << T->op_key(b) << "  colour=" << T->colour_of(b)
                    << " size=" << T->size(b) << " arity=" << T->arity(b) << "\n";
        std::cout << ops.size() << " operations within size " << bound << "\n";
      }
      return 0;
    }
    if (*classifyc) {
      auto T = load_monad(monad, monad_json);
      if (kind != "extension" && kind != "semifree")
        return usage_error("kind must be semifree or extension");
      ClsKind k = kind == "extension" ? ClsKind::Extension : ClsKind::Semifree;
      auto rep = classifier_report_json(T, bound, k);
      if (!json_out.empty()) spit(json_out, rep.dump(2));
      if (!dot_out.empty()) spit(dot_out, classifier_dot(T, bound));
      std::cout << rep["components"].size() << " components at bound " << bound << "\n";
      for (auto& c : rep["components"])
        std::cout << "  " << c["verdict"].get<std::string>() << " ("
                  << c["members"].size() << " objects)\n";
      return 0;
    }
    if (*certifyc) {
      auto T = load_monad(monad, monad_json);
      auto rep = tame_report(T, bound);
      auto cert = tame_certificate_json(T, bound, rep);
      if (!cert_out.empty()) spit(cert_out, cert);
      std::cout << T->name() << " at bound " << bound << ": " << rep.verdict;
      if (!rep.detail.empty()) std::cout << " (" << rep.detail << ")";
      std::cout << "\n";
      if (rep.verdict == "tame-at-bound") return 0;
      if (rep.verdict == "not-tame") return 1;
      return 2;
    }
    if (*verifyc) {
      auto err = verify_certificate(slurp(cert_in));
      if (err.empty()) {
        std::cout << "certificate verified\n";
        return 0;
      }
      std::cout << "certificate FAILED: " << err << "\n";
      return 1;
    }
    if (*computec) {
      auto T = load_monad(monad, monad_json);
      json in = input.empty() ? json::object() : json::parse(slurp(input));
      json out;
      out["schema_version"] = 1;
      out["monad"] = T->name();
      out["world"] = world;
      out["bound"] = bound;
      out["seed"] = seed;
      bool ok = true;
      if (what == "free") {
        Collection K;
        if (in.contains("collection"))
          for (auto& [c, lst] : in.at("collection").items())
            for (auto& v : lst) K.at[c].push_back(v.get<std::string>());
        auto fa = FreeAlgebra::make(T, K, bound);
        json sizes;
        for (auto& [c, v] : fa.carrier) sizes[c] = v.size();
        out["carrier_sizes"] = sizes;
      } else if (what == "coproduct") {
        auto A = algebra_from_json(T, in.value("algebra", json{{"kind", "trivial"}}));
        std::map<std::string, std::vector<std::string>> K;
        if (in.contains("collection"))
          for (auto& [c, lst] : in.at("collection").items())
            for (auto& v : lst) K[c].push_back(v.get<std::string>());
        auto res = semifree_coproduct(A, K, bound);
        out["tame"] = res.tame;
        out["two_path_ok"] = res.two_path_ok;
        out["complete_upto_degree"] = res.complete_upto;
        json cd;
        for (auto& [k2, v] : res.counts_by_degree) cd[std::to_string(k2)] = v;
        out["counts_by_degree"] = cd;
        json tc;
        for (auto& [c, v] : res.terminal_counts) tc[c] = v;
        out["terminal_counts"] = tc;
        if (check_oracle && !res.two_path_ok) ok = false;
      } else if (what == "pushout") {
        auto A = algebra_from_json(T, in.value("algebra", json{{"kind", "trivial"}}));
        PushoutProblem prob;
        prob.R = A;
        for (auto& [c, lst] : in.at("K").items())
          for (auto& v : lst) prob.K[c].push_back(v.get<std::string>());
        for (auto& [c, lst] : in.at("L").items())
          for (auto& v : lst) prob.L[c].push_back(v.get<std::string>());
        std::map<std::string, std::vector<int>> umap, amap;
        for (auto& [c, lst] : in.at("u").items())
          for (auto& v : lst) umap[c].push_back(v.get<int>());
        for (auto& [c, lst] : in.at("alpha").items())
          for (auto& v : lst) amap[c].push_back(v.get<int>());
        prob.u = [umap](const std::string& c, int x) { return umap.at(c).at(x); };
        prob.alpha = [amap](const std::string& c, int x) { return amap.at(c).at(x); };
        int kmax = in.value("kmax", 2);
        auto filt = pushout_filtration(prob, kmax, bound);
        json stages = json::array();
        for (auto& st : filt.stages) {
          json sj;
          sj["k"] = st.k;
          for (auto& [c, v] : st.P) sj["P"][c] = v;
          stages.push_back(sj);
        }
        out["stages"] = stages;
        out["squares_ok"] = filt.squares_ok;
        if (check_oracle) {
          auto orc = pushout_oracle(prob, kmax, bound);
          json oj;
          bool match = filt.squares_ok;
          for (auto& [c, per_k] : orc.counts_by_degree) {
            oj[c] = per_k;
            for (int k2 = 0; k2 <= kmax && k2 < (int)per_k.size(); ++k2) {
              int fv = filt.stages[k2].P.count(c) ? filt.stages[k2].P[c] : 0;
              std::cout << (fv == per_k[k2] ? "PASS" : "FAIL") << " colour " << c
                        << " degree " << k2 << ": filtration " << fv << " oracle "
                        << per_k[k2] << "\n";
              if (fv != per_k[k2]) match = false;
            }
          }
          out["oracle"] = oj;
          out["oracle_match"] = match;
          ok = match;
        }
      } else {
        return usage_error("compute what must be free|coproduct|pushout");
      }
      auto text = out.dump(2);
      if (!output.empty()) spit(output, text);
      else std::cout << text << "\n";
      return ok ? 0 : 1;
    }
    if (*exportc) {
      auto T = load_monad(monad, monad_json);
      spit(dot_out, classifier_dot(T, bound));
      std::cout << "wrote " << dot_out << "\n";
      return 0;
    }
    if (*obstr) {
      auto w = find_char2_witness();
      if (!w) {
        std::cout << "no witness found\n";
        return 2;
      }
      auto q = sym2_quotient(*w);
      auto h = q.homology();
      auto hq = sym2_quotient_homology_Q(*w);
      json out;
      out["schema_version"] = 1;
      out["complex"] = {{"p", w->p}, {"lo", w->lo}, {"dims", w->dims}};
      json diff = json::array();
      for (auto& m : w->diff) {
        json rows = json::array();
        for (int r = 0; r < m.rows; ++r) {
          json row = json::array();
          for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c).v);
          rows.push_back(row);
        }
        diff.push_back(rows);
      }
      out["complex"]["diff"] = diff;
      json hf2, hq2;
      for (auto& [d, v] : h) hf2[std::to_string(d)] = v;
      for (auto& [d, v] : hq) hq2[std::to_string(d)] = v;
      out["sym2_homology_f2"] = hf2;
      out["sym2_homology_q"] = hq2;
      std::cout << out.dump(2) << "\n";
      return h.count(0) && h[0] == 2 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }
  return usage_error("no subcommand");
}
