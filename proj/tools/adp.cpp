#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adp/json_io.hpp"
#include "adp/text.hpp"

namespace {

using namespace adp;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Query load_query(const std::string& path) { return parse_query_or_throw(slurp(path)); }

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw EngineError("cannot write " + out_path);
    out << j.dump(2) << "\n";
  }
}

Heuristic heuristic_from(const std::string& name) {
  if (name == "greedy") return Heuristic::Greedy;
  if (name == "drastic") return Heuristic::Drastic;
  return Heuristic::Auto;
}

// Effective k under the rho convention: k = ceil(rho * |Q(D)|), counted on
// the query after its selections.
long long effective_k(const Query& q, const Instance& d, long long k, double rho) {
  if (k > 0) return k;
  long long count;
  if (q.selections.empty()) {
    count = static_cast<long long>(count_results(q, d));
  } else {
    SelectionResult sel = apply_selection(q, d);
    count = static_cast<long long>(count_results(sel.query, sel.instance));
  }
  return static_cast<long long>(std::ceil(rho * static_cast<double>(count)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregated deletion propagation for self-join-free CQs"};
  app.require_subcommand(1);

  std::string query_path, data_dir, out_path, spec_path;
  std::string mode_name = "count", heuristic_name = "auto";
  long long k = 0;
  double rho = 0.0;
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  auto add_query = [&](CLI::App* c) {
    c->add_option("-q,--query", query_path, "query file (.cq)")->required();
  };
  auto add_data = [&](CLI::App* c) {
    c->add_option("-d,--data", data_dir, "instance directory")->required();
  };
  auto add_k = [&](CLI::App* c) {
    auto* ko = c->add_option("-k", k, "output tuples to remove (>= 1)");
    auto* ro = c->add_option("--rho", rho, "k as a fraction of |Q(D)|, in (0,1]")
                   ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
    ko->excludes(ro);
  };

  CLI::App* decide = app.add_subcommand("decide", "classify a query");
  add_query(decide);
  decide->add_option("-o,--out", out_path, "output file (default stdout)");

  CLI::App* solve = app.add_subcommand("solve", "solve ADP(Q, D, k)");
  add_query(solve);
  add_data(solve);
  add_k(solve);
  solve->add_option("--mode", mode_name, "count|report")
      ->check(CLI::IsMember({"count", "report"}));
  solve->add_option("--heuristic", heuristic_name, "auto|greedy|drastic")
      ->check(CLI::IsMember({"auto", "greedy", "drastic"}));
  solve->add_option("-o,--out", out_path, "output file (default stdout)");

  CLI::App* oracle = app.add_subcommand("oracle", "cross-check solver vs brute force");
  add_query(oracle);
  add_data(oracle);
  add_k(oracle);
  oracle->add_option("-o,--out", out_path, "output file (default stdout)");

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic instance");
  add_query(gen);
  gen->add_option("--spec", spec_path, "zipf spec (JSON)")->required();
  gen->add_option("-o,--out", out_path, "output instance directory")->required();
  gen->add_option("--seed", seed_override, "override the spec's seed")
      ->each([&](const std::string&) { seed_given = true; });

  CLI::App* eval = app.add_subcommand("eval", "count query results");
  add_query(eval);
  add_data(eval);

  CLI::App* bench = app.add_subcommand("bench", "cost/runtime table over rho grid");
  add_query(bench);
  add_data(bench);
  bench->add_option("--heuristic", heuristic_name, "auto|greedy|drastic")
      ->check(CLI::IsMember({"auto", "greedy", "drastic"}));
  bench->add_option("-o,--out", out_path, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (decide->parsed()) {
      Query q = load_query(query_path);
      emit(to_json(q, classify(q)), out_path);
      return 0;
    }

    if (solve->parsed() || oracle->parsed()) {
      Query q = load_query(query_path);
      Instance d = load_instance_dir(q, data_dir);
      if (k <= 0 && rho <= 0.0)
        throw CLI::ValidationError("one of -k/--rho is required");
      long long kk = effective_k(q, d, k, rho);
      Mode mode = mode_name == "report" ? Mode::Report : Mode::Count;

      if (solve->parsed()) {
        AdpResult res =
            compute_adp(q, d, kk, mode, heuristic_from(heuristic_name));
        emit(to_json(q, res), out_path);
        return 0;
      }

      AdpResult solver_res = compute_adp(q, d, kk, Mode::Count);
      Query oq = q;
      Instance od = d;
      if (!q.selections.empty()) {
        SelectionResult sel = apply_selection(q, d);
        oq = sel.query;
        od = sel.instance;
      }
      AdpResult oracle_res = brute_force_adp(oq, od, kk);
      bool agree = solver_res.cost == oracle_res.cost;
      emit({{"solver", to_json(q, solver_res)},
            {"oracle", to_json(oq, oracle_res)},
            {"agree", agree}},
           out_path);
      return (agree || !solver_res.exact) ? 0 : kExitInternal;
    }

    if (gen->parsed()) {
      Query q = load_query(query_path);
      ZipfSpec spec = zipf_spec_from_json(nlohmann::json::parse(slurp(spec_path)));
      if (seed_given) spec.seed = seed_override;
      Instance d = generate_zipf(spec, q);
      write_instance_dir(q, d, out_path);
      return 0;
    }

    if (eval->parsed()) {
      Query q = load_query(query_path);
      Instance d = load_instance_dir(q, data_dir);
      long long count;
      if (q.selections.empty()) {
        count = static_cast<long long>(count_results(q, d));
      } else {
        SelectionResult sel = apply_selection(q, d);
        count = static_cast<long long>(count_results(sel.query, sel.instance));
      }
      emit({{"count", count}}, "");
      return 0;
    }

    if (bench->parsed()) {
      Query q = load_query(query_path);
      Instance d = load_instance_dir(q, data_dir);
      std::ostringstream table;
      table << "query,algorithm,rho,k,cost,removed_outputs,exact,millis\n";
      for (double r : {0.1, 0.25, 0.5, 0.75}) {
        long long kk = effective_k(q, d, 0, r);
        if (kk < 1) kk = 1;
        auto start = std::chrono::steady_clock::now();
        AdpResult res =
            compute_adp(q, d, kk, Mode::Count, heuristic_from(heuristic_name));
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::string algorithm = "exact";
        for (const auto& tag : res.path)
          if (!res.exact && (tag == "greedy" || tag == "drastic")) algorithm = tag;
        std::string rendered = render_query(q);
        std::string quoted = "\"";
        for (char c : rendered) {
          if (c == '"') quoted += "\"\"";
          else quoted.push_back(c);
        }
        quoted.push_back('"');
        table << quoted << "," << algorithm << "," << r << "," << kk
              << "," << res.cost << "," << res.removed_outputs << ","
              << (res.exact ? "true" : "false") << "," << ms << "\n";
      }
      if (out_path.empty()) {
        std::cout << table.str();
      } else {
        std::ofstream out(out_path, std::ios::binary);
        out << table.str();
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
