// Command-line driver: census runs against class-number predictions,
// verification suites, averaging experiments, class-number queries,
// character-sum diagnostics, and the per-prime parameter cache.
//
// Exit codes: 0 = success, 1 = mathematical mismatch, 2 = usage or I/O error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "klein4/klein4.hpp"

using namespace klein4;
using nlohmann::json;

namespace {

struct GlobalOptions {
  int threads = 1;
  std::string cache_path;
};

// Serves the table from the cache when one is configured, then folds any
// newly computed primes back into the cache file.
SigmaTable acquire_table(u64 x_max, const GlobalOptions& g) {
  if (g.cache_path.empty()) return build_sigma_table(x_max, g.threads);
  SigmaTable table = load_sigma_table(x_max, g.cache_path, g.threads);
  merge_sigma_cache(table, g.cache_path);
  return table;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

std::vector<CensusRecord> census_rows(const SigmaTable& table) {
  std::vector<CensusRecord> rows;
  rows.reserve(table.entries.size());
  for (const SigmaEntry& e : table.entries) {
    u64 p = e.p;
    i64 d = (p % 4 == 1) ? -4 * static_cast<i64>(p) : -static_cast<i64>(p);
    i64 h = class_number(d);
    i64 predicted =
        predicted_psi(p, (p % 4 == 3) ? h : 0, (p % 4 == 1) ? h : 0);
    i64 observed = static_cast<i64>(e.psi());
    rows.push_back({p, p % 8, d, h, observed, predicted, observed == predicted});
  }
  return rows;
}

void emit_census_csv(const std::vector<CensusRecord>& rows, std::ostream& out) {
  out << "p,residue_mod_8,discriminant,class_number,psi_observed,"
         "psi_predicted,match\n";
  for (const CensusRecord& r : rows)
    out << r.p << ',' << r.residue_mod_8 << ',' << r.discriminant << ','
        << r.class_number_used << ',' << r.psi_observed << ','
        << r.psi_predicted << ',' << (r.match ? "true" : "false") << '\n';
}

void emit_census_json(const std::vector<CensusRecord>& rows,
                      std::ostream& out) {
  json arr = json::array();
  for (const CensusRecord& r : rows)
    arr.push_back({{"p", r.p},
                   {"residue_mod_8", r.residue_mod_8},
                   {"discriminant", r.discriminant},
                   {"class_number", r.class_number_used},
                   {"psi_observed", r.psi_observed},
                   {"psi_predicted", r.psi_predicted},
                   {"match", r.match}});
  out << arr.dump(2) << '\n';
}

int run_census(u64 max_p, const std::string& out_path,
               const std::string& format, const GlobalOptions& g) {
  SigmaTable table = acquire_table(max_p + 1, g);
  std::vector<CensusRecord> rows = census_rows(table);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (format == "json")
    emit_census_json(rows, out);
  else
    emit_census_csv(rows, out);
  for (const CensusRecord& r : rows)
    if (!r.match) {
      std::cerr << "mismatch at p=" << r.p << ": observed " << r.psi_observed
                << ", predicted " << r.psi_predicted << '\n';
      return 1;
    }
  return 0;
}

void print_report_lines(const std::string& suite, const CheckReport& rep,
                        std::size_t& failures) {
  bool ok = rep.all_pass;
  std::cout << "suite=" << suite << " p=" << rep.p << " pass=" << (ok ? 1 : 0)
            << '\n';
  if (!ok) {
    ++failures;
    for (const CheckItem& it : rep.items)
      if (it.applicable && !it.pass)
        std::cout << "suite=" << suite << " p=" << rep.p
                  << " item=" << it.name << " pass=0 detail=\"" << it.detail
                  << "\"\n";
  }
}

int run_verify(const std::string& suite, u64 max_p, const GlobalOptions& g) {
  std::vector<u64> ps = admissible_primes_below(max_p + 1);
  std::size_t failures = 0;
  std::size_t ran = 0;
  for (u64 p : ps) {
    if (suite == "lemma25") {
      u64 count = 0;
      bool pass = true;
      try {
        count = conjugate_curve_count(p);
      } catch (const std::logic_error&) {
        pass = false;
      }
      std::cout << "suite=lemma25 p=" << p << " count=" << count
                << " pass=" << (pass ? 1 : 0) << '\n';
      if (!pass) ++failures;
      ++ran;
      continue;
    }
    if (suite == "structure") {
      if (p % 4 != 3) continue;
      print_report_lines(suite, structural_props(p), failures);
      ++ran;
      continue;
    }
    CensusSets cs = build_sets(p);
    if (suite == "section3") {
      print_report_lines(suite, verify_census_counts(cs), failures);
      ++ran;
    } else {  // maps
      print_report_lines(suite, verify_pair_class_map(cs), failures);
      if (p % 4 == 3) print_report_lines(suite, verify_nu_transfer(cs), failures);
      ++ran;
    }
  }
  std::cout << "suite=" << suite << " primes=" << ran
            << " failures=" << failures << '\n';
  return failures == 0 ? 0 : 1;
}

const char* mode_name(AverageMode mode) {
  return mode == AverageMode::integer_parameters ? "integer" : "rational";
}

void emit_average_csv(const AverageReport& rep, std::ostream& out) {
  out << "X,N,mode,sum_fast,average,asymptotic,ratio\n"
      << rep.X << ',' << rep.N << ',' << mode_name(rep.mode) << ','
      << rep.sum_fast << ',' << std::setprecision(12) << rep.average << ','
      << rep.asymptotic << ',' << rep.ratio << '\n';
}

void emit_average_json(const AverageReport& rep, std::ostream& out) {
  json j{{"X", rep.X},
         {"N", rep.N},
         {"mode", mode_name(rep.mode)},
         {"sum_fast", rep.sum_fast},
         {"average", rep.average},
         {"asymptotic", rep.asymptotic},
         {"ratio", rep.ratio},
         {"approximate", rep.approximate}};
  if (rep.sum_exact) j["sum_exact"] = *rep.sum_exact;
  out << j.dump(2) << '\n';
}

int run_average(const std::string& mode_str, u64 X, u64 N, bool check_exact,
                const std::string& out_path, const std::string& format,
                const GlobalOptions& g) {
  AverageMode mode = (mode_str == "integer") ? AverageMode::integer_parameters
                                             : AverageMode::rational_parameters;
  SigmaTable table = acquire_table(X, g);
  AverageReport rep = average_experiment(table, mode, N, check_exact);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (format == "json")
    emit_average_json(rep, out);
  else
    emit_average_csv(rep, out);
  if (rep.sum_exact && *rep.sum_exact != rep.sum_fast) {
    std::cerr << "reorder identity violated: exact " << *rep.sum_exact
              << " != fast " << rep.sum_fast << '\n';
    return 1;
  }
  return 0;
}

int run_classnum(i64 d, bool via_l, u64 U) {
  i64 h = class_number(d);
  std::cout << "h(" << d << ") = " << h << '\n';
  if (!via_l) return 0;
  LEstimate est = class_number_via_L(d, U);
  std::cout << std::setprecision(12) << "L-estimate = " << est.approx
            << " (error bound " << est.error_bound << ")\n"
            << "rounded = " << est.rounded() << '\n';
  if (est.rounded() != h) {
    std::cerr << "analytic estimate rounds to " << est.rounded()
              << ", expected " << h << '\n';
    return 1;
  }
  return 0;
}

int run_charsum(u64 X, u64 U, const std::string& out_path) {
  CharSums s = char_sums(X, U);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "X,U,s1,s3,s7\n"
      << s.X << ',' << s.U << ',' << std::setprecision(12) << s.s1 << ','
      << s.s3 << ',' << s.s7 << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superspecial genus-2 census, class numbers, and averaged "
               "reduction counts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");

  GlobalOptions g;
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--cache", g.cache_path,
                 "Per-prime parameter cache file (read and updated)");

  auto at_least = [](u64 min) {
    return CLI::Validator(
        [min](std::string& s) -> std::string {
          u64 v = 0;
          try {
            v = std::stoull(s);
          } catch (...) {
            return "value must be a nonnegative integer";
          }
          if (v < min)
            return "value must be at least " + std::to_string(min);
          return {};
        },
        "at least " + std::to_string(min));
  };

  auto* census = app.add_subcommand(
      "census", "Compare per-prime superspecial counts with predictions");
  census->fallthrough();
  u64 census_max_p = 0;
  std::string census_out, census_format{"csv"};
  census->add_option("--max-p", census_max_p, "Largest prime to include")
      ->required()
      ->check(at_least(4));
  census->add_option("--out", census_out, "Output file (default stdout)");
  census->add_option("--format", census_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->fallthrough();
  std::string verify_suite;
  u64 verify_max_p = 0;
  verify
      ->add_option("--suite", verify_suite,
                   "section3, maps, structure, or lemma25")
      ->required()
      ->check(CLI::IsMember({"section3", "maps", "structure", "lemma25"}));
  verify->add_option("--max-p", verify_max_p, "Largest prime to include")
      ->required()
      ->check(at_least(5));

  auto* average = app.add_subcommand(
      "average", "Averaged superspecial-reduction counting experiment");
  average->fallthrough();
  std::string avg_mode, avg_out, avg_format{"csv"};
  u64 avg_X = 0, avg_N = 0;
  bool avg_check = false;
  average->add_option("--mode", avg_mode, "integer or rational")
      ->required()
      ->check(CLI::IsMember({"integer", "rational"}));
  average->add_option("--X", avg_X, "Prime cutoff")
      ->required()
      ->check(at_least(5));
  average->add_option("--N", avg_N, "Parameter cutoff")
      ->required()
      ->check(at_least(5));
  average->add_flag("--check-exact", avg_check,
                    "Also run the brute-force oracle and compare");
  average->add_option("--out", avg_out, "Output file (default stdout)");
  average->add_option("--format", avg_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* classnum =
      app.add_subcommand("classnum", "Class number of a negative discriminant");
  classnum->fallthrough();
  i64 cn_d = 0;
  bool cn_via_l = false;
  u64 cn_U = 0;
  classnum->add_option("--d", cn_d, "Discriminant (negative)")->required();
  classnum->add_flag("--via-l", cn_via_l,
                     "Also evaluate the analytic estimate and compare");
  classnum->add_option("--U", cn_U,
                       "Truncation for the analytic estimate (default |d|^2)");

  auto* charsum =
      app.add_subcommand("charsum", "Character-sum diagnostics by residue class");
  charsum->fallthrough();
  u64 cs_X = 0, cs_U = 0;
  std::string cs_out;
  charsum->add_option("--X", cs_X, "Prime cutoff")
      ->required()
      ->check(at_least(5));
  charsum->add_option("--U", cs_U, "Truncation (default X^(3/4))");
  charsum->add_option("--out", cs_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (census->parsed())
      return run_census(census_max_p, census_out, census_format, g);
    if (verify->parsed()) return run_verify(verify_suite, verify_max_p, g);
    if (average->parsed())
      return run_average(avg_mode, avg_X, avg_N, avg_check, avg_out,
                         avg_format, g);
    if (classnum->parsed()) return run_classnum(cn_d, cn_via_l, cn_U);
    if (charsum->parsed()) return run_charsum(cs_X, cs_U, cs_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "mathematical mismatch: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
