#pragma once

// Command-line front end. run_cli() takes explicit streams so the whole
// surface can be driven in-process by tests.
//
// Exit codes: 0 ok, 1 verification violation, 2 usage/domain error,
//             3 I/O error, 4 corrupt cache.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "binthr/analysis.hpp"
#include "binthr/error.hpp"
#include "binthr/fastpath.hpp"
#include "binthr/io.hpp"
#include "binthr/sequence.hpp"

namespace binthr::cli {

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kUsage = 2,
  kIoError = 3,
  kCorruptCache = 4,
};

inline constexpr std::size_t kMaxListedViolations = 20;

namespace detail {

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline RangeOptions range_options(unsigned threads, std::ostream& err) {
  RangeOptions opts;
  opts.threads = threads;
  auto mutex = std::make_shared<std::mutex>();
  opts.progress = [mutex, &err](std::size_t done, std::size_t total) {
    if (total < kProgressInterval) return;
    std::lock_guard lock(*mutex);
    err << "progress: " << done << '/' << total << " rows\n";
  };
  return opts;
}

// "-" means the command's standard output stream.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoFailure("cannot open '" + path + "' for writing");
  file << content;
  file.flush();
  if (!file) throw IoFailure("write to '" + path + "' failed");
}

inline void check_range(Index from, Index to) {
  if (from < 3) throw DomainError("n must be ≥ 3");
  if (from > to) {
    throw DomainError("inverted range: --from " + std::to_string(from) + " > --to " +
                      std::to_string(to));
  }
}

inline std::string format_residuals(std::span<const SequenceRecord> records) {
  const auto rows = residuals(records);
  std::string text = "n,f,approx,residual\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.6f,%.6f\n", static_cast<long long>(r.n),
                  static_cast<long long>(r.f), r.approx, r.residual);
    text += buf;
  }
  const auto s = summarize(rows);
  std::snprintf(buf, sizeof buf, "# min=%.6f max=%.6f mean=%.6f\n", s.min_residual,
                s.max_residual, s.mean_residual);
  text += buf;
  return text;
}

inline std::vector<CheckId> parse_checks(const std::string& list) {
  std::vector<CheckId> ids;
  if (list == "all") return {std::begin(kAllChecks), std::end(kAllChecks)};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) ids.push_back(parse_check_id(item));
  if (ids.empty()) throw UsageError("no checks selected");
  return ids;
}

inline void print_report(const VerificationReport& rep, std::ostream& out) {
  out << to_string(rep.id) << ": " << rep.checked << " checked, " << rep.violations.size()
      << " violations\n";
  if (rep.checked > 0) out << "  range: n=" << rep.n_start << ".." << rep.n_end << '\n';
  for (std::size_t i = 0; i < rep.violations.size() && i < kMaxListedViolations; ++i) {
    out << "  counterexample n=" << rep.violations[i].n << ": " << rep.violations[i].detail << '\n';
  }
  if (rep.violations.size() > kMaxListedViolations) {
    out << "  ... " << rep.violations.size() - kMaxListedViolations << " more\n";
  }
  for (const auto& note : rep.notes) out << "  note: " << note << '\n';
}

}  // namespace detail

inline int cmd_compute(Index n, const std::string& seq, std::ostream& out) {
  if (n < 3) throw DomainError("n must be ≥ 3");
  const auto table = shared_table(n);
  std::string line;
  if (seq == "f" || seq == "both") line += "f(" + std::to_string(n) + ")=" + std::to_string(compute_f(n, *table));
  if (seq == "L" || seq == "both") {
    if (!line.empty()) line += ' ';
    line += "L(" + std::to_string(n) + ")=" + std::to_string(compute_L(n, *table));
  }
  out << line << '\n';
  return kOk;
}

inline int cmd_table(Index from, Index to, const std::string& path, unsigned threads,
                     std::ostream& out, std::ostream& err) {
  detail::check_range(from, to);
  const auto records = compute_range(from, to, detail::range_options(threads, err));
  std::ostringstream text;
  write_cache(text, records);
  detail::emit(path, text.str(), out);
  return kOk;
}

inline int cmd_verify(Index max_n, const std::string& checks, unsigned threads, std::ostream& out,
                      std::ostream& err) {
  const auto ids = detail::parse_checks(checks);
  if (max_n < 5) throw DomainError("max-n must be ≥ 5");
  const auto reports = verify_many(ids, 3, max_n, detail::range_options(threads, err));
  bool clean = true;
  for (const auto& rep : reports) {
    detail::print_report(rep, out);
    clean = clean && rep.passed();
  }
  return clean ? kOk : kViolation;
}

inline int cmd_residuals(Index from, Index to, const std::string& path, unsigned threads,
                         std::ostream& out, std::ostream& err) {
  detail::check_range(from, to);
  const auto records = compute_range(from, to, detail::range_options(threads, err));
  detail::emit(path, detail::format_residuals(records), out);
  return kOk;
}

inline int cmd_export(const std::string& seq, Index from, Index to, const std::string& path,
                      unsigned threads, std::ostream& out, std::ostream& err) {
  detail::check_range(from, to);
  const auto records = compute_range(from, to, detail::range_options(threads, err));
  std::ostringstream text;
  write_bfile(text, records, seq == "f" ? ThresholdKind::F : ThresholdKind::L);
  detail::emit(path, text.str(), out);
  return kOk;
}

// Extends the cache in place. A corrupt cache is left untouched.
inline int cmd_resume(const std::string& path, Index to, unsigned threads, std::ostream& out,
                      std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw detail::IoFailure("cannot open cache '" + path + "'");
  auto records = read_cache(in);
  in.close();

  std::vector<SequenceRecord> fresh;
  if (records.empty()) {
    if (to >= 3) fresh = compute_range(3, to, detail::range_options(threads, err));
  } else if (records.back().n < to) {
    const auto table = shared_table(to);
    // A wrong seed would silently poison every appended row.
    const auto& last = records.back();
    if (compute_record(last.n, *table) != last) {
      throw CacheError("cache: final row n=" + std::to_string(last.n) + " does not match recomputation");
    }
    fresh = extend_range(last, to, *table);
  }
  if (fresh.empty()) {
    out << "cache already covers n=" << to << "; nothing to do\n";
    return kOk;
  }

  std::ofstream file(path, std::ios::binary | std::ios::app);
  if (!file) throw detail::IoFailure("cannot open cache '" + path + "' for appending");
  write_cache_rows(file, fresh);
  file.flush();
  if (!file) throw detail::IoFailure("append to cache '" + path + "' failed");
  out << "appended " << fresh.size() << " rows (n=" << fresh.front().n << ".." << fresh.back().n
      << ")\n";
  return kOk;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thresholds of binomial coefficients: f(n) and L(n)", "binthr"};
  app.require_subcommand(1);

  Index n = 0, from = 3, to = 0, max_n = 0;
  std::string seq = "both", out_path = "-", checks = "all", bfile = "-", cache;
  unsigned threads = 0;
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
  };

  auto* compute = app.add_subcommand("compute", "Print f(n) and/or L(n)");
  compute->add_option("--n", n, "Index n (>= 3)")->required();
  compute->add_option("--seq", seq, "f, L or both")->check(CLI::IsMember({"f", "L", "both"}));
  add_threads(compute);

  auto* table = app.add_subcommand("table", "Emit the cache CSV for a range");
  table->add_option("--from", from, "First n")->default_val(3);
  table->add_option("--to", to, "Last n")->required();
  table->add_option("--out", out_path, "Output path or - for stdout");
  add_threads(table);

  auto* verify_cmd = app.add_subcommand("verify", "Check the structural theorems up to max-n");
  verify_cmd->add_option("--max-n", max_n, "Largest n to check (>= 5)")->required();
  verify_cmd->add_option("--checks", checks, "Comma list of T1.1,T1.2,T1.3,C1.1,T1.4,T1.5,R1.1,L2.1,L2.2 or all");
  add_threads(verify_cmd);

  auto* resid = app.add_subcommand("residuals", "f(n) against its asymptotic form, as CSV");
  resid->add_option("--from", from, "First n")->default_val(3);
  resid->add_option("--to", to, "Last n")->required();
  resid->add_option("--out", out_path, "Output path or - for stdout");
  add_threads(resid);

  auto* exp = app.add_subcommand("export", "Write one sequence as a b-file");
  exp->add_option("--seq", seq, "f or L")->required()->check(CLI::IsMember({"f", "L"}));
  exp->add_option("--from", from, "First n")->default_val(3);
  exp->add_option("--to", to, "Last n")->required();
  exp->add_option("--bfile", bfile, "Output path or - for stdout");
  add_threads(exp);

  auto* resume = app.add_subcommand("resume", "Extend a cache file in place");
  resume->add_option("--cache", cache, "Cache CSV path")->required();
  resume->add_option("--to", to, "Last n to cover")->required();
  add_threads(resume);

  std::vector<const char*> argv;
  argv.push_back("binthr");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compute) return cmd_compute(n, seq, out);
    if (*table) return cmd_table(from, to, out_path, threads, out, err);
    if (*verify_cmd) return cmd_verify(max_n, checks, threads, out, err);
    if (*resid) return cmd_residuals(from, to, out_path, threads, out, err);
    if (*exp) return cmd_export(seq, from, to, bfile, threads, out, err);
    if (*resume) return cmd_resume(cache, to, threads, out, err);
  } catch (const CacheError& e) {
    err << "error: " << e.what() << '\n';
    return kCorruptCache;
  } catch (const detail::IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace binthr::cli
