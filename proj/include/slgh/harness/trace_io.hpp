#ifndef SLGH_HARNESS_TRACE_IO_HPP
#define SLGH_HARNESS_TRACE_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slgh/optimizers.hpp"

namespace slgh::harness {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// %.17g, enough digits to read back the same double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_point(const Vector& x, char sep = ';') {
  std::string out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += sep;
    out += format_double(x[i]);
  }
  return out;
}

inline std::string trace_header(Eigen::Index dim) {
  std::string h = "iter,t,f_true,grad_est_norm,evals";
  for (Eigen::Index i = 0; i < dim; ++i) h += ",x" + std::to_string(i);
  return h;
}

inline void write_trace_csv(const std::vector<IterationRecord>& records, std::ostream& out) {
  const Eigen::Index dim = records.empty() ? 0 : records.front().x.size();
  out << trace_header(dim) << '\n';
  for (const auto& r : records) {
    out << r.k << ',' << format_double(r.t) << ',' << format_double(r.f_true) << ','
        << format_double(r.grad_est_norm) << ',' << r.evals;
    if (r.x.size() != dim) throw IoError("trace rows have inconsistent dimension");
    if (dim) out << ',' << join_point(r.x, ',');
    out << '\n';
  }
}

inline void write_trace_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  write_trace_csv(trace.records, out);
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError(where + ": bad number '" + s + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError(where + ": bad integer '" + s + "'");
  return v;
}

}  // namespace detail

/// Reads what write_trace_csv produced.
inline std::vector<IterationRecord> read_trace_csv(std::istream& in, const std::string& name = "trace") {
  std::string line;
  if (!std::getline(in, line)) throw IoError(name + ": empty file");
  const auto cols = detail::split(line, ',');
  const char* fixed[] = {"iter", "t", "f_true", "grad_est_norm", "evals"};
  for (std::size_t i = 0; i < 5; ++i) {
    if (i >= cols.size() || cols[i] != fixed[i]) throw IoError(name + ": column " + fixed[i] + " not found");
  }
  const std::size_t dim = cols.size() - 5;
  for (std::size_t i = 0; i < dim; ++i) {
    if (cols[5 + i] != "x" + std::to_string(i)) throw IoError(name + ": unexpected column " + cols[5 + i]);
  }
  std::vector<IterationRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    const auto f = detail::split(line, ',');
    if (f.size() != cols.size()) throw IoError(where + ": wrong field count");
    IterationRecord r;
    r.k = static_cast<int>(detail::parse_u64(f[0], where));
    r.t = detail::parse_double(f[1], where);
    r.f_true = detail::parse_double(f[2], where);
    r.grad_est_norm = detail::parse_double(f[3], where);
    r.evals = detail::parse_u64(f[4], where);
    r.x.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) r.x[static_cast<Eigen::Index>(i)] = detail::parse_double(f[5 + i], where);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<IterationRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  return read_trace_csv(in, path);
}

// --------------------------------------------------------------------------
// Summary table.

struct SummaryRow {
  std::string run_id;
  std::string algorithm;
  std::string objective;
  std::uint64_t seed = 0;
  bool ok = true;
  Vector final_x;
  double final_f = 0.0;
  Vector argmin_x;
  double argmin_f = 0.0;
  std::optional<int> iters_to_threshold;
  std::string message;
  double wall_time_s = 0.0;
};

inline const char* summary_header() {
  return "run_id,algorithm,objective,seed,status,final_f,final_x,argmin_f,argmin_x,"
         "iters_to_threshold,message,wall_time_s";
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_summary_row(const SummaryRow& r, std::ostream& out) {
  out << r.run_id << ',' << r.algorithm << ',' << r.objective << ',' << r.seed << ','
      << (r.ok ? "ok" : "failed") << ',';
  if (r.ok) {
    out << format_double(r.final_f) << ',' << join_point(r.final_x) << ',' << format_double(r.argmin_f)
        << ',' << join_point(r.argmin_x) << ',';
  } else {
    out << ",,,,";
  }
  if (r.iters_to_threshold) out << *r.iters_to_threshold;
  out << ',' << csv_quote(r.message) << ',' << format_double(r.wall_time_s) << '\n';
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << summary_header() << '\n';
  for (const auto& r : rows) write_summary_row(r, out);
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  write_summary_csv(rows, out);
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace slgh::harness

#endif  // SLGH_HARNESS_TRACE_IO_HPP
