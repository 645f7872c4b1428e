#include "jla/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace jla {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_vec(std::ostream& out, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << fmt(v[i]);
}

RunStatus status_from_string(const std::string& s) {
  if (s == "completed") return RunStatus::completed;
  if (s == "diverged") return RunStatus::diverged;
  if (s == "hit_boundary") return RunStatus::hit_boundary;
  throw std::runtime_error("trace: unknown status '" + s + "'");
}

std::vector<double> split_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::diverged: return "diverged";
    case RunStatus::hit_boundary: return "hit_boundary";
  }
  return "unknown";
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  const int n = trace.n_joints;
  out << "# jla trace v1\n";
  out << "# units: t s, q rad, q_dot rad/s, q_d rad, xi dimensionless, "
         "tau N*m, fext N, V J, Vdot J/s, margin rad\n";
  out << "# n_joints: " << n << '\n';
  out << "# status: " << to_string(trace.status) << '\n';
  out << "# status_time: " << fmt(trace.status_time) << '\n';
  out << "# limits_min_rad:";
  for (Eigen::Index i = 0; i < trace.limits_min.size(); ++i) {
    out << ' ' << fmt(trace.limits_min[i]);
  }
  out << '\n';
  out << "# limits_max_rad:";
  for (Eigen::Index i = 0; i < trace.limits_max.size(); ++i) {
    out << ' ' << fmt(trace.limits_max[i]);
  }
  out << '\n';

  out << 't';
  auto cols = [&](const char* stem) {
    for (int i = 0; i < n; ++i) out << ',' << stem << '_' << i;
  };
  cols("q");
  cols("qdot");
  cols("qd");
  cols("xi");
  cols("xitilde");
  cols("xitildedot");
  cols("tau_raw");
  cols("tau");
  out << ",fext_x,fext_y,V,Vdot_analytic,Vdot_numeric";
  cols("margin");
  out << ",saturated\n";

  for (const TraceRecord& r : trace.records) {
    out << fmt(r.t);
    append_vec(out, r.q);
    append_vec(out, r.q_dot);
    append_vec(out, r.q_d);
    append_vec(out, r.xi);
    append_vec(out, r.xi_tilde);
    append_vec(out, r.xi_tilde_dot);
    append_vec(out, r.tau_raw);
    append_vec(out, r.tau);
    out << ',' << fmt(r.f_ext.x()) << ',' << fmt(r.f_ext.y());
    out << ',' << fmt(r.V) << ',' << fmt(r.V_dot_analytic) << ','
        << fmt(r.V_dot_numeric);
    append_vec(out, r.margin);
    out << ',' << (r.saturated ? 1 : 0) << '\n';
  }
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trace: cannot open " + path);
  write_trace_csv(trace, out);
}

SimTrace read_trace_csv(std::istream& in) {
  SimTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::stringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "n_joints:") {
        ss >> trace.n_joints;
      } else if (key == "status:") {
        std::string s;
        ss >> s;
        trace.status = status_from_string(s);
      } else if (key == "status_time:") {
        ss >> trace.status_time;
      } else if (key == "limits_min_rad:" || key == "limits_max_rad:") {
        std::vector<double> vals;
        double v;
        while (ss >> v) vals.push_back(v);
        Vec lim = Eigen::Map<Vec>(vals.data(), vals.size());
        (key == "limits_min_rad:" ? trace.limits_min : trace.limits_max) = lim;
      }
      continue;
    }
    if (!header_seen) {  // column-name row
      header_seen = true;
      continue;
    }
    const std::vector<double> row = split_row(line);
    const int n = trace.n_joints;
    if (static_cast<int>(row.size()) != 9 * n + 7) {
      throw std::runtime_error("trace: malformed row width");
    }
    TraceRecord r;
    int k = 0;
    auto take_vec = [&](Vec& v) {
      v.resize(n);
      for (int i = 0; i < n; ++i) v[i] = row[k++];
    };
    r.t = row[k++];
    take_vec(r.q);
    take_vec(r.q_dot);
    take_vec(r.q_d);
    take_vec(r.xi);
    take_vec(r.xi_tilde);
    take_vec(r.xi_tilde_dot);
    take_vec(r.tau_raw);
    take_vec(r.tau);
    r.f_ext.x() = row[k++];
    r.f_ext.y() = row[k++];
    r.V = row[k++];
    r.V_dot_analytic = row[k++];
    r.V_dot_numeric = row[k++];
    take_vec(r.margin);
    r.saturated = row[k++] != 0;
    trace.records.push_back(std::move(r));
  }
  return trace;
}

SimTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("trace: cannot open " + path);
  return read_trace_csv(in);
}

}  // namespace jla
