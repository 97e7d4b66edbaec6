#include "harmonics/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "harmonics/error.hpp"

namespace harmonics::io {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

std::optional<double> parse_double(const std::string& field) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

[[noreturn]] void parse_error(const fs::path& path, std::size_t line,
                              const std::string& what) {
  throw Error(ErrorKind::Parse,
              path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  const char sep = line.find(',') != std::string::npos    ? ','
                   : line.find('\t') != std::string::npos ? '\t'
                                                          : ' ';
  if (sep == ' ') {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) fields.push_back(tok);
    return fields;
  }
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Matrix read_matrix(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    // Matrix rows may mix commas and whitespace.
    std::replace(line.begin(), line.end(), ',', ' ');
    std::vector<double> row;
    std::istringstream tokens(line);
    for (std::string tok; tokens >> tok;) {
      const auto v = parse_double(tok);
      if (!v) parse_error(path, lineno, "not a number: '" + tok + "'");
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_error(path, lineno,
                  "row has " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_error(path, lineno, "no matrix rows found");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out = open_output(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

CohortManifest read_manifest(const fs::path& path) {
  std::ifstream in = open_input(path);
  const fs::path base = path.parent_path();
  CohortManifest manifest;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      std::string head = fields.empty() ? "" : fields.front();
      std::transform(head.begin(), head.end(), head.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (head == "subject_id" || head == "subject" || head == "id") continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      parse_error(path, lineno, "expected subject_id,path[,group]");
    }
    ManifestEntry e;
    e.subject = fields[0];
    e.path = fields[1];
    e.group = fields.size() == 3 ? fields[2] : "";
    if (e.subject.empty()) parse_error(path, lineno, "empty subject id");
    if (!seen.insert(e.subject).second) {
      parse_error(path, lineno, "duplicate subject id '" + e.subject + "'");
    }
    if (e.path.is_relative()) e.path = base / e.path;
    if (!fs::exists(e.path)) {
      parse_error(path, lineno, "file not found: " + e.path.string());
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void write_manifest(const fs::path& path, const CohortManifest& manifest) {
  std::ofstream out = open_output(path);
  out << "subject_id,path,group\n";
  for (const auto& e : manifest.entries) {
    out << e.subject << ',' << e.path.string() << ',' << e.group << '\n';
  }
}

std::vector<AdjacencyMatrix> load_cohort(const CohortManifest& manifest) {
  if (manifest.entries.empty()) {
    throw Error(ErrorKind::EmptyInput, "manifest lists no subjects");
  }
  std::vector<AdjacencyMatrix> cohort;
  cohort.reserve(manifest.entries.size());
  Index n = -1;
  for (const auto& e : manifest.entries) {
    Matrix w = read_matrix(e.path);
    try {
      cohort.emplace_back(std::move(w));
    } catch (const Error& err) {
      throw Error(err.kind(), "subject '" + e.subject + "' (" +
                                  e.path.string() + "): " + err.what());
    }
    if (n < 0) n = cohort.back().size();
    if (cohort.back().size() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "subject '" + e.subject + "' has " +
                      std::to_string(cohort.back().size()) +
                      " nodes, expected " + std::to_string(n));
    }
  }
  return cohort;
}

std::vector<NodeSignal> read_signal_table(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<NodeSignal> signals;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 3) {
      parse_error(path, lineno, "expected subject_id,group,values...");
    }
    std::vector<double> values;
    bool numeric = true;
    for (std::size_t k = 2; k < fields.size(); ++k) {
      const auto v = parse_double(fields[k]);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      parse_error(path, lineno, "non-numeric signal value");
    }
    first = false;
    if (!signals.empty() &&
        static_cast<std::size_t>(signals.front().values.size()) != values.size()) {
      parse_error(path, lineno,
                  "row has " + std::to_string(values.size()) +
                      " values, expected " +
                      std::to_string(signals.front().values.size()));
    }
    if (!seen.insert(fields[0]).second) {
      parse_error(path, lineno, "duplicate subject id '" + fields[0] + "'");
    }
    NodeSignal s;
    s.subject = fields[0];
    s.group = fields[1];
    s.values = Eigen::Map<const Vector>(values.data(),
                                        static_cast<Index>(values.size()));
    signals.push_back(std::move(s));
  }
  if (signals.empty()) parse_error(path, lineno, "no signal rows found");
  return signals;
}

void write_signal_table(const fs::path& path,
                        std::span<const NodeSignal> signals) {
  std::ofstream out = open_output(path);
  out << "subject_id,group";
  const Index n = signals.empty() ? 0 : signals.front().values.size();
  for (Index i = 0; i < n; ++i) out << ",v" << i + 1;
  out << '\n';
  for (const auto& s : signals) {
    out << s.subject << ',' << s.group;
    for (Index i = 0; i < s.values.size(); ++i) {
      out << ',' << format_double(s.values(i));
    }
    out << '\n';
  }
}

}  // namespace harmonics::io
