#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "harmonics/analysis.hpp"
#include "harmonics/graph.hpp"

namespace harmonics::io {

/// Plain-text numeric matrix: one row per line, fields separated by commas
/// and/or whitespace. Blank lines and lines starting with '#' are skipped.
/// Parse errors carry "file:line:" diagnostics.
Matrix read_matrix(const std::filesystem::path& path);

/// Writes with 17 significant digits so every double round-trips exactly.
void write_matrix(const std::filesystem::path& path, const Matrix& m);

std::string format_double(double value);

struct ManifestEntry {
  std::string subject;
  std::filesystem::path path;
  std::string group;
};

/// Delimited table "subject_id,path,group" (comma or tab; optional header).
/// Relative paths resolve against the manifest's directory. Subject ids must
/// be unique and every referenced file must exist.
struct CohortManifest {
  std::vector<ManifestEntry> entries;
};

CohortManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    const CohortManifest& manifest);

/// Loads and validates every adjacency matrix; errors name the subject.
std::vector<AdjacencyMatrix> load_cohort(const CohortManifest& manifest);

/// "subject_id,group,v_1,...,v_n" per line with an optional header line.
std::vector<NodeSignal> read_signal_table(const std::filesystem::path& path);
void write_signal_table(const std::filesystem::path& path,
                        std::span<const NodeSignal> signals);

/// Splits on commas if present, otherwise tabs, otherwise runs of whitespace.
std::vector<std::string> split_fields(const std::string& line);

}  // namespace harmonics::io
