#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "singprop/oracle.hpp"
#include "singprop/pipeline.hpp"

namespace singprop {

inline constexpr int kReportSchemaVersion = 1;

// Fixed 17-significant-digit rendering; reruns are byte-identical.
std::string format_double(double v);

// Columns: s, x1, x2, i, j, t1, t2, diam.
std::string arc_csv(const SingularArc& arc);

// Columns: cx, cy.
std::string scan_csv(const ScanResult& scan);

std::string analyze_json(const std::string& scenario, Vec2 x,
                         const AnalyzeResult& res, const SemiconcaveFn& fn);

std::string certificate_json(const std::string& scenario,
                             const ArcCertificate& cert);

struct SummaryEntry {
  std::string arc_id;
  bool pass = false;
  std::vector<std::string> files;
};

std::string summary_json(const std::string& scenario,
                         const std::string& command,
                         const std::vector<SummaryEntry>& arcs, bool pass,
                         const std::string& message);

// Writes content to path via a temporary file and rename, so failed runs
// leave no partial file. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace singprop
