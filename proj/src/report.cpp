#include "singprop/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "singprop/errors.hpp"

namespace singprop {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string jstr(const std::string& s) { return "\"" + json_escape(s) + "\""; }

std::string jbool(bool b) { return b ? "true" : "false"; }

std::string jvec(Vec2 v) {
  return "[" + format_double(v.x) + ", " + format_double(v.y) + "]";
}

std::string jpoints(const std::vector<Vec2>& pts) {
  std::string out = "[";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) out += ", ";
    out += jvec(pts[k]);
  }
  return out + "]";
}

}  // namespace

std::string arc_csv(const SingularArc& arc) {
  std::ostringstream os;
  os << "s,x1,x2,i,j,t1,t2,diam\n";
  for (const ArcSample& smp : arc.samples) {
    os << format_double(smp.s) << ',' << format_double(smp.x.x) << ','
       << format_double(smp.x.y) << ',' << smp.pair.first << ','
       << smp.pair.second << ',' << format_double(smp.tangent.x) << ','
       << format_double(smp.tangent.y) << ',' << format_double(smp.dplus_diam)
       << '\n';
  }
  return os.str();
}

std::string scan_csv(const ScanResult& scan) {
  std::ostringstream os;
  os << "cx,cy\n";
  for (Vec2 c : scan.flagged)
    os << format_double(c.x) << ',' << format_double(c.y) << '\n';
  return os.str();
}

std::string analyze_json(const std::string& scenario, Vec2 x,
                         const AnalyzeResult& res, const SemiconcaveFn& fn) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema\": " << kReportSchemaVersion << ",\n";
  os << "  \"scenario\": " << jstr(scenario) << ",\n";
  os << "  \"command\": \"analyze\",\n";
  os << "  \"point\": " << jvec(x) << ",\n";
  os << "  \"semiconcavity_constant\": " << format_double(fn.K()) << ",\n";
  os << "  \"gradient_bound\": " << format_double(fn.L()) << ",\n";
  os << "  \"reachable_gradients\": " << jpoints(res.dstar.points) << ",\n";
  os << "  \"superdifferential\": " << jpoints(res.dplus.vertices()) << ",\n";
  os << "  \"diameter\": " << format_double(res.diameter) << ",\n";
  os << "  \"propagation\": " << jbool(res.criterion) << ",\n";
  os << "  \"singular\": " << jbool(res.singular) << "\n";
  os << "}\n";
  return os.str();
}

std::string certificate_json(const std::string& scenario,
                             const ArcCertificate& cert) {
  const SingularArc& arc = cert.arc;
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema\": " << kReportSchemaVersion << ",\n";
  os << "  \"scenario\": " << jstr(scenario) << ",\n";
  os << "  \"arc_id\": " << jstr(cert.arc_id) << ",\n";
  os << "  \"pass\": " << jbool(cert.pass) << ",\n";
  os << "  \"arc\": {\n";
  os << "    \"seed\": " << jvec(arc.seed) << ",\n";
  os << "    \"direction\": " << jvec(arc.q) << ",\n";
  os << "    \"pair\": [" << arc.pair.first << ", " << arc.pair.second
     << "],\n";
  os << "    \"step\": " << format_double(arc.step) << ",\n";
  os << "    \"samples\": " << arc.samples.size() << ",\n";
  os << "    \"length\": " << format_double(arc.length()) << ",\n";
  os << "    \"stop_reason\": " << jstr(to_string(arc.stop_reason)) << "\n";
  os << "  },\n";
  os << "  \"propagation\": {\n";
  os << "    \"initial_angle\": " << format_double(cert.cy.initial_angle)
     << ",\n";
  os << "    \"early_max_angle\": " << format_double(cert.cy.early_max_angle)
     << ",\n";
  os << "    \"min_diam\": " << format_double(cert.cy.min_diam) << ",\n";
  os << "    \"delta_min\": " << format_double(cert.cy.delta_min) << ",\n";
  os << "    \"lipschitz_ratio\": " << format_double(cert.cy.lipschitz_ratio)
     << ",\n";
  os << "    \"pass\": " << jbool(cert.cy.passed) << "\n";
  os << "  },\n";
  os << "  \"graph\": {\n";
  os << "    \"points\": " << cert.gp.xs.size() << ",\n";
  os << "    \"slope_bound\": " << format_double(cert.gp.slope_bound) << ",\n";
  os << "    \"frame_rotation\": [" << format_double(cert.gp.frame.rotation[0])
     << ", " << format_double(cert.gp.frame.rotation[1]) << ", "
     << format_double(cert.gp.frame.rotation[2]) << ", "
     << format_double(cert.gp.frame.rotation[3]) << "],\n";
  os << "    \"frame_origin\": " << jvec(cert.gp.frame.origin) << "\n";
  os << "  },\n";
  os << "  \"dc\": {\n";
  os << "    \"offset\": " << format_double(cert.dc.offset) << ",\n";
  os << "    \"reconstruction_error\": "
     << format_double(cert.dcm.reconstruction_error) << ",\n";
  os << "    \"min_second_diff\": " << format_double(cert.dcm.min_second_diff)
     << ",\n";
  os << "    \"max_slope\": " << format_double(cert.dcm.max_slope) << ",\n";
  os << "    \"slope_budget\": " << format_double(cert.dcm.slope_budget)
     << ",\n";
  os << "    \"pass\": " << jbool(cert.dcm.ok) << "\n";
  os << "  },\n";
  os << "  \"support_selection\": {\n";
  os << "    \"delta\": " << format_double(cert.s3.delta) << ",\n";
  os << "    \"lipschitz_bound\": " << format_double(cert.s3.lipschitz_bound)
     << ",\n";
  os << "    \"levels\": " << cert.s3.classification.levels.size() << ",\n";
  os << "    \"residual\": " << format_double(cert.s3.selection_residual)
     << ",\n";
  os << "    \"pass\": " << jbool(cert.selection_ok) << "\n";
  os << "  },\n";
  os << "  \"turn\": {\n";
  os << "    \"coarse\": " << format_double(cert.cert.turn_coarse) << ",\n";
  os << "    \"fine\": " << format_double(cert.cert.turn_fine) << ",\n";
  os << "    \"tol\": " << format_double(cert.cert.tol) << ",\n";
  os << "    \"pass\": " << jbool(cert.cert.converged) << "\n";
  os << "  }\n";
  os << "}\n";
  return os.str();
}

std::string summary_json(const std::string& scenario,
                         const std::string& command,
                         const std::vector<SummaryEntry>& arcs, bool pass,
                         const std::string& message) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema\": " << kReportSchemaVersion << ",\n";
  os << "  \"scenario\": " << jstr(scenario) << ",\n";
  os << "  \"command\": " << jstr(command) << ",\n";
  os << "  \"pass\": " << jbool(pass) << ",\n";
  os << "  \"message\": " << jstr(message) << ",\n";
  os << "  \"arc_count\": " << arcs.size() << ",\n";
  os << "  \"arcs\": [";
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    os << (k ? ",\n    {" : "\n    {");
    os << "\"arc_id\": " << jstr(arcs[k].arc_id) << ", \"pass\": "
       << jbool(arcs[k].pass) << ", \"files\": [";
    for (std::size_t f = 0; f < arcs[k].files.size(); ++f) {
      if (f) os << ", ";
      os << jstr(arcs[k].files[f]);
    }
    os << "]}";
  }
  os << (arcs.empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
  return os.str();
}

void write_file(const std::filesystem::path& path,
                const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failure on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

}  // namespace singprop
