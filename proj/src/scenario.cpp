#include "singprop/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "singprop/errors.hpp"

namespace singprop {

namespace {

std::string trim(std::string_view sv) {
  const char* ws = " \t\r\n";
  auto b = sv.find_first_not_of(ws);
  if (b == std::string_view::npos) return "";
  auto e = sv.find_last_not_of(ws);
  return std::string(sv.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw ParseError(os.str());
}

// Reads space-separated fields from a key's value, insisting that the whole
// value is consumed.
class FieldReader {
 public:
  FieldReader(const std::string& value, const std::string& origin, int line)
      : iss_(value), origin_(origin), line_(line) {}

  double number() {
    double v = 0.0;
    if (!(iss_ >> v)) fail(origin_, line_, "expected a number");
    return v;
  }

  long long integer() {
    long long v = 0;
    if (!(iss_ >> v)) fail(origin_, line_, "expected an integer");
    return v;
  }

  std::uint64_t unsigned64() {
    std::uint64_t v = 0;
    if (!(iss_ >> v)) fail(origin_, line_, "expected an unsigned integer");
    return v;
  }

  void done() {
    std::string rest;
    if (iss_ >> rest) fail(origin_, line_, "trailing content '" + rest + "'");
  }

 private:
  std::istringstream iss_;
  const std::string& origin_;
  int line_;
};

}  // namespace

Scenario parse_scenario_text(std::string_view text,
                             const std::string& origin) {
  Scenario sc;
  bool have_domain = false;
  bool in_branch = false;
  std::vector<Term> terms;
  std::set<std::string> seen;
  int branch_line = 0;

  auto once = [&](const std::string& key, int line) {
    if (!seen.insert(key).second) fail(origin, line, "duplicate key " + key);
  };

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line == "branch") {
      if (in_branch) fail(origin, line_no, "nested branch block");
      in_branch = true;
      terms.clear();
      branch_line = line_no;
      continue;
    }
    if (line == "end") {
      if (!in_branch) fail(origin, line_no, "end without branch");
      try {
        sc.branches.emplace_back(terms);
      } catch (const std::invalid_argument& e) {
        fail(origin, line_no, e.what());
      }
      in_branch = false;
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    FieldReader fields(value, origin, line_no);

    if (in_branch) {
      if (key != "term")
        fail(origin, line_no, "only term lines allowed inside branch");
      long long i = fields.integer();
      long long j = fields.integer();
      double c = fields.number();
      fields.done();
      if (i < 0 || j < 0)
        fail(origin, line_no, "negative exponent");
      terms.push_back(Term{static_cast<int>(i), static_cast<int>(j), c});
      continue;
    }

    if (key == "name") {
      once(key, line_no);
      if (value.empty()) fail(origin, line_no, "empty name");
      sc.name = value;
    } else if (key == "domain") {
      once(key, line_no);
      sc.domain.xmin = fields.number();
      sc.domain.xmax = fields.number();
      sc.domain.ymin = fields.number();
      sc.domain.ymax = fields.number();
      fields.done();
      if (!(sc.domain.xmin < sc.domain.xmax) ||
          !(sc.domain.ymin < sc.domain.ymax))
        fail(origin, line_no, "empty domain");
      have_domain = true;
    } else if (key == "seed") {
      Vec2 s;
      s.x = fields.number();
      s.y = fields.number();
      fields.done();
      sc.seeds.push_back(s);
    } else if (key == "step") {
      once(key, line_no);
      sc.options.step = fields.number();
      fields.done();
      if (!(sc.options.step > 0)) fail(origin, line_no, "step must be > 0");
    } else if (key == "max_len") {
      once(key, line_no);
      sc.options.max_len = fields.number();
      fields.done();
      if (!(sc.options.max_len > 0))
        fail(origin, line_no, "max_len must be > 0");
    } else if (key == "tol_active") {
      once(key, line_no);
      sc.options.tol_active = fields.number();
      fields.done();
      if (!(sc.options.tol_active > 0))
        fail(origin, line_no, "tol_active must be > 0");
    } else if (key == "delta_min") {
      once(key, line_no);
      sc.options.delta_min = fields.number();
      fields.done();
      if (!(sc.options.delta_min > 0))
        fail(origin, line_no, "delta_min must be > 0");
    } else if (key == "turn_tol") {
      once(key, line_no);
      sc.options.turn_tol = fields.number();
      fields.done();
      if (!(sc.options.turn_tol > 0))
        fail(origin, line_no, "turn_tol must be > 0");
    } else if (key == "grid_h") {
      once(key, line_no);
      sc.options.grid_h = fields.number();
      fields.done();
      if (!(sc.options.grid_h > 0))
        fail(origin, line_no, "grid_h must be > 0");
    } else if (key == "t_probe") {
      once(key, line_no);
      sc.options.t_probe = fields.number();
      fields.done();
      if (!(sc.options.t_probe > 0))
        fail(origin, line_no, "t_probe must be > 0");
    } else if (key == "grid_n") {
      once(key, line_no);
      long long n = fields.integer();
      fields.done();
      if (n < 16) fail(origin, line_no, "grid_n must be >= 16");
      sc.options.grid_n = static_cast<int>(n);
    } else if (key == "oracle_seed") {
      once(key, line_no);
      sc.options.oracle_seed = fields.unsigned64();
      fields.done();
    } else {
      fail(origin, line_no, "unknown key " + key);
    }
  }

  if (in_branch) fail(origin, branch_line, "unterminated branch block");
  if (sc.name.empty()) fail(origin, line_no, "missing name");
  if (!have_domain) fail(origin, line_no, "missing domain");
  if (sc.branches.empty()) fail(origin, line_no, "no branches");
  for (const Vec2& s : sc.seeds)
    if (!sc.domain.contains(s))
      fail(origin, line_no, "seed outside domain");
  return sc;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return parse_scenario_text(buf.str(), path.string());
}

SemiconcaveFn make_fn(const Scenario& sc) {
  return SemiconcaveFn(sc.branches, sc.domain, sc.options.grid_n);
}

}  // namespace singprop
