#include "femkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace femkit {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, ProblemKind>& kind_names() {
  static const std::map<std::string, ProblemKind> names{
      {"poisson1d", ProblemKind::poisson1d}, {"poisson2d", ProblemKind::poisson2d},
      {"stokes", ProblemKind::stokes},       {"advdiff1d", ProblemKind::advdiff1d},
      {"advdiff2d", ProblemKind::advdiff2d}, {"coupled", ProblemKind::coupled},
      {"convergence", ProblemKind::convergence}};
  return names;
}

bool is_1d(ProblemKind k) { return k == ProblemKind::poisson1d || k == ProblemKind::advdiff1d; }
bool is_advdiff(ProblemKind k) { return k == ProblemKind::advdiff1d || k == ProblemKind::advdiff2d; }
bool is_poisson(ProblemKind k) { return k == ProblemKind::poisson1d || k == ProblemKind::poisson2d; }

std::vector<std::string> coefficient_keys(ProblemKind k) {
  if (is_poisson(k)) return {"kappa", "f", "exact"};
  if (k == ProblemKind::stokes) return {"mu", "eps", "f1", "f2", "exact_u1", "exact_u2", "exact_p"};
  if (is_advdiff(k)) return {"mu", "beta1", "beta2", "f", "u0", "exact"};
  return {"mu", "mu_stokes", "eps", "f", "f1", "f2", "u0"};
}

std::vector<std::string> required_coefficients(const ProblemConfig& c) {
  const ProblemKind k = c.effective_kind();
  std::vector<std::string> out;
  if (k == ProblemKind::stokes || is_advdiff(k) || k == ProblemKind::coupled) out.push_back("mu");
  if (k == ProblemKind::coupled) out.push_back("mu_stokes");
  if (c.kind == ProblemKind::convergence) {
    if (k == ProblemKind::stokes) {
      out.insert(out.end(), {"exact_u1", "exact_u2", "exact_p"});
    } else {
      out.push_back("exact");
    }
  }
  return out;
}

const std::map<std::string, std::vector<std::string>>& domain_params() {
  static const std::map<std::string, std::vector<std::string>> params{
      {"interval", {"a", "b", "n"}},
      {"rectangle", {"x0", "x1", "y0", "y1", "nx", "ny"}},
      {"disk", {"radius", "n_r", "n_theta"}},
      {"dike", {"nx", "ny"}},
      {"file", {"path"}}};
  return params;
}

class Reader {
 public:
  Reader(std::string_view text, std::string source) : source_(std::move(source)) { tokenize(text); }

  [[noreturn]] void fail(int line, const std::string& what) const { throw ParseError(source_, line, what); }

  bool has_section(const std::string& name) const { return sections_.contains(name); }

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  const Entry& require(const std::string& section, const std::string& key) const {
    if (const Entry* e = find(section, key)) return *e;
    fail(0, "missing required key '" + section + "." + key + "'");
  }

  /// Rejects any key of `section` not accepted by `allowed`.
  template <class Pred>
  void check_keys(const std::string& section, Pred allowed) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return;
    for (const auto& [key, entry] : s->second) {
      if (!allowed(key)) fail(entry.line, "unknown key '" + section + "." + key + "'");
    }
  }

  void check_sections(const std::set<std::string>& allowed) const {
    for (const auto& [name, line] : section_lines_) {
      if (!allowed.contains(name)) fail(line, "unexpected section [" + name + "] for this problem kind");
    }
  }

  const std::vector<std::pair<std::string, Entry>>& ordered(const std::string& section) const {
    static const std::vector<std::pair<std::string, Entry>> empty;
    const auto it = order_.find(section);
    return it == order_.end() ? empty : it->second;
  }

  double number(const std::string& section, const std::string& key, const Entry& e) const {
    const auto v = text::parse_double(e.value);
    if (!v || !std::isfinite(*v)) fail(e.line, "'" + section + "." + key + "' is not a number: '" + e.value + "'");
    return *v;
  }

  int integer(const std::string& section, const std::string& key, const Entry& e) const {
    const auto v = text::parse_int<int>(e.value);
    if (!v) fail(e.line, "'" + section + "." + key + "' is not an integer: '" + e.value + "'");
    return *v;
  }

  Expression expression(const std::string& section, const std::string& key, const Entry& e) const {
    try {
      return Expression::parse(e.value);
    } catch (const ExpressionError& err) {
      fail(e.line, "key '" + section + "." + key + "': " + err.what());
    }
  }

  const std::string& source() const { return source_; }

 private:
  void tokenize(std::string_view text) {
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      const std::string_view line = text::trim(text::strip_comment(raw));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header");
        current = std::string(text::trim(line.substr(1, line.size() - 2)));
        if (current.empty()) fail(line_no, "empty section name");
        if (section_lines_.contains(current)) fail(line_no, "duplicate section [" + current + "]");
        section_lines_[current] = line_no;
        sections_[current];
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
      if (current.empty()) fail(line_no, "key outside of any section");
      const std::string key(text::trim(line.substr(0, eq)));
      const std::string value(text::trim(line.substr(eq + 1)));
      if (key.empty()) fail(line_no, "empty key");
      if (value.empty()) fail(line_no, "key '" + current + "." + key + "' has no value");
      auto& section = sections_[current];
      if (section.contains(key)) fail(line_no, "duplicate key '" + current + "." + key + "'");
      section[key] = {value, line_no};
      order_[current].push_back({key, {value, line_no}});
    }
  }

  std::string source_;
  std::map<std::string, Section> sections_;
  std::map<std::string, int> section_lines_;
  std::map<std::string, std::vector<std::pair<std::string, Entry>>> order_;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

int parse_label(const Reader& r, std::string_view token, int line, bool one_d) {
  token = text::trim(token);
  if (one_d && token == "left") return kLeftLabel;
  if (one_d && token == "right") return kRightLabel;
  const auto v = text::parse_int<int>(token);
  if (!v || *v <= 0) r.fail(line, "invalid boundary label '" + std::string(token) + "'");
  return *v;
}

std::vector<BcEntry> parse_bc(const Reader& r, const std::string& section, bool one_d, std::size_t dirichlet_arity) {
  std::vector<BcEntry> out;
  std::set<int> seen;
  auto add = [&](BcEntry e, int line) {
    if (!seen.insert(e.label).second) r.fail(line, "boundary label " + std::to_string(e.label) + " listed twice in [" + section + "]");
    out.push_back(std::move(e));
  };
  for (const auto& [key, entry] : r.ordered(section)) {
    if (key == "neumann") {
      for (auto token : text::split_top_level(entry.value, ',')) {
        add({parse_label(r, token, entry.line, one_d), BcEntry::Kind::neumann, {Expression::constant(0.0)}}, entry.line);
      }
      continue;
    }
    const auto dot = key.find('.');
    const std::string head = key.substr(0, dot);
    if (dot == std::string::npos || (head != "dirichlet" && head != "neumann")) {
      r.fail(entry.line, "unknown key '" + section + "." + key + "'");
    }
    BcEntry e;
    e.label = parse_label(r, std::string_view(key).substr(dot + 1), entry.line, one_d);
    e.kind = head == "dirichlet" ? BcEntry::Kind::dirichlet : BcEntry::Kind::neumann;
    const auto parts = text::split_top_level(entry.value, ',');
    const std::size_t arity = e.kind == BcEntry::Kind::dirichlet ? dirichlet_arity : 1;
    if (parts.size() != arity) {
      r.fail(entry.line, "key '" + section + "." + key + "' expects " + std::to_string(arity) + " expression" +
                             (arity == 1 ? "" : "s"));
    }
    for (auto p : parts) e.values.push_back(r.expression(section, key, {std::string(p), entry.line}));
    add(std::move(e), entry.line);
  }
  return out;
}

}  // namespace

std::string to_string(ProblemKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name;
  }
  return "?";
}
std::string to_string(SolverKind kind) { return kind == SolverKind::lu ? "lu" : "cg"; }
std::string to_string(RunMode mode) { return mode == RunMode::transient ? "transient" : "steady"; }
std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::vtk: return "vtk";
    case OutputFormat::both: return "both";
  }
  return "?";
}

Expression ProblemConfig::coefficient(const std::string& name, double fallback) const {
  const auto it = coefficients.find(name);
  return it == coefficients.end() ? Expression::constant(fallback) : it->second;
}

bool operator==(const ProblemConfig& a, const ProblemConfig& b) {
  return a.kind == b.kind && a.space == b.space && a.solver == b.solver && a.mode == b.mode && a.domain == b.domain &&
         a.mesh_file == b.mesh_file && a.coefficients == b.coefficients && a.bc == b.bc && a.stokes_bc == b.stokes_bc &&
         a.dt == b.dt && a.T == b.T && a.t_gate == b.t_gate && a.output_every == b.output_every &&
         a.gate_label == b.gate_label && a.format == b.format && a.prefix == b.prefix && a.target == b.target &&
         a.levels == b.levels;
}

ProblemConfig parse_config(std::string_view text, const std::string& source) {
  const Reader r(text, source);
  ProblemConfig c;

  // [problem]
  r.check_keys("problem", [](const std::string& k) { return k == "kind" || k == "space" || k == "solver" || k == "mode"; });
  {
    const Entry& e = r.require("problem", "kind");
    const auto it = kind_names().find(e.value);
    if (it == kind_names().end()) r.fail(e.line, "unknown problem kind '" + e.value + "'");
    c.kind = it->second;
  }
  if (c.kind == ProblemKind::convergence) {
    r.check_keys("convergence", [](const std::string& k) { return k == "target" || k == "levels"; });
    const Entry& e = r.require("convergence", "target");
    const auto it = kind_names().find(e.value);
    if (it == kind_names().end() ||
        (!is_poisson(it->second) && it->second != ProblemKind::advdiff1d && it->second != ProblemKind::stokes)) {
      r.fail(e.line, "convergence target must be poisson1d, poisson2d, advdiff1d or stokes");
    }
    c.target = it->second;
    if (const Entry* l = r.find("convergence", "levels")) c.levels = r.integer("convergence", "levels", *l);
  }
  const ProblemKind kind = c.effective_kind();
  const bool one_d = is_1d(kind);

  std::set<std::string> sections{"problem", "domain", "coefficients", "bc", "output"};
  if (c.kind == ProblemKind::convergence) sections.insert("convergence");
  if (kind == ProblemKind::coupled) sections.insert("stokes_bc");

  if (const Entry* e = r.find("problem", "space")) {
    const std::string s = lower(e->value);
    if (s == "p1") {
      c.space = one_d ? FeKind::P1_1D : FeKind::P1_2D;
    } else if (s == "p2" && !one_d) {
      c.space = FeKind::P2_2D;
    } else {
      r.fail(e->line, "unsupported space '" + e->value + "' for " + to_string(kind));
    }
    if (kind == ProblemKind::stokes || kind == ProblemKind::coupled) r.fail(e->line, "'problem.space' is fixed for " + to_string(kind));
  }
  if (const Entry* e = r.find("problem", "solver")) {
    if (e->value == "lu") {
      c.solver = SolverKind::lu;
    } else if (e->value == "cg" && is_poisson(kind)) {
      c.solver = SolverKind::cg;
    } else {
      r.fail(e->line, "unsupported solver '" + e->value + "' for " + to_string(kind));
    }
  }
  if (const Entry* e = r.find("problem", "mode")) {
    if (!is_advdiff(kind)) r.fail(e->line, "'problem.mode' applies to advection-diffusion problems only");
    if (e->value == "transient") {
      c.mode = RunMode::transient;
    } else if (e->value == "steady") {
      c.mode = RunMode::steady;
    } else {
      r.fail(e->line, "unknown mode '" + e->value + "'");
    }
  }
  if (c.kind == ProblemKind::convergence && kind == ProblemKind::advdiff1d) c.mode = RunMode::steady;

  const bool transient = (is_advdiff(kind) && c.mode == RunMode::transient) || kind == ProblemKind::coupled;
  const bool timed = transient || (is_advdiff(kind) && r.has_section("time"));
  if (timed) sections.insert("time");
  r.check_sections(sections);

  // [domain]
  {
    const Entry& k = r.require("domain", "kind");
    const auto it = domain_params().find(k.value);
    if (it == domain_params().end()) r.fail(k.line, "unknown domain kind '" + k.value + "'");
    const auto& names = it->second;
    r.check_keys("domain", [&](const std::string& key) {
      return key == "kind" || std::find(names.begin(), names.end(), key) != names.end();
    });
    if (one_d != (k.value == "interval")) {
      r.fail(k.line, "domain kind '" + k.value + "' does not fit problem kind " + to_string(kind));
    }
    std::vector<double> v;
    for (const auto& name : names) {
      if (name == "path") continue;
      v.push_back(r.number("domain", name, r.require("domain", name)));
    }
    auto count = [&](std::size_t i, const std::string& name) {
      if (v[i] != std::floor(v[i]) || v[i] < 0 || v[i] > 1e8) {
        r.fail(r.require("domain", name).line, "'domain." + name + "' must be a non-negative integer");
      }
      return static_cast<Index>(v[i]);
    };
    if (k.value == "interval") {
      c.domain = IntervalSpec{v[0], v[1], count(2, "n")};
    } else if (k.value == "rectangle") {
      c.domain = RectangleSpec{v[0], v[1], v[2], v[3], count(4, "nx"), count(5, "ny")};
    } else if (k.value == "disk") {
      c.domain = DiskSpec{v[0], count(1, "n_r"), count(2, "n_theta")};
    } else if (k.value == "dike") {
      c.domain = DikeSpec{count(0, "nx"), count(1, "ny")};
    } else {
      c.mesh_file = r.require("domain", "path").value;
    }
    if (c.domain) {
      try {
        validate_domain_spec(*c.domain);
      } catch (const InputError& err) {
        r.fail(k.line, err.what());
      }
    }
  }

  // [coefficients]
  {
    const auto allowed = coefficient_keys(kind);
    r.check_keys("coefficients", [&](const std::string& key) {
      return std::find(allowed.begin(), allowed.end(), key) != allowed.end();
    });
    for (const auto& [key, entry] : r.ordered("coefficients")) c.coefficients[key] = r.expression("coefficients", key, entry);
    for (const auto& key : required_coefficients(c)) r.require("coefficients", key);
    for (const char* key : {"mu", "mu_stokes", "eps"}) {
      const auto it = c.coefficients.find(key);
      if (it == c.coefficients.end()) continue;
      const int line = r.require("coefficients", key).line;
      if (!it->second.is_constant()) r.fail(line, std::string("'coefficients.") + key + "' must be a constant");
      const double v = it->second(0.0, 0.0, 0.0);
      if (std::string(key) == "eps" ? !(v >= 0.0) : !(v > 0.0)) {
        r.fail(line, std::string("'coefficients.") + key + "' is out of range");
      }
    }
  }

  // [bc], [stokes_bc]
  const std::size_t arity = kind == ProblemKind::stokes ? 2 : 1;
  c.bc = parse_bc(r, "bc", one_d, arity);
  if (kind == ProblemKind::coupled) c.stokes_bc = parse_bc(r, "stokes_bc", false, 2);
  auto check_bc = [&](const std::vector<BcEntry>& bc, const std::string& section, bool velocity) {
    const bool any_dirichlet =
        std::any_of(bc.begin(), bc.end(), [](const BcEntry& e) { return e.kind == BcEntry::Kind::dirichlet; });
    if (velocity && !any_dirichlet) r.fail(0, "[" + section + "] needs at least one Dirichlet label");
    for (const auto& e : bc) {
      if (velocity && e.kind == BcEntry::Kind::neumann && !(e.values[0].is_constant() && e.values[0](0.0) == 0.0)) {
        r.fail(0, "[" + section + "] only the do-nothing Neumann condition (value 0) is supported for velocities");
      }
    }
  };
  check_bc(c.bc, "bc", kind == ProblemKind::stokes);
  if (kind == ProblemKind::coupled) check_bc(c.stokes_bc, "stokes_bc", true);

  // [time]
  if (timed) {
    r.check_keys("time", [&](const std::string& key) {
      if (key == "dt" || key == "T" || key == "output_every") return true;
      return kind == ProblemKind::coupled && (key == "t_gate" || key == "gate_label");
    });
    if (transient) {
      c.dt = r.number("time", "dt", r.require("time", "dt"));
      c.T = r.number("time", "T", r.require("time", "T"));
      if (!(*c.dt > 0.0)) r.fail(r.require("time", "dt").line, "'time.dt' must be positive");
      if (!(*c.T >= *c.dt)) r.fail(r.require("time", "T").line, "'time.T' must be at least 'time.dt'");
    } else {
      if (const Entry* e = r.find("time", "dt")) c.dt = r.number("time", "dt", *e);
      if (const Entry* e = r.find("time", "T")) c.T = r.number("time", "T", *e);
    }
    if (const Entry* e = r.find("time", "output_every")) {
      c.output_every = r.integer("time", "output_every", *e);
      if (c.output_every < 1) r.fail(e->line, "'time.output_every' must be at least 1");
    }
    if (kind == ProblemKind::coupled) {
      c.t_gate = r.number("time", "t_gate", r.require("time", "t_gate"));
      if (const Entry* e = r.find("time", "gate_label")) c.gate_label = parse_label(r, e->value, e->line, false);
    }
  }

  // [output]
  r.check_keys("output", [](const std::string& key) { return key == "format" || key == "prefix"; });
  if (const Entry* e = r.find("output", "format")) {
    if (e->value == "csv") {
      c.format = OutputFormat::csv;
    } else if (e->value == "vtk") {
      c.format = OutputFormat::vtk;
    } else if (e->value == "both") {
      c.format = OutputFormat::both;
    } else {
      r.fail(e->line, "unknown output format '" + e->value + "'");
    }
    if (one_d && c.format != OutputFormat::csv) r.fail(e->line, "VTK output needs a 2D mesh");
  }
  if (const Entry* e = r.find("output", "prefix")) c.prefix = e->value;

  if (c.levels < 1) r.fail(0, "'convergence.levels' must be positive");
  return c;
}

ProblemConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ProblemConfig c = parse_config(buf.str(), path.string());
  c.base_dir = path.parent_path();
  return c;
}

std::string serialize_config(const ProblemConfig& c) {
  std::ostringstream out;
  const ProblemKind kind = c.effective_kind();
  out << "[problem]\nkind = " << to_string(c.kind) << "\n";
  if (c.space) out << "space = " << (*c.space == FeKind::P2_2D ? "P2" : "P1") << "\n";
  if (c.solver != SolverKind::lu) out << "solver = " << to_string(c.solver) << "\n";
  if (is_advdiff(kind) && c.kind != ProblemKind::convergence) out << "mode = " << to_string(c.mode) << "\n";

  out << "\n[domain]\n";
  if (c.domain) {
    const std::string text = describe(*c.domain);
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const auto values = text::split_top_level(std::string_view(text).substr(colon + 1), ',');
    out << "kind = " << name << "\n";
    const auto& names = domain_params().at(name);
    for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << " = " << values[i] << "\n";
  } else {
    out << "kind = file\npath = " << c.mesh_file.string() << "\n";
  }

  if (!c.coefficients.empty()) {
    out << "\n[coefficients]\n";
    for (const auto& [key, e] : c.coefficients) out << key << " = " << e.source() << "\n";
  }
  auto write_bc = [&out](const std::vector<BcEntry>& bc, const char* section) {
    if (bc.empty()) return;
    out << "\n[" << section << "]\n";
    for (const auto& e : bc) {
      out << (e.kind == BcEntry::Kind::dirichlet ? "dirichlet." : "neumann.") << e.label << " = ";
      for (std::size_t i = 0; i < e.values.size(); ++i) out << (i ? ", " : "") << e.values[i].source();
      out << "\n";
    }
  };
  write_bc(c.bc, "bc");
  write_bc(c.stokes_bc, "stokes_bc");

  if (c.dt || c.T || c.t_gate || c.output_every != 1) {
    out << "\n[time]\n";
    if (c.dt) out << "dt = " << text::shortest(*c.dt) << "\n";
    if (c.T) out << "T = " << text::shortest(*c.T) << "\n";
    if (c.output_every != 1) out << "output_every = " << c.output_every << "\n";
    if (c.t_gate) out << "t_gate = " << text::shortest(*c.t_gate) << "\ngate_label = " << c.gate_label << "\n";
  }
  out << "\n[output]\nformat = " << to_string(c.format) << "\nprefix = " << c.prefix << "\n";
  if (c.kind == ProblemKind::convergence) {
    out << "\n[convergence]\ntarget = " << to_string(*c.target) << "\nlevels = " << c.levels << "\n";
  }
  return out.str();
}

}  // namespace femkit
