#include "dipolecav/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "dipolecav/oracle.hpp"

namespace dipolecav::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct HelpRequested {
  std::string text;
};

const std::vector<std::string>& option_keys() {
  static const std::vector<std::string> keys = {
      "p",      "config", "out",     "format",   "threads", "components", "xmin",    "xmax",
      "points", "window", "rel-tol", "cutoff",   "n-max",   "tol-res",    "eps-imag", "permittivity",
      "L",      "width",  "a",       "b",        "yA",      "zA",         "yD",      "zD",
      "geometry", "at",   "seed",    "samples",  "tolerance"};
  return keys;
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names = {
      {"free3d", Command::free3d}, {"free2d", Command::free2d},   {"free1d", Command::free1d},
      {"planar", Command::planar}, {"channel", Command::channel}, {"sweep", Command::sweep},
      {"exponent", Command::exponent}, {"enhance", Command::enhance}, {"oracle", Command::oracle}};
  return names;
}

std::string json_scalar_to_string(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& item : v) {
      if (!s.empty()) s += ',';
      s += json_scalar_to_string(key, item);
    }
    return s;
  }
  throw UsageError("config key '" + key + "' has an unsupported value type");
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw UsageError("invalid number for '" + key + "': '" + text + "'");
  return v;
}

long parse_integer(const std::string& key, const std::string& text) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("invalid integer for '" + key + "': '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Geometry geometry_for(const std::string& kind, const std::map<std::string, std::string>& raw, double p,
                      double eps) {
  auto need = [&](const std::string& key, const std::map<std::string, double>& refs = {}) {
    auto it = raw.find(key);
    if (it == raw.end()) throw UsageError("missing --" + key + " for geometry " + kind);
    const double v = parse_length(it->second, p, refs);
    if (!(v > 0)) throw UsageError("--" + key + " must be positive");
    return v;
  };
  if (kind == "free3d") return Free3D{eps};
  if (kind == "free2d") return Free2D{raw.count("width") ? need("width") : need("L"), eps};
  if (kind == "free1d") return Free1D{need("a"), need("b"), eps};
  if (kind == "planar") return PlanarGeometry{need("L"), eps};
  if (kind == "channel") return ChannelGeometry{need("a"), need("b"), eps};
  throw UsageError("unknown geometry '" + kind + "'");
}

Placement placement_for(const Geometry& g, const std::map<std::string, std::string>& raw, double p) {
  std::map<std::string, double> refs;
  Placement w;
  if (const auto* pg = std::get_if<PlanarGeometry>(&g)) {
    refs["L"] = pg->L;
    w.z_A = w.z_D = pg->L / 2;
  } else if (const auto* cg = std::get_if<ChannelGeometry>(&g)) {
    refs["a"] = cg->a;
    refs["b"] = cg->b;
    w.y_A = w.y_D = cg->a / 2;
    w.z_A = w.z_D = cg->b / 2;
  } else if (const auto* f2 = std::get_if<Free2D>(&g)) {
    refs["L"] = f2->width;
  } else if (const auto* f1 = std::get_if<Free1D>(&g)) {
    refs["a"] = f1->a;
    refs["b"] = f1->b;
  }
  const std::array<std::pair<const char*, double*>, 4> fields = {
      {{"yA", &w.y_A}, {"zA", &w.z_A}, {"yD", &w.y_D}, {"zD", &w.z_D}}};
  for (const auto& [key, dst] : fields)
    if (auto it = raw.find(key); it != raw.end()) *dst = parse_length(it->second, p, refs);
  return w;
}

std::vector<Component> default_components(const Geometry& g) {
  if (std::holds_alternative<Free2D>(g)) return {{2, 2}};
  if (std::holds_alternative<Free1D>(g)) return {{1, 1}, {2, 2}};
  return {{0, 0}, {1, 1}, {2, 2}};
}

// ---------------------------------------------------------------- output

json ctrl_json(const SumControl& c) {
  return {{"rel_tol", c.rel_tol}, {"exp_cutoff", c.exp_cutoff}, {"n_max", c.n_max},
          {"tol_res", c.tol_res}, {"eps_imag", c.eps_imag}};
}

json geometry_json(const Geometry& g) {
  json j = {{"kind", geometry_name(g)}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Free2D>) j["width"] = v.width;
        if constexpr (std::is_same_v<T, Free1D> || std::is_same_v<T, ChannelGeometry>) {
          j["a"] = v.a;
          j["b"] = v.b;
        }
        if constexpr (std::is_same_v<T, PlanarGeometry>) j["L"] = v.L;
        j["permittivity"] = v.permittivity;
      },
      g);
  return j;
}

json meta_json(const RunConfig& c) {
  return {{"geometry", geometry_json(c.geometry)},
          {"p", c.p},
          {"positions", {{"yA", c.placement.y_A}, {"zA", c.placement.z_A}, {"yD", c.placement.y_D}, {"zD", c.placement.z_D}}},
          {"ctrl", ctrl_json(c.ctrl)},
          {"version", kVersion}};
}

/// NaN and infinities have no JSON literal; they are written as null.
json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  CsvWriter& cell(const std::string& s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  CsvWriter& cell(double v) { return cell(format_number(v)); }
  void end() {
    os_ << '\n';
    first_ = true;
  }

 private:
  std::ostream& os_;
  bool first_ = true;
};

int write_sweep(const RunConfig& cfg, const SweepResult& r, std::ostream& os) {
  const std::size_t N = r.x.size();
  if (cfg.format == Format::csv) {
    CsvWriter w(os);
    w.cell("X");
    for (const auto c : r.components) {
      const auto n = component_name(c);
      for (const char* suffix : {"_re", "_im", "_rd_re", "_rd_im", "_nrd_re", "_nrd_im", "_abs", "_n"})
        w.cell(n + suffix);
    }
    w.cell("status");
    w.end();
    for (std::size_t i = 0; i < N; ++i) {
      w.cell(r.x[i]);
      for (std::size_t k = 0; k < r.components.size(); ++k) {
        const auto c = r.components[k];
        const auto& v = r.values[i];
        const auto t = v.total(c.row, c.col), d = v.rd(c.row, c.col), nd = v.nrd(c.row, c.col);
        w.cell(t.real()).cell(t.imag()).cell(d.real()).cell(d.imag()).cell(nd.real()).cell(nd.imag());
        w.cell(std::abs(t)).cell(r.exponents[k].n[i]);
      }
      w.cell(r.status[i]);
      w.end();
    }
  } else {
    json j;
    j["meta"] = meta_json(cfg);
    j["grid"] = r.x;
    j["status"] = r.status;
    json comps = json::object();
    for (std::size_t k = 0; k < r.components.size(); ++k) {
      const auto c = r.components[k];
      json re = json::array(), im = json::array(), rdre = json::array(), rdim = json::array(), nre = json::array(),
           nim = json::array(), ab = json::array(), ex = json::array();
      for (std::size_t i = 0; i < N; ++i) {
        const auto& v = r.values[i];
        re.push_back(number_json(v.total(c.row, c.col).real()));
        im.push_back(number_json(v.total(c.row, c.col).imag()));
        rdre.push_back(number_json(v.rd(c.row, c.col).real()));
        rdim.push_back(number_json(v.rd(c.row, c.col).imag()));
        nre.push_back(number_json(v.nrd(c.row, c.col).real()));
        nim.push_back(number_json(v.nrd(c.row, c.col).imag()));
        ab.push_back(number_json(std::abs(v.total(c.row, c.col))));
        ex.push_back(number_json(r.exponents[k].n[i]));
      }
      comps[component_name(c)] = {{"re", re},  {"im", im},  {"rd", {{"re", rdre}, {"im", rdim}}},
                                  {"nrd", {{"re", nre}, {"im", nim}}}, {"abs", ab}, {"n", ex}};
    }
    j["components"] = comps;
    os << j.dump(1) << '\n';
  }
  return r.all_ok() ? kExitOk : kExitPointFailure;
}

SweepSpec sweep_spec(const RunConfig& c) {
  SweepSpec s;
  s.geometry = c.geometry;
  s.p = c.p;
  s.placement = c.placement;
  s.x_min = c.x_min;
  s.x_max = c.x_max;
  s.count = c.points;
  s.components = c.components;
  s.ctrl = c.ctrl;
  s.window = c.window;
  s.threads = c.threads;
  return s;
}

/// Local exponents at isolated separations: a short log grid with 2% spacing
/// is centred on each requested X.
int write_exponents_at(const RunConfig& cfg, std::ostream& os) {
  struct Row {
    double x;
    std::vector<double> mag, n;
    std::string status;
  };
  std::vector<Row> rows;
  const double ratio = std::pow(1.02, (cfg.window - 1) / 2.0);
  for (double X0 : cfg.at) {
    SweepSpec s = sweep_spec(cfg);
    s.x_min = X0 / ratio;
    s.x_max = X0 * ratio;
    s.count = static_cast<std::size_t>(cfg.window);
    const auto r = run_sweep(s);
    const std::size_t mid = s.count / 2;
    Row row{X0, {}, {}, r.all_ok() ? "ok" : r.status[mid] != "ok" ? r.status[mid] : std::string("window_failed")};
    for (std::size_t k = 0; k < cfg.components.size(); ++k) {
      const auto c = cfg.components[k];
      row.mag.push_back(std::abs(r.values[mid].total(c.row, c.col)));
      row.n.push_back(r.exponents[k].n[mid]);
    }
    rows.push_back(std::move(row));
  }
  bool ok = true;
  if (cfg.format == Format::csv) {
    CsvWriter w(os);
    w.cell("X");
    for (const auto c : cfg.components) w.cell(component_name(c) + "_abs").cell(component_name(c) + "_n");
    w.cell("status");
    w.end();
    for (const auto& row : rows) {
      w.cell(row.x);
      for (std::size_t k = 0; k < row.n.size(); ++k) w.cell(row.mag[k]).cell(row.n[k]);
      w.cell(row.status);
      w.end();
      ok = ok && row.status == "ok";
    }
  } else {
    json j;
    j["meta"] = meta_json(cfg);
    j["grid"] = cfg.at;
    json comps = json::object(), status = json::array();
    for (std::size_t k = 0; k < cfg.components.size(); ++k) {
      json ab = json::array(), ex = json::array();
      for (const auto& row : rows) {
        ab.push_back(number_json(row.mag[k]));
        ex.push_back(number_json(row.n[k]));
      }
      comps[component_name(cfg.components[k])] = {{"abs", ab}, {"n", ex}};
    }
    for (const auto& row : rows) {
      status.push_back(row.status);
      ok = ok && row.status == "ok";
    }
    j["components"] = comps;
    j["status"] = status;
    os << j.dump(1) << '\n';
  }
  return ok ? kExitOk : kExitPointFailure;
}

int write_exponent_sweep(const RunConfig& cfg, std::ostream& os) {
  const auto r = run_sweep(sweep_spec(cfg));
  if (cfg.format == Format::csv) {
    CsvWriter w(os);
    w.cell("X");
    for (const auto c : r.components) w.cell(component_name(c) + "_abs").cell(component_name(c) + "_n");
    w.cell("status");
    w.end();
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      w.cell(r.x[i]);
      for (std::size_t k = 0; k < r.components.size(); ++k) {
        const auto c = r.components[k];
        w.cell(std::abs(r.values[i].total(c.row, c.col))).cell(r.exponents[k].n[i]);
      }
      w.cell(r.status[i]);
      w.end();
    }
    return r.all_ok() ? kExitOk : kExitPointFailure;
  }
  return write_sweep(cfg, r, os);
}

int write_enhancement(const RunConfig& cfg, std::ostream& os) {
  const auto grid = log_grid(cfg.x_min, cfg.x_max, cfg.points);
  std::vector<RatioSeries> series;
  for (const auto c : cfg.components)
    series.push_back(enhancement_ratio(cfg.geometry, cfg.p, cfg.placement, grid, c, cfg.ctrl));
  std::vector<std::string> status(grid.size(), "ok");
  for (const auto& s : series)
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (s.status[i] != "ok") status[i] = s.status[i];
  if (cfg.format == Format::csv) {
    CsvWriter w(os);
    w.cell("X");
    for (const auto c : cfg.components) w.cell(component_name(c) + "_ratio");
    w.cell("status");
    w.end();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      w.cell(grid[i]);
      for (const auto& s : series) w.cell(s.ratio[i]);
      w.cell(status[i]);
      w.end();
    }
  } else {
    json j;
    j["meta"] = meta_json(cfg);
    j["grid"] = grid;
    json comps = json::object();
    for (std::size_t k = 0; k < series.size(); ++k) {
      json r = json::array();
      for (double v : series[k].ratio) r.push_back(number_json(v));
      comps[component_name(cfg.components[k])] = {{"ratio", r}};
    }
    j["components"] = comps;
    j["status"] = status;
    os << j.dump(1) << '\n';
  }
  const bool ok = std::all_of(status.begin(), status.end(), [](const std::string& s) { return s == "ok"; });
  return ok ? kExitOk : kExitPointFailure;
}

int write_oracle(const RunConfig& cfg, std::ostream& os) {
  const bool planar = std::holds_alternative<PlanarGeometry>(cfg.geometry);
  const auto cases = planar ? random_planar_cases(cfg.seed, cfg.samples) : random_channel_cases(cfg.seed, cfg.samples);
  struct Row {
    int index;
    double X;
    std::string comp;
    std::complex<double> closed, quad;
    double rel;
    bool pass;
  };
  std::vector<Row> rows;
  // The channel oracle integrates every (m, n) mode numerically; a cutoff of
  // 25 keeps the neglected tail near e^{-25} at a fraction of the cost.
  SumControl oracle_ctrl = cfg.ctrl;
  if (!planar) oracle_ctrl.exp_cutoff = std::min(oracle_ctrl.exp_cutoff, 25.0);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto cmp = compare_with_oracle(cases[i], cfg.ctrl, oracle_ctrl);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const double rel = cmp.rel_error(r, c).real();
        const bool pass = std::isnan(rel) ? std::abs(cmp.quadrature(r, c)) <= cfg.tolerance * cmp.closed.norm()
                                          : rel <= cfg.tolerance;
        rows.push_back({static_cast<int>(i), cases[i].separation(), component_name({r, c}), cmp.closed(r, c),
                        cmp.quadrature(r, c), rel, pass});
      }
  }
  bool ok = true;
  if (cfg.format == Format::csv) {
    CsvWriter w(os);
    for (const char* h : {"case", "X", "component", "closed_re", "closed_im", "quad_re", "quad_im", "rel_err", "status"})
      w.cell(h);
    w.end();
    for (const auto& r : rows) {
      w.cell(std::to_string(r.index)).cell(r.X).cell(r.comp).cell(r.closed.real()).cell(r.closed.imag());
      w.cell(r.quad.real()).cell(r.quad.imag()).cell(r.rel).cell(r.pass ? "ok" : "mismatch");
      w.end();
      ok = ok && r.pass;
    }
  } else {
    json j;
    j["meta"] = meta_json(cfg);
    j["meta"]["seed"] = cfg.seed;
    j["meta"]["tolerance"] = cfg.tolerance;
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"case", r.index}, {"X", r.X}, {"component", r.comp},
                     {"closed", {r.closed.real(), r.closed.imag()}}, {"quadrature", {r.quad.real(), r.quad.imag()}},
                     {"rel_err", number_json(r.rel)}, {"status", r.pass ? "ok" : "mismatch"}});
      ok = ok && r.pass;
    }
    j["comparisons"] = arr;
    os << j.dump(1) << '\n';
  }
  return ok ? kExitOk : kExitPointFailure;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_length(const std::string& text, double p, const std::map<std::string, double>& refs) {
  static const std::regex re(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(sqrt2)?(pi)?(_over_p|over_p|L|a|b)?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("invalid length '" + text + "'");
  double v = parse_number("length", m[1].str());
  if (m[2].matched) v *= std::numbers::sqrt2;
  if (m[3].matched) v *= std::numbers::pi;
  if (m[4].matched) {
    const std::string unit = m[4].str();
    if (unit == "_over_p" || unit == "over_p") {
      v /= p;
    } else {
      auto it = refs.find(unit);
      if (it == refs.end()) throw UsageError("length '" + text + "' refers to " + unit + ", which is not defined here");
      v *= it->second;
    }
  }
  return v;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Dipole-dipole coupling in free space and perfect-mirror cavities", "dipolecav"};
  app.require_subcommand(1);
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : command_names()) {
    auto* sub = app.add_subcommand(name);
    for (const auto& key : option_keys()) sub->add_option("--" + key, raw[key]);
    subs[name] = sub;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::string chosen;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) chosen = name;
  CLI::App* sub = subs.at(chosen);

  std::map<std::string, std::string> given;
  for (const auto& key : option_keys())
    if (sub->get_option("--" + key)->count() > 0) given[key] = raw[key];

  if (auto it = given.find("config"); it != given.end()) {
    std::ifstream in(it->second);
    if (!in) throw UsageError("cannot read config file '" + it->second + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    const std::set<std::string> known(option_keys().begin(), option_keys().end());
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key) || key == "config") throw UsageError("unknown config key '" + key + "'");
      if (!given.count(key)) given[key] = json_scalar_to_string(key, value);
    }
  }

  RunConfig c;
  c.command = command_names().at(chosen);
  auto has = [&](const std::string& k) { return given.count(k) > 0; };
  auto num = [&](const std::string& k) { return parse_number(k, given.at(k)); };

  if (has("p")) c.p = num("p");
  if (!(c.p > 0)) throw UsageError("--p must be positive");
  const double eps = has("permittivity") ? num("permittivity") : 1.0;
  if (!(eps > 0)) throw UsageError("--permittivity must be positive");

  std::string kind;
  switch (c.command) {
    case Command::free3d: kind = "free3d"; break;
    case Command::free2d: kind = "free2d"; break;
    case Command::free1d: kind = "free1d"; break;
    case Command::planar: kind = "planar"; break;
    case Command::channel: kind = "channel"; break;
    default:
      if (!has("geometry")) throw UsageError("missing --geometry for " + chosen);
      kind = given.at("geometry");
  }
  if (c.command == Command::oracle && kind != "planar" && kind != "channel")
    throw UsageError("oracle supports --geometry planar or channel");
  if (c.command == Command::oracle) {
    // geometry and positions come from the seeded random cases
    if (kind == "planar") c.geometry = PlanarGeometry{1.0, eps};
    else c.geometry = ChannelGeometry{1.0, 1.0, eps};
  } else {
    c.geometry = geometry_for(kind, given, c.p, eps);
    c.placement = placement_for(c.geometry, given, c.p);
  }

  std::map<std::string, double> refs;
  if (const auto* pg = std::get_if<PlanarGeometry>(&c.geometry)) refs["L"] = pg->L;
  if (const auto* cg = std::get_if<ChannelGeometry>(&c.geometry)) {
    refs["a"] = cg->a;
    refs["b"] = cg->b;
  }
  if (has("xmin")) c.x_min = parse_length(given.at("xmin"), c.p, refs);
  if (has("xmax")) c.x_max = parse_length(given.at("xmax"), c.p, refs);
  if (!(c.x_min > 0) || !(c.x_max > c.x_min)) throw UsageError("need 0 < --xmin < --xmax");
  if (has("points")) {
    const long n = parse_integer("points", given.at("points"));
    if (n < 2) throw UsageError("--points must be at least 2");
    c.points = static_cast<std::size_t>(n);
  }
  if (has("window")) {
    c.window = static_cast<int>(parse_integer("window", given.at("window")));
    if (c.window < 3 || c.window % 2 == 0) throw UsageError("--window must be odd and at least 3");
  }
  if (has("components")) {
    for (const auto& name : split(given.at("components"))) {
      try {
        c.components.push_back(parse_component(name));
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--components: ") + e.what());
      }
    }
    if (c.components.empty()) throw UsageError("--components is empty");
  } else {
    c.components = default_components(c.geometry);
  }
  if (has("rel-tol")) c.ctrl.rel_tol = num("rel-tol");
  if (has("cutoff")) c.ctrl.exp_cutoff = num("cutoff");
  if (has("n-max")) c.ctrl.n_max = parse_integer("n-max", given.at("n-max"));
  if (has("tol-res")) c.ctrl.tol_res = num("tol-res");
  if (has("eps-imag")) c.ctrl.eps_imag = num("eps-imag");
  if (!(c.ctrl.rel_tol > 0) || !(c.ctrl.exp_cutoff > 0) || c.ctrl.n_max < 1 || !(c.ctrl.tol_res >= 0) ||
      !(c.ctrl.eps_imag > 0))
    throw UsageError("summation controls must be positive");
  if (has("threads")) {
    const long t = parse_integer("threads", given.at("threads"));
    if (t < 0) throw UsageError("--threads must be >= 0");
    c.threads = static_cast<unsigned>(t);
  }
  if (has("format")) {
    const auto& f = given.at("format");
    if (f == "csv") c.format = Format::csv;
    else if (f == "json") c.format = Format::json;
    else throw UsageError("--format must be csv or json");
  }
  if (has("out")) c.out = given.at("out");
  if (has("at"))
    for (const auto& s : split(given.at("at"))) {
      const double v = parse_length(s, c.p, refs);
      if (!(v > 0)) throw UsageError("--at values must be positive");
      c.at.push_back(v);
    }
  if (has("seed")) c.seed = static_cast<std::uint64_t>(parse_integer("seed", given.at("seed")));
  if (has("samples")) {
    c.samples = static_cast<int>(parse_integer("samples", given.at("samples")));
    if (c.samples < 1) throw UsageError("--samples must be positive");
  }
  if (has("tolerance")) c.tolerance = num("tolerance");
  return c;
}

int execute(const RunConfig& config, std::ostream& os) {
  switch (config.command) {
    case Command::exponent:
      return config.at.empty() ? write_exponent_sweep(config, os) : write_exponents_at(config, os);
    case Command::enhance:
      return write_enhancement(config, os);
    case Command::oracle:
      return write_oracle(config, os);
    default:
      return write_sweep(config, run_sweep(sweep_spec(config)), os);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    status = execute(cfg, buffer);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPointFailure;
  }

  if (!cfg.out) {
    out << buffer.str();
    return status;
  }
  namespace fs = std::filesystem;
  const fs::path target(*cfg.out);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "error: cannot open " << tmp.string() << " for writing\n";
      return kExitIo;
    }
    f << buffer.str();
    f.flush();
    if (!f) {
      err << "error: write to " << tmp.string() << " failed\n";
      return kExitIo;
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    err << "error: cannot move output into place at " << target.string() << '\n';
    return kExitIo;
  }
  return status;
}

}  // namespace dipolecav::cli
