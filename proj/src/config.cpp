#include "relkac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "relkac/errors.hpp"

namespace relkac {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Laplace: return "laplace";
    case ExperimentKind::Moments: return "moments";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::Limit: return "limit";
    case ExperimentKind::Sample: return "sample";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto kind : {ExperimentKind::Laplace, ExperimentKind::Moments,
                          ExperimentKind::Compare, ExperimentKind::Limit, ExperimentKind::Sample}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Spinless: return "spinless";
    case EstimatorKind::Schrodinger: return "schrodinger";
    case EstimatorKind::PauliNonrel: return "pauli_nonrel";
    case EstimatorKind::PauliRel: return "pauli_rel";
  }
  return "?";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  for (const auto kind : {EstimatorKind::Spinless, EstimatorKind::Schrodinger,
                          EstimatorKind::PauliNonrel, EstimatorKind::PauliRel}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown estimator '" + name + "'");
}

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::Oracle: return "oracle";
    case ReferenceKind::ClosedForm: return "closed_form";
    case ReferenceKind::Fourier: return "fourier";
    case ReferenceKind::SpinlessEstimator: return "spinless_estimator";
  }
  return "?";
}

ReferenceKind reference_kind_from_string(const std::string& name) {
  for (const auto kind : {ReferenceKind::Oracle, ReferenceKind::ClosedForm, ReferenceKind::Fourier,
                          ReferenceKind::SpinlessEstimator}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown reference kind '" + name + "'");
}

FieldConfig FieldSpec::build() const {
  FieldConfig fields;
  fields.dimension = dimension;
  fields.a = make_vector_potential(a);
  fields.V = make_scalar_potential(V, dimension);
  fields.b = make_magnetic_field(b, fields.a);
  return fields;
}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const auto mark = node.Mark();
  if (mark.line >= 0) throw ConfigError("line " + std::to_string(mark.line + 1) + ": " + message);
  throw ConfigError(message);
}

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (!allowed.contains(key)) fail(entry.first, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
T read(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "cannot read " + what);
  }
}

std::vector<double> read_doubles(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) fail(node, what + " must be a list");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(read<double>(item, what));
  return out;
}

Vec3 read_vec3(const YAML::Node& node, const std::string& what) {
  const auto values = read_doubles(node, what);
  if (values.size() > 3) fail(node, what + " has more than 3 components");
  Vec3 v{};
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

ModelParams read_params(const YAML::Node& node) {
  check_keys(node, "params", {"alpha", "beta", "gamma", "m", "c"});
  for (const char* key : {"alpha", "beta", "gamma", "m", "c"}) {
    if (!node[key]) fail(node, std::string("params is missing '") + key + "'");
  }
  try {
    return {read<double>(node["alpha"], "alpha"), read<double>(node["beta"], "beta"),
            read<double>(node["gamma"], "gamma"), read<double>(node["m"], "m"),
            read<double>(node["c"], "c")};
  } catch (const DomainError& e) {
    fail(node, e.what());
  }
}

PresetSpec read_preset(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) fail(node, what + " must be a mapping with a 'preset' key");
  PresetSpec spec;
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (key == "preset") {
      spec.name = read<std::string>(entry.second, what + ".preset");
    } else {
      spec.values[key] = read<double>(entry.second, what + "." + key);
    }
  }
  return spec;
}

FieldSpec read_fields(const YAML::Node& node) {
  check_keys(node, "fields", {"dimension", "a", "V", "b"});
  FieldSpec spec;
  if (node["dimension"]) spec.dimension = read<int>(node["dimension"], "fields.dimension");
  if (spec.dimension < 0 || spec.dimension > 3) fail(node, "fields.dimension must be 0..3");
  if (node["a"]) spec.a = read_preset(node["a"], "fields.a");
  if (node["V"]) spec.V = read_preset(node["V"], "fields.V");
  if (node["b"]) spec.b = read_preset(node["b"], "fields.b");
  try {
    (void)spec.build();
  } catch (const std::exception& e) {
    fail(node, e.what());
  }
  return spec;
}

TestFunction read_test_function(const YAML::Node& node, int dimension, const std::string& what) {
  check_keys(node, what, {"center", "width", "momentum", "scale", "spin"});
  TestFunction f;
  f.dimension = dimension;
  if (node["center"]) f.center = read_vec3(node["center"], what + ".center");
  if (node["width"]) f.width = read<double>(node["width"], what + ".width");
  if (!(f.width > 0.0)) fail(node, what + ".width must be positive");
  if (node["momentum"]) f.momentum = read_vec3(node["momentum"], what + ".momentum");
  if (node["scale"]) {
    const auto v = read_doubles(node["scale"], what + ".scale");
    if (v.size() != 2) fail(node["scale"], what + ".scale must be [re, im]");
    f.scale = {v[0], v[1]};
  }
  if (node["spin"]) {
    const auto v = read_doubles(node["spin"], what + ".spin");
    if (v.size() != 4) fail(node["spin"], what + ".spin must be [re+, im+, re-, im-]");
    f.spin = std::array<Complex, 2>{Complex{v[0], v[1]}, Complex{v[2], v[3]}};
  }
  return f;
}

GridSpec read_grid(const YAML::Node& node, int dimension, bool spin) {
  check_keys(node, "grid", {"n", "L", "cap", "boundary_tolerance"});
  GridSpec grid;
  grid.dimension = dimension;
  grid.spin = spin;
  if (node["n"]) grid.n_per_axis = read<int>(node["n"], "grid.n");
  if (node["L"]) grid.half_extent = read<double>(node["L"], "grid.L");
  if (node["cap"]) grid.cap = read<std::size_t>(node["cap"], "grid.cap");
  if (node["boundary_tolerance"]) {
    grid.boundary_tolerance = read<double>(node["boundary_tolerance"], "grid.boundary_tolerance");
  }
  if (!(grid.half_extent > 0.0)) fail(node, "grid.L must be positive");
  try {
    if (grid.size() > grid.cap) fail(node, "grid size exceeds cap");
  } catch (const OracleError& e) {
    fail(node, e.what());
  }
  return grid;
}

bool is_spin_estimator(EstimatorKind kind) {
  return kind == EstimatorKind::PauliNonrel || kind == EstimatorKind::PauliRel;
}

CaseConfig read_case(const YAML::Node& node) {
  check_keys(node, "case",
             {"name", "estimator", "params", "t", "fields", "f", "g", "grid", "reference",
              "samples", "conventions", "convention", "discriminate", "spin_matrix",
              "expected_slope", "spot_check", "fourier_check"});
  CaseConfig c;
  if (!node["name"]) fail(node, "case is missing 'name'");
  c.name = read<std::string>(node["name"], "case.name");
  try {
    if (node["estimator"]) c.estimator = estimator_kind_from_string(read<std::string>(node["estimator"], "estimator"));
    if (node["reference"]) c.reference = reference_kind_from_string(read<std::string>(node["reference"], "reference"));
    if (node["convention"]) c.convention = jump_convention_from_string(read<std::string>(node["convention"], "convention"));
    if (node["conventions"]) {
      if (!node["conventions"].IsSequence()) fail(node["conventions"], "conventions must be a list");
      for (const auto& item : node["conventions"]) {
        c.conventions.push_back(jump_convention_from_string(read<std::string>(item, "convention")));
      }
    }
  } catch (const ConfigError& e) {
    fail(node, e.what());
  }
  if (node["params"]) c.params = read_params(node["params"]);
  if (node["t"]) c.t = read<double>(node["t"], "case.t");
  if (!(c.t >= 0.0)) fail(node, "case.t must be nonnegative");
  if (node["fields"]) c.fields = read_fields(node["fields"]);
  const bool spin = is_spin_estimator(c.estimator);
  if (node["f"]) c.f = read_test_function(node["f"], c.fields.dimension, "f");
  else c.f.dimension = c.fields.dimension;
  if (node["g"]) c.g = read_test_function(node["g"], c.fields.dimension, "g");
  else c.g.dimension = c.fields.dimension;
  if (spin) {
    if (!c.f.spin) c.f.spin = std::array<Complex, 2>{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    if (!c.g.spin) c.g.spin = std::array<Complex, 2>{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  }
  if (node["grid"]) c.grid = read_grid(node["grid"], c.fields.dimension, spin);
  else c.grid = read_grid(YAML::Node(YAML::NodeType::Map), c.fields.dimension, spin);
  if (node["samples"]) c.samples = read<std::size_t>(node["samples"], "case.samples");
  if (node["discriminate"]) c.discriminate = read<bool>(node["discriminate"], "discriminate");
  if (node["spin_matrix"]) c.spin_matrix = read<bool>(node["spin_matrix"], "spin_matrix");
  if (node["expected_slope"]) c.expected_slope = read<double>(node["expected_slope"], "expected_slope");
  if (node["fourier_check"]) c.fourier_check = read<double>(node["fourier_check"], "fourier_check");
  if (node["spot_check"]) {
    const auto& s = node["spot_check"];
    check_keys(s, "spot_check", {"c", "samples"});
    SpotCheck spot;
    if (s["c"]) spot.c = read<double>(s["c"], "spot_check.c");
    if (s["samples"]) spot.samples = read<std::size_t>(s["samples"], "spot_check.samples");
    c.spot_check = spot;
  }
  if ((c.estimator == EstimatorKind::Spinless || c.estimator == EstimatorKind::PauliRel) &&
      !c.params) {
    fail(node, "case '" + c.name + "' needs params for a relativistic estimator");
  }
  if (!spin && c.fields.dimension == 0) fail(node, "spinless cases need dimension >= 1");
  return c;
}

/// Packets on an oracle grid must keep (almost) no mass near the periodic
/// boundary, which the whole-space estimators never see.
void check_boundary_mass(const YAML::Node& node, const CaseConfig& c,
                         const std::optional<ExperimentKind>& kind) {
  const bool uses_grid = kind == ExperimentKind::Limit || c.reference == ReferenceKind::Oracle ||
                         c.fourier_check.has_value();
  if (!uses_grid || c.fields.dimension == 0) return;
  for (const auto* f : {&c.f, &c.g}) {
    const double mass = boundary_mass(*f, c.grid);
    if (!(mass < c.grid.boundary_tolerance)) {
      std::ostringstream msg;
      msg << "case '" << c.name << "': packet mass " << mass
          << " within 3 spacings of the grid boundary exceeds grid.boundary_tolerance "
          << c.grid.boundary_tolerance;
      fail(node, msg.str());
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a YAML mapping");
  check_keys(root, "config",
             {"kind", "id", "seed", "workers", "output", "samples", "params", "u", "t",
              "c_values", "moments", "discretization", "convention", "min_acceptance",
              "threshold_se", "max_outliers", "exp_moment_fractions", "exp_moment_limit",
              "slope_tolerance", "limit_tolerance", "uniform_bound", "kurtosis_threshold",
              "cases", "sample_kind", "sample_paths", "sample_dimension"});

  ExperimentConfig config;
  try {
    if (root["kind"]) config.kind = experiment_kind_from_string(read<std::string>(root["kind"], "kind"));
    if (root["convention"]) {
      config.convention = jump_convention_from_string(read<std::string>(root["convention"], "convention"));
    }
  } catch (const ConfigError& e) {
    fail(root, e.what());
  }
  if (root["id"]) config.id = read<std::string>(root["id"], "id");
  if (root["seed"]) config.seed = read<std::uint64_t>(root["seed"], "seed");
  if (root["workers"]) config.workers = read<int>(root["workers"], "workers");
  if (config.workers < 1) fail(root["workers"], "workers must be >= 1");
  if (root["output"]) config.output = read<std::string>(root["output"], "output");
  if (root["samples"]) config.samples = read<std::size_t>(root["samples"], "samples");
  if (root["params"]) {
    if (!root["params"].IsSequence()) fail(root["params"], "params must be a list of tuples");
    for (const auto& item : root["params"]) config.params.push_back(read_params(item));
  }
  if (root["u"]) config.u = read_doubles(root["u"], "u");
  for (const double u : config.u) {
    if (!(u >= 0.0)) fail(root["u"], "u values must be nonnegative");
  }
  if (root["t"]) config.t = read_doubles(root["t"], "t");
  for (const double t : config.t) {
    if (!(t >= 0.0)) fail(root["t"], "t values must be nonnegative");
  }
  if (root["c_values"]) config.c_values = read_doubles(root["c_values"], "c_values");
  if (root["moments"]) {
    config.moments.clear();
    for (const auto& item : root["moments"]) config.moments.push_back(read<int>(item, "moments"));
  }
  if (root["discretization"]) {
    const auto& d = root["discretization"];
    check_keys(d, "discretization", {"n_outer", "inner_step"});
    if (d["n_outer"]) config.discretization.n_outer = read<int>(d["n_outer"], "n_outer");
    if (d["inner_step"]) config.discretization.inner_step = read<double>(d["inner_step"], "inner_step");
    if (config.discretization.n_outer < 1) fail(d, "n_outer must be >= 1");
  }
  if (root["min_acceptance"]) config.min_acceptance = read<double>(root["min_acceptance"], "min_acceptance");
  if (!(config.min_acceptance > 0.0 && config.min_acceptance < 1.0)) {
    fail(root, "min_acceptance must lie in (0, 1)");
  }
  if (root["threshold_se"]) config.threshold_se = read<double>(root["threshold_se"], "threshold_se");
  if (root["max_outliers"]) config.max_outliers = read<std::size_t>(root["max_outliers"], "max_outliers");
  if (root["exp_moment_fractions"]) {
    config.exp_moment_fractions = read_doubles(root["exp_moment_fractions"], "exp_moment_fractions");
  }
  if (root["exp_moment_limit"]) {
    const auto& s = root["exp_moment_limit"];
    check_keys(s, "exp_moment_limit", {"u", "t", "c_values"});
    MomentLimitSweep sweep;
    if (s["u"]) sweep.u = read<double>(s["u"], "exp_moment_limit.u");
    if (s["t"]) sweep.t = read<double>(s["t"], "exp_moment_limit.t");
    if (s["c_values"]) sweep.c_values = read_doubles(s["c_values"], "exp_moment_limit.c_values");
    config.exp_moment_limit = sweep;
  }
  if (root["slope_tolerance"]) config.slope_tolerance = read<double>(root["slope_tolerance"], "slope_tolerance");
  if (root["limit_tolerance"]) config.limit_tolerance = read<double>(root["limit_tolerance"], "limit_tolerance");
  if (root["uniform_bound"]) config.uniform_bound = read<bool>(root["uniform_bound"], "uniform_bound");
  if (root["kurtosis_threshold"]) {
    config.kurtosis_threshold = read<double>(root["kurtosis_threshold"], "kurtosis_threshold");
  }
  if (root["cases"]) {
    if (!root["cases"].IsSequence()) fail(root["cases"], "cases must be a list");
    for (const auto& item : root["cases"]) {
      config.cases.push_back(read_case(item));
      check_boundary_mass(item, config.cases.back(), config.kind);
    }
  }
  if (root["sample_kind"]) {
    config.sample_kind = read<std::string>(root["sample_kind"], "sample_kind");
    if (config.sample_kind != "subordinator" && config.sample_kind != "brownian" &&
        config.sample_kind != "spin") {
      fail(root["sample_kind"], "sample_kind must be subordinator, brownian or spin");
    }
  }
  if (root["sample_paths"]) config.sample_paths = read<std::size_t>(root["sample_paths"], "sample_paths");
  if (root["sample_dimension"]) config.sample_dimension = read<int>(root["sample_dimension"], "sample_dimension");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

void emit_params(YAML::Emitter& out, const ModelParams& p) {
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "alpha" << YAML::Value << p.alpha()
      << YAML::Key << "beta" << YAML::Value << p.beta() << YAML::Key << "gamma" << YAML::Value
      << p.gamma() << YAML::Key << "m" << YAML::Value << p.m() << YAML::Key << "c"
      << YAML::Value << p.c() << YAML::EndMap;
}

void emit_doubles(YAML::Emitter& out, const std::vector<double>& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const double v : values) out << v;
  out << YAML::EndSeq;
}

void emit_vec3(YAML::Emitter& out, const Vec3& v) {
  emit_doubles(out, {v[0], v[1], v[2]});
}

void emit_preset(YAML::Emitter& out, const PresetSpec& spec) {
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "preset" << YAML::Value << spec.name;
  for (const auto& [key, value] : spec.values) out << YAML::Key << key << YAML::Value << value;
  out << YAML::EndMap;
}

void emit_test_function(YAML::Emitter& out, const TestFunction& f) {
  out << YAML::BeginMap;
  out << YAML::Key << "center" << YAML::Value;
  emit_vec3(out, f.center);
  out << YAML::Key << "width" << YAML::Value << f.width;
  out << YAML::Key << "momentum" << YAML::Value;
  emit_vec3(out, f.momentum);
  out << YAML::Key << "scale" << YAML::Value;
  emit_doubles(out, {f.scale.real(), f.scale.imag()});
  if (f.spin) {
    out << YAML::Key << "spin" << YAML::Value;
    emit_doubles(out, {(*f.spin)[0].real(), (*f.spin)[0].imag(), (*f.spin)[1].real(),
                       (*f.spin)[1].imag()});
  }
  out << YAML::EndMap;
}

void emit_case(YAML::Emitter& out, const CaseConfig& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "estimator" << YAML::Value << to_string(c.estimator);
  if (c.params) {
    out << YAML::Key << "params" << YAML::Value;
    emit_params(out, *c.params);
  }
  out << YAML::Key << "t" << YAML::Value << c.t;
  out << YAML::Key << "fields" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dimension" << YAML::Value << c.fields.dimension;
  out << YAML::Key << "a" << YAML::Value;
  emit_preset(out, c.fields.a);
  out << YAML::Key << "V" << YAML::Value;
  emit_preset(out, c.fields.V);
  out << YAML::Key << "b" << YAML::Value;
  emit_preset(out, c.fields.b);
  out << YAML::EndMap;
  out << YAML::Key << "f" << YAML::Value;
  emit_test_function(out, c.f);
  out << YAML::Key << "g" << YAML::Value;
  emit_test_function(out, c.g);
  out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "n"
      << YAML::Value << c.grid.n_per_axis << YAML::Key << "L" << YAML::Value
      << c.grid.half_extent << YAML::Key << "cap" << YAML::Value << c.grid.cap << YAML::Key
      << "boundary_tolerance" << YAML::Value << c.grid.boundary_tolerance << YAML::EndMap;
  out << YAML::Key << "reference" << YAML::Value << to_string(c.reference);
  if (c.samples) out << YAML::Key << "samples" << YAML::Value << *c.samples;
  if (!c.conventions.empty()) {
    out << YAML::Key << "conventions" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto conv : c.conventions) out << to_string(conv);
    out << YAML::EndSeq;
  }
  if (c.convention) out << YAML::Key << "convention" << YAML::Value << to_string(*c.convention);
  out << YAML::Key << "discriminate" << YAML::Value << c.discriminate;
  out << YAML::Key << "spin_matrix" << YAML::Value << c.spin_matrix;
  if (c.expected_slope) out << YAML::Key << "expected_slope" << YAML::Value << *c.expected_slope;
  if (c.fourier_check) out << YAML::Key << "fourier_check" << YAML::Value << *c.fourier_check;
  if (c.spot_check) {
    out << YAML::Key << "spot_check" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "c" << YAML::Value << c.spot_check->c << YAML::Key << "samples"
        << YAML::Value << c.spot_check->samples << YAML::EndMap;
  }
  out << YAML::EndMap;
}

}  // namespace

std::string emit_config(const ExperimentConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  if (config.kind) out << YAML::Key << "kind" << YAML::Value << to_string(*config.kind);
  out << YAML::Key << "id" << YAML::Value << config.id;
  out << YAML::Key << "seed" << YAML::Value << config.seed;
  out << YAML::Key << "workers" << YAML::Value << config.workers;
  out << YAML::Key << "output" << YAML::Value << config.output;
  out << YAML::Key << "samples" << YAML::Value << config.samples;
  out << YAML::Key << "params" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : config.params) emit_params(out, p);
  out << YAML::EndSeq;
  out << YAML::Key << "u" << YAML::Value;
  emit_doubles(out, config.u);
  out << YAML::Key << "t" << YAML::Value;
  emit_doubles(out, config.t);
  out << YAML::Key << "c_values" << YAML::Value;
  emit_doubles(out, config.c_values);
  out << YAML::Key << "moments" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const int n : config.moments) out << n;
  out << YAML::EndSeq;
  out << YAML::Key << "discretization" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "n_outer" << YAML::Value << config.discretization.n_outer << YAML::Key
      << "inner_step" << YAML::Value << config.discretization.inner_step << YAML::EndMap;
  out << YAML::Key << "convention" << YAML::Value << to_string(config.convention);
  out << YAML::Key << "min_acceptance" << YAML::Value << config.min_acceptance;
  out << YAML::Key << "threshold_se" << YAML::Value << config.threshold_se;
  if (config.max_outliers) out << YAML::Key << "max_outliers" << YAML::Value << *config.max_outliers;
  out << YAML::Key << "exp_moment_fractions" << YAML::Value;
  emit_doubles(out, config.exp_moment_fractions);
  if (config.exp_moment_limit) {
    out << YAML::Key << "exp_moment_limit" << YAML::Value << YAML::BeginMap << YAML::Key << "u"
        << YAML::Value << config.exp_moment_limit->u << YAML::Key << "t" << YAML::Value
        << config.exp_moment_limit->t << YAML::Key << "c_values" << YAML::Value;
    emit_doubles(out, config.exp_moment_limit->c_values);
    out << YAML::EndMap;
  }
  out << YAML::Key << "slope_tolerance" << YAML::Value << config.slope_tolerance;
  out << YAML::Key << "limit_tolerance" << YAML::Value << config.limit_tolerance;
  out << YAML::Key << "uniform_bound" << YAML::Value << config.uniform_bound;
  out << YAML::Key << "kurtosis_threshold" << YAML::Value << config.kurtosis_threshold;
  out << YAML::Key << "cases" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : config.cases) emit_case(out, c);
  out << YAML::EndSeq;
  out << YAML::Key << "sample_kind" << YAML::Value << config.sample_kind;
  out << YAML::Key << "sample_paths" << YAML::Value << config.sample_paths;
  out << YAML::Key << "sample_dimension" << YAML::Value << config.sample_dimension;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace relkac
