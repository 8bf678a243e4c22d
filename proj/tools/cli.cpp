// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include "twoweight/debranges.hpp"
#include "twoweight/error.hpp"
#include "twoweight/model.hpp"
#include "twoweight/verify.hpp"
#include "twoweight/weight_io.hpp"

namespace twoweight::cli
{

namespace
{

using json = nlohmann::json;

const CLI::Validator kGridSize(
    [](const std::string &text)
    {
      try
      {
        const int m = std::stoi(text);
        if (m < 64 || m > 8192 || !is_power_of_two(m))
        {
          return std::string("grid size must be a power of two in [64, 8192]");
        }
      }
      catch (const std::exception &)
      {
        return std::string("grid size must be an integer");
      }
      return std::string();
    },
    "POW2[64,8192]", "grid");

struct Provenance
{
  std::string command;
  std::string input_hash;
  std::vector<std::pair<std::string, std::string>> params;

  std::string header() const
  {
    std::ostringstream s;
    s << "# twoweight " << TWOWEIGHT_VERSION << '\n'
      << "# command: " << command << '\n'
      << "# input_hash: " << input_hash << '\n';
    for (const auto &[k, v] : params)
    {
      s << "# " << k << ": " << v << '\n';
    }
    return s.str();
  }

  json to_json() const
  {
    json j{{"version", TWOWEIGHT_VERSION}, {"command", command}, {"input_hash", input_hash}};
    for (const auto &[k, v] : params)
    {
      j[k] = v;
    }
    return j;
  }
};

std::string num(double x)
{
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string short_num(double x)
{
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

// "0.3", "0.4i", "-i", "0.1+0.2i", "1e-3-2i"
Complex parse_complex(std::string text)
{
  text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
  if (text.empty())
  {
    throw ValidationError("empty complex number");
  }
  std::size_t used = 0;
  if (text.back() != 'i')
  {
    const double re = std::stod(text, &used);
    if (used != text.size())
    {
      throw ValidationError("malformed complex number: " + text);
    }
    return re;
  }
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;)
  {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
    {
      split = i;
      break;
    }
  }
  const auto imag_of = [&](const std::string &s)
  {
    if (s.empty() || s == "+")
    {
      return 1.0;
    }
    if (s == "-")
    {
      return -1.0;
    }
    std::size_t n = 0;
    const double v = std::stod(s, &n);
    if (n != s.size())
    {
      throw ValidationError("malformed complex number: " + text);
    }
    return v;
  };
  if (split == std::string::npos)
  {
    return {0.0, imag_of(body)};
  }
  const std::string re_part = body.substr(0, split);
  const double re = std::stod(re_part, &used);
  if (used != re_part.size())
  {
    throw ValidationError("malformed complex number: " + text);
  }
  return {re, imag_of(body.substr(split))};
}

struct LoadedWeight
{
  std::string label;
  std::string hash;
  MatrixWeight weight;
  double normalization;
};

LoadedWeight load_weight(const std::string &spec, const std::string &fixture, int grid)
{
  if (!spec.empty())
  {
    const std::string text = read_text_file(spec);
    const MatrixWeight raw = parse_weight_spec(text, grid);
    const double mean = mean_schatten_norm(raw);
    MatrixWeight w = normalize(raw);
    return {spec, content_hash(text), std::move(w), 1.0 / mean};
  }
  if (!fixture.empty())
  {
    MatrixWeight w = fixtures::by_name(fixture, grid);
    return {fixture, content_hash("fixture:" + fixture), std::move(w), 1.0};
  }
  throw ValidationError("either --spec or --fixture is required");
}

// ---------------------------------------------------------------------------

struct ConstructArgs
{
  std::string spec;
  std::string fixture;
  int grid = 1024;
  std::string out;
  std::string method = "series";
};

int construct(const ConstructArgs &a, std::ostream &out)
{
  const LoadedWeight lw = load_weight(a.spec, a.fixture, a.grid);
  const BoundaryMethod method =
      a.method == "ladder" ? BoundaryMethod::radial_ladder : BoundaryMethod::series;
  const DeBrangesSystem system(lw.weight);
  const CompanionWeightResult result = system.companion_weight(CircleGrid(a.grid), method);

  Provenance prov{"construct", lw.hash,
                  {{"input", lw.label},
                   {"M", std::to_string(a.grid)},
                   {"method", a.method},
                   {"normalization", num(lw.normalization)},
                   {"gg_trace", num(result.gg_trace)},
                   {"integrated_trace", num(result.integrated_trace())},
                   {"deficit", num(result.deficit)},
                   {"flagged", std::to_string(result.flagged_count())}}};
  if (!a.out.empty())
  {
    write_text_file_atomic(a.out, prov.header() + companion_weight_csv(result));
  }
  out << "M " << a.grid << ", flagged " << result.flagged_count() << ", trace(GG*) "
      << short_num(result.gg_trace) << ", integrated trace(w1) "
      << short_num(result.integrated_trace()) << ", deficit " << short_num(result.deficit)
      << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct VerifyArgs
{
  std::string spec;
  bool fixtures = false;
  std::vector<std::string> fixture_names;
  int random = 0;
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  int grid = 1024;
  std::string report;
  bool runtime = false;
};

int verify(const VerifyArgs &a, std::ostream &out)
{
  SuiteConfig config;
  config.seed = a.seed;
  config.tolerance = a.tolerance;
  config.random_weights = a.random;
  config.grid_size = a.grid;
  config.include_runtime = a.runtime;
  config.fixtures.clear();
  std::string hash_input = "verify";
  if (a.fixtures)
  {
    config.fixtures = a.fixture_names.empty() ? fixtures::names() : a.fixture_names;
    for (const auto &f : config.fixtures)
    {
      hash_input += ":" + f;
    }
  }
  if (!a.spec.empty())
  {
    const LoadedWeight lw = load_weight(a.spec, "", a.grid);
    config.weights.emplace_back("spec", lw.weight);
    hash_input += ":" + lw.hash;
  }
  if (config.fixtures.empty() && config.weights.empty() && a.random == 0)
  {
    throw ValidationError("nothing to verify: pass --spec, --fixtures or --random");
  }
  config.validate();
  const Report report = run_suite(config);

  if (!a.report.empty())
  {
    json doc = json::parse(report.to_json());
    Provenance prov{"verify", content_hash(hash_input),
                    {{"M", std::to_string(a.grid)},
                     {"seed", std::to_string(a.seed)},
                     {"random", std::to_string(a.random)},
                     {"tolerance", a.tolerance ? num(*a.tolerance) : std::string("default")}}};
    doc["provenance"] = prov.to_json();
    write_text_file_atomic(a.report, doc.dump(2) + "\n");
  }
  out << report.summary_table();
  return report.passed() ? kSuccess : kCheckFailure;
}

// ---------------------------------------------------------------------------

struct ModelArgs
{
  std::string spec;
  std::string fixture;
  std::vector<int> modes;
  std::vector<std::string> points{"0.3"};
  std::string out;
  std::string spectral_out;
};

int model_check(const ModelArgs &a, std::ostream &out)
{
  const LoadedWeight lw = load_weight(a.spec, a.fixture, 0);
  const int k = lw.weight.dim();
  for (const int m : a.modes)
  {
    if (static_cast<long long>(m) * k > TruncatedModel::kMaxSize)
    {
      throw ResourceError("M·k = " + std::to_string(static_cast<long long>(m) * k) +
                          " exceeds the model cap " + std::to_string(TruncatedModel::kMaxSize));
    }
  }
  std::vector<Complex> zs;
  for (const auto &p : a.points)
  {
    zs.push_back(parse_complex(p));
  }
  const auto rows = cross_validate(lw.weight, zs, a.modes);
  out << "cross validation |psi1_model - psi1|\n";
  out << std::left << std::setw(20) << "z" << std::setw(8) << "M" << std::setw(16) << "error"
      << "order\n";
  for (const auto &r : rows)
  {
    std::ostringstream z;
    z << r.z.real() << (r.z.imag() < 0 ? "" : "+") << r.z.imag() << 'i';
    out << std::left << std::setw(20) << z.str() << std::setw(8) << r.modes << std::setw(16)
        << short_num(r.error) << (std::isnan(r.order) ? std::string("-") : short_num(r.order))
        << '\n';
  }

  out << "spectral measure of U1\n";
  out << std::left << std::setw(8) << "M" << std::setw(16) << "total trace" << std::setw(16)
      << "|total - GG*|" << std::setw(16) << "peak omega"
      << "window mass\n";
  std::string spectral_text;
  int spectral_m = 0;
  for (const int m : a.modes)
  {
    if (m * k > TruncatedModel::kMaxDenseSize)
    {
      out << std::left << std::setw(8) << m << "skipped (M·k above "
          << TruncatedModel::kMaxDenseSize << ")\n";
      continue;
    }
    const TruncatedModel model(lw.weight, m);
    const SpectralMeasure mu = model.spectral_nu1();
    const auto peak = std::max_element(mu.atoms.begin(), mu.atoms.end(),
                                       [](const SpectralAtom &x, const SpectralAtom &y)
                                       { return x.trace < y.trace; });
    const double window = 10.0 * 2.0 * kPi / m;
    out << std::left << std::setw(8) << m << std::setw(16) << short_num(mu.total_trace())
        << std::setw(16) << short_num(linalg::operator_norm(mu.total() - model.gg_star()))
        << std::setw(16) << short_num(peak->omega)
        << short_num(mu.trace_within(peak->omega, window)) << '\n';
    if (m >= spectral_m)
    {
      spectral_m = m;
      spectral_text = spectral_csv(mu);
    }
  }

  std::string modes_text;
  for (const int m : a.modes)
  {
    modes_text += (modes_text.empty() ? "" : ",") + std::to_string(m);
  }
  if (!a.out.empty())
  {
    Provenance prov{"model-check", lw.hash, {{"input", lw.label}, {"modes", modes_text}}};
    write_text_file_atomic(a.out, prov.header() + cross_validation_csv(rows));
  }
  if (!a.spectral_out.empty() && spectral_m > 0)
  {
    Provenance prov{"model-check", lw.hash, {{"input", lw.label}, {"M", std::to_string(spectral_m)}}};
    write_text_file_atomic(a.spectral_out, prov.header() + spectral_text);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct ScalarArgs
{
  std::string spec;
  int grid = 1024;
  std::string out;
  std::uint64_t seed = 0;
  int basis = 10;
};

int scalar(const ScalarArgs &a, std::ostream &out)
{
  const std::string text = read_text_file(a.spec);
  const ScalarWeight v0 = parse_scalar_weight_spec(text, a.grid);
  KoosisOptions opts;
  opts.seed = a.seed;
  opts.basis_size = a.basis;
  const KoosisResult r = koosis_pipeline(v0, opts);
  const int flagged = static_cast<int>(std::count(r.flags.begin(), r.flags.end(), true));

  if (!a.out.empty())
  {
    Provenance prov{"scalar", content_hash(text),
                    {{"input", a.spec},
                     {"M", std::to_string(a.grid)},
                     {"seed", std::to_string(a.seed)},
                     {"normalization", num(r.normalization)},
                     {"norm_estimate", num(r.norm_estimate)},
                     {"log_integral", num(r.log_integral)},
                     {"muckenhoupt", num(r.muckenhoupt)},
                     {"flagged", std::to_string(flagged)}}};
    std::ostringstream csv;
    csv << std::setprecision(17) << "theta,v1,flag\n";
    for (int m = 0; m < v0.grid.size(); m++)
    {
      const auto idx = static_cast<std::size_t>(m);
      csv << v0.grid.node(m) << ',' << r.v1.values[idx] << ',' << (r.flags[idx] ? 1 : 0) << '\n';
    }
    write_text_file_atomic(a.out, prov.header() + csv.str());
  }
  out << "normalization " << short_num(r.normalization) << "\n"
      << "norm estimate (squared, lower bound) " << short_num(r.norm_estimate) << "\n"
      << "mean |log v1| " << short_num(r.log_integral) << "\n"
      << "muckenhoupt sup of v0 " << short_num(r.muckenhoupt) << "\n"
      << "flagged nodes " << flagged << "\n";
  const bool ok = r.norm_estimate <= 1.0 + 1e-6 && std::isfinite(r.log_integral);
  return ok ? kSuccess : kCheckFailure;
}

// ---------------------------------------------------------------------------

int report(const std::string &path, std::ostream &out)
{
  json doc;
  try
  {
    doc = json::parse(read_text_file(path));
  }
  catch (const json::exception &e)
  {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
  Report r;
  try
  {
    r.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto &c : doc.at("checks"))
    {
      CheckResult cr;
      cr.name = c.at("name").get<std::string>();
      cr.passed = c.at("status").get<std::string>() == "pass";
      cr.value = c.at("value").is_null() ? std::nan("") : c.at("value").get<double>();
      cr.threshold = c.at("threshold").get<double>();
      cr.relation = c.at("relation").get<std::string>() == ">=" ? Relation::at_least
                                                                 : Relation::at_most;
      r.checks.push_back(std::move(cr));
    }
  }
  catch (const json::exception &e)
  {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
  out << r.summary_table();
  return r.passed() ? kSuccess : kCheckFailure;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"de Branges companion weights and weighted Hardy projections", "twoweight"};
  app.set_version_flag("--version", std::string(TWOWEIGHT_VERSION));
  app.require_subcommand(1, 1);

  ConstructArgs ca;
  auto *c = app.add_subcommand("construct", "compute the companion weight w1 of a weight spec");
  c->add_option("--spec", ca.spec, "weight-spec JSON file");
  c->add_option("--fixture", ca.fixture, "built-in fixture instead of a spec")
      ->check(CLI::IsMember(fixtures::names()));
  c->add_option("-M,--grid", ca.grid, "grid size")->check(kGridSize)->capture_default_str();
  c->add_option("-o,--out", ca.out, "w1 table (CSV)");
  c->add_option("--method", ca.method, "boundary-value method")
      ->check(CLI::IsMember({"series", "ladder"}))
      ->capture_default_str();

  VerifyArgs va;
  auto *v = app.add_subcommand("verify", "run the property suite");
  v->add_option("--spec", va.spec, "weight-spec JSON file");
  v->add_flag("--fixtures", va.fixtures, "include the built-in fixtures");
  v->add_option("--fixture", va.fixture_names, "restrict --fixtures to these names")
      ->check(CLI::IsMember(fixtures::names()));
  v->add_option("--random", va.random, "number of random matrix weights")
      ->check(CLI::NonNegativeNumber);
  v->add_option("--tolerance", va.tolerance, "override every residual tolerance")
      ->check(CLI::NonNegativeNumber);
  v->add_option("--seed", va.seed, "random seed")->capture_default_str();
  v->add_option("-M,--grid", va.grid, "companion grid size")->check(kGridSize)->capture_default_str();
  v->add_option("--report", va.report, "JSON report file");
  v->add_flag("--runtime", va.runtime, "record per-check runtimes in the report");

  ModelArgs ma;
  auto *m = app.add_subcommand("model-check", "cross-validate against the truncated model");
  m->add_option("--spec", ma.spec, "weight-spec JSON file");
  m->add_option("--fixture", ma.fixture, "built-in fixture instead of a spec")
      ->check(CLI::IsMember(fixtures::names()));
  m->add_option("--modes", ma.modes, "model grid sizes")
      ->required()
      ->delimiter(',')
      ->check(kGridSize);
  m->add_option("--z", ma.points, "evaluation points, e.g. 0.3,0.4i")->delimiter(',');
  m->add_option("-o,--out", ma.out, "cross-validation table (CSV)");
  m->add_option("--spectral-out", ma.spectral_out, "spectral measure table of the largest M (CSV)");

  ScalarArgs sa;
  auto *s = app.add_subcommand("scalar", "Koosis pipeline for a scalar weight v0");
  s->add_option("--spec", sa.spec, "scalar weight-spec JSON file")->required();
  s->add_option("-M,--grid", sa.grid, "grid size")->check(kGridSize)->capture_default_str();
  s->add_option("-o,--out", sa.out, "v1 table (CSV)");
  s->add_option("--seed", sa.seed, "seed of the Galerkin basis")->capture_default_str();
  s->add_option("--basis", sa.basis, "Galerkin basis size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string report_path;
  auto *r = app.add_subcommand("report", "print the summary of a JSON report");
  r->add_option("report", report_path, "JSON report file")->required();

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::CallForHelp &)
  {
    out << app.help();
    return kSuccess;
  }
  catch (const CLI::CallForAllHelp &)
  {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  }
  catch (const CLI::CallForVersion &)
  {
    out << TWOWEIGHT_VERSION << '\n';
    return kSuccess;
  }
  catch (const CLI::ParseError &e)
  {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try
  {
    if (c->parsed())
    {
      return construct(ca, out);
    }
    if (v->parsed())
    {
      return verify(va, out);
    }
    if (m->parsed())
    {
      return model_check(ma, out);
    }
    if (s->parsed())
    {
      return scalar(sa, out);
    }
    return report(report_path, out);
  }
  catch (const ValidationError &e)
  {
    err << "invalid input: " << e.what() << '\n';
  }
  catch (const DomainError &e)
  {
    err << "domain error: " << e.what() << '\n';
  }
  catch (const ResourceError &e)
  {
    err << "resource limit: " << e.what() << '\n';
  }
  catch (const NumericalError &e)
  {
    err << "numerical failure: " << e.what() << '\n';
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
  }
  return kInvalid;
}

}  // namespace twoweight::cli
