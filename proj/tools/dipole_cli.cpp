#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <thread>

#include <dipole/dipole.hpp>
#include <dipole/io.hpp>
#include <dipole/testkit/acceptance.hpp>

using namespace dipole;
using dipole::io::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kHypothesis = 2, kMalformed = 3;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::HypothesisViolated:
    case ErrorKind::H0Unsatisfiable:
    case ErrorKind::NotStarShaped:
      return kHypothesis;
    case ErrorKind::InternalError:
    case ErrorKind::NotAFlow:
    case ErrorKind::TooLarge:
    case ErrorKind::Infeasible:
      return kFailed;
    default:
      return kMalformed;
  }
}

struct Options {
  std::vector<std::string> inputs;
  std::string output = "-";
  std::string profile = "sd";
  std::string domain = "square:1";
  std::string psi = "linear";
  std::string field = "radial";
  double epsilon = 0.25;
  double tolerance = kTol;
  double value = 0;
  std::optional<double> omega;
  std::optional<std::uint64_t> seed;
  int sweeps = 10;
  int jobs = 1;
};

// A state is a complex (or lattice) document with a "values" table.
struct State {
  std::optional<LatticeDomain> lattice;
  PlanarComplex complex;
  VertexFunction u;
};

State load_state(const std::string& path, bool need_values = true) {
  json j = io::read_file(path);
  State s;
  if (j.contains("cells")) {
    s.lattice = io::lattice_from_json(j);
    s.complex = s.lattice->complex;
  } else {
    s.complex = io::complex_from_json(j);
  }
  if (need_values) {
    if (!j.contains("values")) fail(ErrorKind::MalformedInput, path + ": no \"values\" table");
    s.u = io::function_from_json(s.complex, j);
  }
  return s;
}

json state_json(const State& s) {
  json j = s.lattice ? io::lattice_to_json(*s.lattice) : io::complex_to_json(s.complex);
  j["values"] = io::function_to_json(s.complex, s.u)["values"];
  return j;
}

const std::string& single_input(const Options& o) {
  if (o.inputs.size() != 1) fail(ErrorKind::MalformedInput, "expected exactly one --input");
  return o.inputs.front();
}

Domain parse_domain(const Options& o) {
  auto colon = o.domain.find(':');
  std::string kind = o.domain.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : o.domain.substr(colon + 1);
  try {
    if (kind == "square") return square_domain(arg.empty() ? 1.0 : std::stod(arg));
    if (kind == "disk") return Disk{{0, 0}, arg.empty() ? 1.0 : std::stod(arg)};
  } catch (const std::logic_error&) {
    fail(ErrorKind::MalformedInput, "bad domain size in " + o.domain);
  }
  if (kind == "polygon") {
    json j = io::read_file(arg);
    return io::guarded([&] {
      Polygon p;
      for (const auto& v : j.at("polygon")) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      if (p.vertices.size() < 3) fail(ErrorKind::MalformedInput, "polygon needs at least three vertices");
      return Domain(p);
    });
  }
  fail(ErrorKind::MalformedInput, "unknown domain " + o.domain);
}

std::function<double(double)> parse_psi(const std::string& desc) {
  if (desc == "linear") return [](double t) { return t; };
  if (desc.rfind("step:", 0) == 0) {
    double lip = std::stod(desc.substr(5));
    if (!(lip >= 1)) fail(ErrorKind::MalformedInput, "step slope must be at least 1");
    return [lip](double t) { return std::clamp(0.5 + lip * (t - 0.5), 0.0, 1.0); };
  }
  fail(ErrorKind::MalformedInput, "unknown psi " + desc);
}

BoundaryField parse_field(const std::string& desc) {
  if (desc == "radial") return radial_field();
  if (desc.rfind("degree:", 0) == 0) return degree_field(std::stoi(desc.substr(7)));
  fail(ErrorKind::MalformedInput, "unknown field " + desc);
}

void fill_interior(State& s, const Options& o) {
  if (!o.seed) return;
  std::mt19937_64 rng(*o.seed);
  std::uniform_real_distribution<double> d(0, 1);
  BoundaryComplex b = boundary_complex(s.complex);
  for (VertexIndex v = 0; v < s.u.size(); ++v)
    if (!b.is_boundary[v]) s.u[v] = d(rng);
}

const LatticeDomain& need_lattice(const State& s) {
  if (!s.lattice) fail(ErrorKind::MalformedInput, "input is not a lattice (no \"cells\")");
  return *s.lattice;
}

int cmd_lattice_gen(const Options& o) {
  auto L = discretize(parse_domain(o), o.epsilon);
  io::write_file(o.output, io::lattice_to_json(L));
  return kOk;
}

int cmd_boundary(const Options& o, const std::string& kind) {
  State s = load_state(single_input(o), false);
  const auto& L = need_lattice(s);
  if (kind == "star") s.u = star_boundary(parse_psi(o.psi), L);
  else if (kind == "lift") s.u = lift_boundary(parse_field(o.field), L, o.omega);
  else s.u = lift_boundary(constant_field(o.value), L);
  fill_interior(s, o);
  json j = state_json(s);
  j["hypotheses"] = io::hypotheses_to_json(s.complex, check_hypotheses(s.u, s.complex, o.tolerance));
  io::write_file(o.output, j);
  return kOk;
}

int cmd_relax(const Options& o) {
  State s = load_state(single_input(o));
  auto p = io::parse_profile(o.profile);
  double before = energy(s.u, s.complex, p);
  s.u = relax(s.u, need_lattice(s), p, o.sweeps);
  json j = state_json(s);
  j["energy"] = {{"profile", p.name}, {"before", before}, {"after", energy(s.u, s.complex, p)}};
  io::write_file(o.output, j);
  return kOk;
}

int cmd_energy(const Options& o) {
  State s = load_state(single_input(o));
  auto p = io::parse_profile(o.profile);
  io::write_file(o.output, json{{"profile", p.name}, {"energy", energy(s.u, s.complex, p)}});
  return kOk;
}

int cmd_vorticity(const Options& o) {
  State s = load_state(single_input(o));
  io::write_file(o.output, io::vorticity_to_json(vorticity(s.u, need_lattice(s))));
  return kOk;
}

int cmd_dualize(const Options& o) {
  State s = load_state(single_input(o), false);
  io::write_file(o.output, io::dual_to_json(dualize(s.complex)));
  return kOk;
}

json run_one(const std::string& path, const Options& o) {
  State s = load_state(path);
  PipelineOptions po;
  po.tol = o.tolerance;
  po.removal.tol = o.tolerance;
  po.removal.x0_seed = o.seed;
  auto r = run_pipeline(s.complex, s.u, po);
  json report = io::report_to_json(s.complex, r.report);
  s.u = r.u;
  json j = state_json(s);
  j["report"] = report;
  if (s.lattice) j["vorticity"] = io::vorticity_to_json(vorticity(s.u, *s.lattice));
  return j;
}

int cmd_pipeline(const Options& o) {
  if (o.inputs.empty()) fail(ErrorKind::MalformedInput, "no --input given");
  if (o.inputs.size() == 1) {
    io::write_file(o.output, run_one(o.inputs.front(), o));
    return kOk;
  }
  // several scenarios: --output names a directory, one result per input
  std::filesystem::path dir = o.output == "-" ? "." : o.output;
  std::filesystem::create_directories(dir);
  std::vector<int> codes(o.inputs.size(), kOk);
  std::vector<std::string> messages(o.inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < o.inputs.size();) {
      try {
        auto out = dir / (std::filesystem::path(o.inputs[i]).stem().string() + ".out.json");
        io::write_file(out.string(), run_one(o.inputs[i], o));
      } catch (const Error& e) {
        codes[i] = exit_code(e.kind());
        messages[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, o.jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int worst = kOk;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] == kOk) continue;
    std::cerr << o.inputs[i] << ": " << messages[i] << "\n";
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_verify(const Options& o) {
  auto rs = testkit::run_acceptance(o.seed.value_or(20240501));
  bool ok = true;
  for (const auto& r : rs) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left << std::setw(36)
              << r.name << std::right << std::fixed << std::setprecision(2) << std::setw(7) << r.seconds << "s  "
              << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dipole removal on planar complexes and square lattices"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;

  auto io_flags = [&](CLI::App* c, bool many = false) {
    if (many) c->add_option("--input,-i", o.inputs, "input JSON files")->required();
    else c->add_option("--input,-i", o.inputs, "input JSON file")->required()->expected(1);
    c->add_option("--output,-o", o.output, "output JSON file, - for stdout");
    c->add_option("--tolerance", o.tolerance, "numerical tolerance")->capture_default_str();
  };

  auto* lattice = app.add_subcommand("lattice", "lattice domains");
  lattice->require_subcommand(1);
  auto* gen = lattice->add_subcommand("gen", "discretize a domain");
  gen->add_option("--domain", o.domain, "square:<half side> | disk:<radius> | polygon:<file>")->capture_default_str();
  gen->add_option("--epsilon", o.epsilon, "lattice spacing")->capture_default_str();
  gen->add_option("--output,-o", o.output, "output JSON file");
  gen->callback([&] { action = [&] { return cmd_lattice_gen(o); }; });

  auto* boundary = app.add_subcommand("boundary", "boundary data on a lattice");
  boundary->require_subcommand(1);
  auto* star = boundary->add_subcommand("star", "u0 = psi(theta / 2 pi)");
  io_flags(star);
  star->add_option("--psi", o.psi, "linear | step:<slope>")->capture_default_str();
  auto* lift = boundary->add_subcommand("lift", "lift a boundary phase field");
  io_flags(lift);
  lift->add_option("--field", o.field, "radial | degree:<n>")->capture_default_str();
  lift->add_option("--omega", o.omega, "modulus of continuity at scale epsilon");
  auto* cst = boundary->add_subcommand("const", "constant boundary phase");
  io_flags(cst);
  cst->add_option("--value", o.value, "phase")->capture_default_str();
  for (auto* c : {star, lift, cst}) {
    c->add_option("--seed", o.seed, "fill interior vertices with seeded uniform values");
    std::string name = c->get_name();
    c->callback([&, name] { action = [&, name] { return cmd_boundary(o, name); }; });
  }

  auto* rel = app.add_subcommand("relax", "coordinate descent on interior vertices");
  io_flags(rel);
  rel->add_option("--profile", o.profile, "sd | xy | custom:<file>")->capture_default_str();
  rel->add_option("--sweeps", o.sweeps, "number of sweeps")->capture_default_str();
  rel->callback([&] { action = [&] { return cmd_relax(o); }; });

  auto* pipe = app.add_subcommand("pipeline", "dipole removal pipeline");
  pipe->require_subcommand(1);
  auto* run = pipe->add_subcommand("run", "remove dipoles from a state");
  io_flags(run, true);
  run->add_option("--seed", o.seed, "randomize the choice of charged vertex");
  run->add_option("--jobs", o.jobs, "worker threads for several inputs")->capture_default_str();
  run->callback([&] { action = [&] { return cmd_pipeline(o); }; });

  auto* en = app.add_subcommand("energy", "lattice energy of a state");
  io_flags(en);
  en->add_option("--profile", o.profile, "sd | xy | custom:<file>")->capture_default_str();
  en->callback([&] { action = [&] { return cmd_energy(o); }; });

  auto* vo = app.add_subcommand("vorticity", "vorticity measure of a lattice state");
  io_flags(vo);
  vo->callback([&] { action = [&] { return cmd_vorticity(o); }; });

  auto* du = app.add_subcommand("dualize", "dual graph of a complex");
  io_flags(du);
  du->callback([&] { action = [&] { return cmd_dualize(o); }; });

  auto* ver = app.add_subcommand("verify", "run the oracle suite");
  ver->add_option("--seed", o.seed, "suite seed");
  ver->callback([&] { action = [&] { return cmd_verify(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
}
