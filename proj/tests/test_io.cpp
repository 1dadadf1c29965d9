#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <mfluid/mfluid.hpp>

using namespace mfluid;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("mfluid_io_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

Snapshot snapshot_1d(int n) {
  Snapshot s;
  s.dim = 1;
  s.nx = n;
  s.x0 = -1.0;
  s.dx = 0.1;
  s.time = 0.3;
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (const char* name : {"rho", "u", "p", "Gamma", "Pi"}) {
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng) * 1e3 / 7.0;
    s.add(name, v);
  }
  return s;
}

}  // namespace

TEST(Config, MinimalDefaults) {
  const auto c = parse_config("problem=ex1 scheme=ldpccu");
  EXPECT_EQ(c.problem, "ex1");
  EXPECT_EQ(c.scheme, Scheme::ldpccu);
  EXPECT_EQ(c.cfl, 0.45);
  EXPECT_EQ(c.eps0, 1e-12);
  EXPECT_EQ(c.theta, 1.3);
  EXPECT_EQ(c.tau_interface, -0.5);
  EXPECT_EQ(c.tau_smooth, 0.5);
  const auto plan = plan_run(c);
  EXPECT_EQ(plan.n[0], 300);
  EXPECT_EQ(plan.format, OutputFormat::csv);
}

TEST(Config, CflRange) {
  EXPECT_EQ(parse_config("problem=ex1\ncfl=0.9").cfl, 0.9);
  EXPECT_THROW(parse_config("problem=ex1\ncfl=1.5"), ConfigError);
  EXPECT_THROW(parse_config("problem=ex1\ncfl=0"), ConfigError);
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("problem=ex1\n# note\nfoo=2\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("problem=ex1\nnx=abc\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("scheme=pccu\n").find("missing problem"), std::string::npos);
  EXPECT_NE(message("problem=ex1\nscheme=muscl\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("problem=ex1\nhybrid=maybe\n").find("line 2"), std::string::npos);
}

TEST(Config, CommentsAndSpacing) {
  const auto c = parse_config("# run\n  problem=ex2   # liquid\n\nnx=90 hybrid=on\n");
  EXPECT_EQ(c.problem, "ex2");
  EXPECT_EQ(c.nx, 90);
  EXPECT_EQ(c.hybrid, true);
}

TEST(Config, RoundTripProperty) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto names = problem_names();
  for (int k = 0; k < 300; ++k) {
    RunConfig c;
    c.problem = names[k % names.size()];
    c.scheme = static_cast<Scheme>(k % 3);
    c.cfl = 0.01 + 0.98 * u(rng);
    c.eps0 = std::pow(10.0, -20.0 * u(rng));
    c.theta = 1.0 + u(rng);
    c.tau_interface = -u(rng);
    c.tau_smooth = u(rng);
    if (k % 3 == 1) c.hybrid = u(rng) < 0.5;
    if (k % 2) c.nx = 1 + static_cast<int>(1000 * u(rng));
    if (k % 4 == 1) c.ny = 1 + static_cast<int>(1000 * u(rng));
    if (k % 5 == 2) c.t_final = u(rng) + 1e-3;
    if (k % 7 == 3) c.snapshots = std::vector<double>{0.1 * u(rng), 0.5 + u(rng)};
    c.format = static_cast<OutputFormat>(k % 3);
    c.reference = k % 11 == 0;
    c.out = "dir_" + std::to_string(k);
    EXPECT_EQ(parse_config(serialize_config(c)), c) << serialize_config(c);
  }
}

TEST(Config, HashTracksResults) {
  RunConfig a;
  a.problem = "ex1";
  RunConfig b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.out = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b = a;
  b.cfl = 0.4;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.scheme = Scheme::aiweno;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.nx = 600;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.tau_interface = -0.4;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(hash_hex(0xabcull), "0000000000000abc");
}

TEST(Plan, Overrides) {
  auto c = parse_config("problem=ex7 nx=40 ny=40 t_final=0.03");
  const auto p = plan_run(c);
  EXPECT_EQ(p.n[0], 40);
  EXPECT_EQ(p.n[1], 40);
  EXPECT_TRUE(p.scheme.hybrid);
  EXPECT_EQ(p.format, OutputFormat::grid_binary);
  EXPECT_EQ(p.snapshots, (std::vector<double>{0.0204, 0.03}));
  EXPECT_THROW(plan_run(parse_config("problem=ex1 ny=4")), ConfigError);
  EXPECT_THROW(plan_run(parse_config("problem=ex4 format=csv")), ConfigError);
  EXPECT_THROW(plan_run(parse_config("problem=nope")), ConfigError);
  const auto r = plan_run(parse_config("problem=ex1 scheme=aiweno reference=true"));
  EXPECT_EQ(r.scheme.scheme, Scheme::pccu);
  EXPECT_EQ(r.n[0], 6000);
}

TEST(Schlieren, Examples) {
  const std::vector<double> flat(12, 2.0);
  for (double v : schlieren_field(flat, 4, 3, 0.1, 0.1)) EXPECT_EQ(v, 1.0);

  std::vector<double> lin;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) lin.push_back(0.1 * i);
  for (double v : schlieren_field(lin, 4, 3, 0.1, 0.1)) EXPECT_NEAR(v, std::exp(-80.0), 1e-40);

  std::vector<double> bump(25, 1.0);
  bump[12] = 2.0;
  const auto s = schlieren_field(bump, 5, 5, 1.0, 1.0);
  const double mn = *std::min_element(s.begin(), s.end());
  EXPECT_NEAR(mn, 1.8e-35, 0.01e-35);
  for (double v : s) {
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Csv, FourLinesForThreeCells) {
  const auto d = scratch("csv");
  const auto s = snapshot_1d(3);
  write_csv(s, (d / "a.csv").string());
  EXPECT_EQ(count_lines(d / "a.csv"), 4);
  std::ifstream in(d / "a.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,rho,u,p,Gamma,Pi");
}

TEST(Csv, RoundTripBitExact) {
  const auto d = scratch("csv_rt");
  const auto s = snapshot_1d(50);
  write_csv(s, (d / "b.csv").string());
  const auto r = read_csv((d / "b.csv").string());
  EXPECT_EQ(r.nx, 50);
  EXPECT_EQ(r.time, s.time);
  for (const auto& n : s.names) EXPECT_EQ(r.field(n), s.field(n)) << n;
}

TEST(GridBinary, RoundTripBitExact) {
  const auto d = scratch("bin");
  Snapshot s;
  s.dim = 2;
  s.nx = 7;
  s.ny = 5;
  s.x0 = -3.0;
  s.y0 = -0.5;
  s.dx = 4.0 / 7.0;
  s.dy = 0.2;
  s.time = 1.0 / 3.0;
  std::mt19937_64 rng(9);
  for (const char* name : {"rho", "u", "v", "p", "Gamma", "Pi"}) {
    std::vector<double> v(35);
    for (auto& x : v) x = std::bit_cast<double>(rng() & 0x7fefffffffffffffull);
    s.add(name, v);
  }
  s.meta["scheme"] = "aiweno";
  const auto base = (d / "snap").string();
  write_grid_binary(s, base);
  const auto r = read_grid_binary(base);
  EXPECT_EQ(r.nx, 7);
  EXPECT_EQ(r.ny, 5);
  EXPECT_EQ(r.dx, s.dx);
  EXPECT_EQ(r.time, s.time);
  EXPECT_EQ(r.names, s.names);
  for (std::size_t k = 0; k < s.names.size(); ++k)
    for (std::size_t i = 0; i < 35; ++i)
      EXPECT_EQ(std::bit_cast<std::uint64_t>(r.data[k][i]), std::bit_cast<std::uint64_t>(s.data[k][i]));
  EXPECT_EQ(r.meta.at("scheme"), "aiweno");

  std::ifstream meta(base + ".meta");
  std::string all((std::istreambuf_iterator<char>(meta)), std::istreambuf_iterator<char>());
  EXPECT_NE(all.find("endianness: little"), std::string::npos);
  EXPECT_EQ(fs::file_size(base + ".rho.bin"), 35u * 8u);
}

TEST(GridBinary, GoldenFixture) {
  const auto s = read_grid_binary(std::string(MFLUID_FIXTURES) + "/golden");
  EXPECT_EQ(s.nx, 3);
  EXPECT_EQ(s.ny, 2);
  EXPECT_EQ(s.x0, -1.0);
  EXPECT_EQ(s.y0, 0.5);
  EXPECT_EQ(s.dx, 0.25);
  EXPECT_EQ(s.time, 0.75);
  EXPECT_EQ(s.meta.at("scheme"), "ldpccu");
  EXPECT_EQ(s.field("rho"), (std::vector<double>{1.0, 0.5, 0.125, -2.0, 1e-300, 3.141592653589793}));
  EXPECT_EQ(s.field("p"), (std::vector<double>{0.1, 0.2, 0.3, 1e5, 2.5, 7.0}));
}

TEST(GridBinary, SizeMismatchRejected) {
  const auto d = scratch("bad");
  fs::copy(std::string(MFLUID_FIXTURES) + "/golden.meta", d / "g.meta");
  fs::copy(std::string(MFLUID_FIXTURES) + "/golden.p.bin", d / "g.p.bin");
  std::ofstream(d / "g.rho.bin", std::ios::binary) << "short";
  EXPECT_THROW(read_grid_binary((d / "g").string()), IoError);
}

TEST(L1, Examples) {
  Snapshot a;
  a.nx = 10;
  a.x0 = 0.0;
  a.dx = 0.2;
  a.add("rho", std::vector<double>(10, 1.0));
  EXPECT_EQ(l1_error(a, a).at("rho"), 0.0);

  Snapshot f;
  f.nx = 40;
  f.x0 = 0.0;
  f.dx = 0.05;
  f.add("rho", std::vector<double>(40, 3.0));
  EXPECT_NEAR(l1_error(a, f).at("rho"), 2.0 * 2.0, 1e-13);

  // fine = piecewise-constant prolongation of coarse
  std::vector<double> cv(10), fv(40);
  for (int i = 0; i < 10; ++i) cv[i] = std::sin(i);
  for (int i = 0; i < 40; ++i) fv[i] = cv[i / 4];
  Snapshot c2 = a, f2 = f;
  c2.data[0] = cv;
  f2.data[0] = fv;
  EXPECT_NEAR(l1_error(c2, f2).at("rho"), 0.0, 1e-15);

  Snapshot bad = f;
  bad.nx = 30;
  bad.data[0].resize(30);
  EXPECT_THROW(l1_error(a, bad), std::invalid_argument);
}

TEST(L1, TwoDimensionalVolume) {
  Snapshot c, f;
  c.dim = f.dim = 2;
  c.nx = 2;
  c.ny = 2;
  c.dx = c.dy = 0.5;
  f.nx = 4;
  f.ny = 4;
  f.dx = f.dy = 0.25;
  c.add("rho", std::vector<double>(4, 1.0));
  f.add("rho", std::vector<double>(16, 1.5));
  EXPECT_NEAR(l1_error(c, f).at("rho"), 0.5, 1e-15);
}

TEST(Driver, RunWritesSnapshotsAndManifest) {
  const auto d = scratch("run");
  auto c = parse_config("problem=ex3 scheme=ldpccu nx=50");
  c.out = d.string();
  std::ostringstream log;
  const auto r = run(c, log);
  EXPECT_FALSE(r.aborted);
  EXPECT_EQ(r.time, 0.00025);
  ASSERT_EQ(r.outputs.size(), 1u);
  EXPECT_TRUE(fs::exists(r.outputs[0]));
  EXPECT_TRUE(fs::exists(d / "ex3_ldpccu_manifest.json"));
  std::ifstream m(d / "ex3_ldpccu_manifest.json");
  const auto j = nlohmann::json::parse(m);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["steps"], r.steps);
  EXPECT_EQ(j["config_hash"], hash_hex(config_hash(c)));
  const auto s = read_csv(r.outputs[0]);
  EXPECT_EQ(s.nx, 50);
}

TEST(Driver, Deterministic) {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  auto c = parse_config("problem=ex5 scheme=ldpccu nx=40 ny=10 t_final=0.05");
  c.out = d1.string();
  std::ostringstream log;
  const auto r1 = run(c, log);
  c.out = d2.string();
  const auto r2 = run(c, log);
  ASSERT_EQ(r1.outputs.size(), r2.outputs.size());
  const auto a = read_grid_binary(r1.outputs.back().substr(0, r1.outputs.back().size() - 5));
  const auto b = read_grid_binary(r2.outputs.back().substr(0, r2.outputs.back().size() - 5));
  EXPECT_EQ(a.data, b.data);
}

TEST(Driver, SnapshotFileRoundTrip) {
  const auto p = build_problem("ex4");
  const auto g = problem_grid<2>(p, {40, 10}, 2);
  const auto U = initialize(p, g);
  const auto s = make_snapshot(U, 0.0);
  EXPECT_TRUE(s.has("schlieren"));
  const auto d = scratch("snap");
  write_grid_binary(s, (d / "x").string());
  const auto r = read_grid_binary((d / "x").string());
  EXPECT_EQ(r.data, s.data);
}

TEST(Driver, ConvergenceTable) {
  const auto rows = convergence_study("smooth", Scheme::ldpccu, {25, 50}, false);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].l1, rows[1].l1);
  EXPECT_GT(rows[1].order, 1.0);
  EXPECT_THROW(convergence_study("ex1", Scheme::ldpccu, {10}, false), ConfigError);
}
