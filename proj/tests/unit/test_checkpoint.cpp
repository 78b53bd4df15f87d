#include "dgles/checkpoint.hpp"
#include "dgles/config.hpp"
#include "dgles/driver.hpp"
#include "dgles/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace dgles;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dgles_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string small_case(const fs::path& dir, const std::string& model) {
  std::string text =
      "mesh.nx = 2\nmesh.ny = 2\nmesh.nz = 2\nmesh.lx = 2\nmesh.lz = 1\nmesh.omega = 1\n"
      "discretization.q = 2\ndiscretization.q_hat = 1\ngas.mach = 0.5\ngas.reynolds = 150\n"
      "time.cfl = 0.2\ntime.t_stats = 0.01\ntime.t_average = 0.03\ninitial.amplitude = 0.1\n"
      "model.type = " + model + "\noutput.directory = " + dir.string() + "\n";
  return text;
}

}  // namespace

TEST_SUITE("checkpoint") {

TEST_CASE("round trip is bitwise") {
  const fs::path dir = scratch("roundtrip");
  Simulation sim(parse_config(small_case(dir, "anisotropic")));
  while (sim.statistics().weight() == 0.0) sim.step();
  sim.step();
  const Checkpoint c = sim.make_checkpoint();
  CHECK(c.statistics.weight() > 0.0);
  const auto bytes = encode_checkpoint(c);
  const Checkpoint d = decode_checkpoint(bytes);
  CHECK(d.shape == c.shape);
  CHECK(d.state.data() == c.state.data());
  CHECK(d.time == c.time);
  CHECK(d.step == c.step);
  CHECK(d.config_text == c.config_text);
  CHECK(d.forcing.integral == c.forcing.integral);
  CHECK(d.statistics.sums() == c.statistics.sums());
  CHECK(d.have_coefficients == c.have_coefficients);
  REQUIRE(d.coefficients.size() == c.coefficients.size());
  for (std::size_t e = 0; e < c.coefficients.size(); ++e) CHECK(d.coefficients[e].c == c.coefficients[e].c);
  CHECK(encode_checkpoint(d) == bytes);

  const std::string path = (dir / "a.bin").string();
  write_checkpoint(path, c);
  CHECK_FALSE(fs::exists(path + ".tmp"));
  CHECK(encode_checkpoint(read_checkpoint(path)) == bytes);
}

TEST_CASE("corrupt and mismatched files are refused") {
  const fs::path dir = scratch("corrupt");
  Simulation sim(parse_config(small_case(dir, "none")));
  sim.step();
  auto bytes = encode_checkpoint(sim.make_checkpoint());

  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK_THROWS_AS(decode_checkpoint(flipped), IoError);
  auto cut = bytes;
  cut.resize(bytes.size() - 9);
  CHECK_THROWS_AS(decode_checkpoint(cut), IoError);
  auto magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(decode_checkpoint(magic), IoError);
  auto longer = bytes;
  longer.push_back(0);
  CHECK_THROWS_AS(decode_checkpoint(longer), IoError);
  CHECK_THROWS_AS(decode_checkpoint({}), IoError);
  CHECK_THROWS_AS(read_checkpoint((dir / "missing.bin").string()), IoError);

  // a checkpoint of a different discretisation
  const std::string path = (dir / "other.bin").string();
  {
    std::string text = small_case(dir, "none");
    text += "mesh.nx = 3\n";
    text.replace(text.find("mesh.nx = 2\n"), 12, "");
    Simulation other(parse_config(text));
    other.write_checkpoint(path);
  }
  RunConfig cfg = parse_config(small_case(dir, "none"));
  cfg.restart = path;
  CHECK_THROWS_AS(Simulation{cfg}, IoError);
}

TEST_CASE("restart inside the statistics window matches the uninterrupted run") {
  for (const char* model : {"anisotropic", "smagorinsky"}) {
    CAPTURE(model);
    const fs::path dir = scratch(std::string("twin_") + model);
    Simulation a(parse_config(small_case(dir, model)));
    while (!a.finished()) a.step();

    Simulation b(parse_config(small_case(dir, model)));
    while (b.statistics().weight() == 0.0) b.step();
    b.step();
    const long mid = b.steps();
    const std::string path = (dir / "mid.bin").string();
    b.write_checkpoint(path);
    auto c = Simulation::from_checkpoint(path);
    CHECK(c->steps() == mid);
    while (!c->finished()) c->step();

    CHECK(c->steps() == a.steps());
    CHECK(c->time() == a.time());
    CHECK(c->friction_velocity() == a.friction_velocity());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.state().data().size(); ++i)
      worst = std::max(worst, std::abs(a.state().data()[i] - c->state().data()[i]));
    CHECK(worst <= 1e-13);
    const auto pa = derived_profiles(a.statistics(), 150.0), pc = derived_profiles(c->statistics(), 150.0);
    for (std::size_t s = 0; s < pa.u.size(); ++s) {
      CHECK(std::abs(pa.u[s] - pc.u[s]) <= 1e-13);
      CHECK(std::abs(pa.u_rms[s] - pc.u_rms[s]) <= 1e-13);
      CHECK(std::abs(pa.shear_total[s] - pc.shear_total[s]) <= 1e-13);
    }
  }
}

}
