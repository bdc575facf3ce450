#pragma once

#include "diag/fields.hpp"
#include "lab/toml.hpp"
#include "solver/solve.hpp"

namespace lamlab::lab {

struct DiagnosticsSpec {
  std::vector<std::array<double, 3>> probes;  // (t, x, y); t ignored in elliptic mode
  std::vector<double> r_list{0.2, 0.1, 0.05, 0.02};
  int budget = 4000;
  double delta = 0.75;
  double mu = 1.0;
  double margin = 0.02;
};

struct SweepSpec {
  bool enabled = false;
  std::vector<double> eps_list;
  double a0 = 2.0;
  double window_factor = 2.0;
  std::vector<double> phi_radii{0.2, 0.1, 0.05};
};

struct GeometryCheckSpec {
  int budget = 10000;
  std::vector<double> eps_list;  // neck re-instantiation; empty = this stack only
};

// Validated, compiled scenario. Defaults: nx=64, ny=8, seed=0xC0FFEE,
// CG tolerance 1e-12, delta=0.75, mu=1.
struct ScenarioConfig {
  enum class Mode { Elliptic, Parabolic };
  Mode mode = Mode::Elliptic;
  int dimension = 2;
  std::uint64_t seed = kDefaultSeed;
  double cg_tol = 1e-12;

  bool stack_is_neck = false;
  double neck_eps = 0.05;
  std::vector<geom::InterfacePtr> interfaces;
  std::vector<solver::Poly3> iface_polys;  // filled when all interfaces are polynomial
  bool iface_polys_ok = false;

  solver::CoefficientModel coeff;
  solver::ForcingModel forcing;
  mesh::BoundaryKind boundary = mesh::BoundaryKind::TopBottom;
  mesh::MeshParams mesh{64, 8, 1e-12};
  solver::TimeGrid time{-1.0, 0.0, 32};

  DiagnosticsSpec diag;
  SweepSpec sweep;
  GeometryCheckSpec geometry;

  std::string raw_text;
  std::string hash_hex;

  geom::InterfaceStack make_stack() const {
    return geom::InterfaceStack(dimension, interfaces);
  }
  bool parabolic() const { return mode == Mode::Parabolic; }
  std::string canonical() const;
};

ScenarioConfig load_scenario_text(const std::string& toml_text);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace lamlab::lab
