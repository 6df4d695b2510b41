#include "test_helpers.hpp"

#include <hcurl/experiment.hpp>

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace hcurl;
using namespace hcurl::testing;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

Index amg(const ResultRow& r, Method m) {
  return r.methods[static_cast<int>(m)].amg_iterations.value_or(-1);
}

} // namespace

TEST_CASE("family names") {
  for (Family f : {Family::uniform, Family::jump, Family::delaunay}) CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS(parse_family("circle"), Error);
}

TEST_CASE("right-hand side and initial guess") {
  CHECK(experiment_rhs(4) == Vector{1, 2, 3, 4});
  const auto x = experiment_initial_guess(100, 7);
  CHECK(x == experiment_initial_guess(100, 7));
  CHECK(x != experiment_initial_guess(100, 8));
  CHECK(std::all_of(x.begin(), x.end(), [](double v) { return v >= -1.0 && v <= 1.0; }));
}

TEST_CASE("problem sizes of the uniform family") {
  // interior edges of the uniform triangulation with 2^L cells per side
  ExperimentConfig c;
  for (int l = 1; l <= 5; ++l) {
    const Index m = Index{1} << l;
    CHECK(make_problem(c, l).system.size() == 3 * m * m - 2 * m);
  }
  CHECK_THROWS_AS(make_problem(c, -1), Error);
}

TEST_CASE("csv layout and sentinels") {
  ResultRow row;
  row.refinement_level = 3;
  row.size = 176;
  row.methods[0].amg_iterations = 12;
  row.methods[0].pcg_iterations = 7;
  row.methods[0].operator_complexity = 1.2345;
  std::ostringstream os;
  emit_csv(os, {row});
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header ==
        "refinement level,size,amg_iter_geo,amg_iter_ref,amg_iter_alg,pcg_iter_geo,pcg_iter_ref,pcg_iter_alg,"
        "operator_complexity_geo,operator_complexity_ref,operator_complexity_alg");
  const auto cells = split_csv(line);
  REQUIRE(cells.size() == 11);
  CHECK(cells[0] == "3");
  CHECK(cells[1] == "176");
  CHECK(cells[2] == "12");
  CHECK(cells[3] == "-");
  CHECK(cells[5] == "7");
  CHECK(cells[8] == "1.23");
  CHECK(cells[10] == "-");
}

TEST_CASE("loose tolerance stops immediately") {
  ExperimentConfig c;
  c.levels = {2};
  c.tol = 1.0;
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 1);
  for (const auto& m : rows[0].methods) {
    REQUIRE(m.amg_iterations);
    CHECK(*m.amg_iterations <= 1);
    CHECK(m.error.empty());
  }
  c.tol = 0.0;
  CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("uniform family: ref tracks geo and runs are deterministic") {
  ExperimentConfig c;
  c.levels = {2, 3, 4};
  const auto rows = run_experiment(c);
  const auto again = run_experiment(c);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    CHECK(std::abs(amg(r, Method::ref) - amg(r, Method::geo)) <= 1);
    for (int m = 0; m < 3; ++m) {
      CHECK(r.methods[m].amg_iterations == again[k].methods[m].amg_iterations);
      CHECK(r.methods[m].pcg_iterations == again[k].methods[m].pcg_iterations);
      CHECK(r.methods[m].operator_complexity == again[k].methods[m].operator_complexity);
      CHECK(*r.methods[m].pcg_iterations <= *r.methods[m].amg_iterations);
      CHECK(*r.methods[m].operator_complexity >= 1.0);
    }
  }
}

TEST_CASE("jump family separates geometric from ideal transfers") {
  ExperimentConfig c;
  c.family = Family::jump;
  c.levels = {3};
  const auto r = run_experiment(c).at(0);
  CHECK(amg(r, Method::geo) > 3 * amg(r, Method::ref));
  CHECK(amg(r, Method::alg) <= amg(r, Method::ref) + 5);
}

TEST_CASE("method subset leaves the other columns empty") {
  ExperimentConfig c;
  c.levels = {2};
  c.methods = {Method::alg};
  const auto r = run_experiment(c).at(0);
  CHECK_FALSE(r.methods[0].amg_iterations);
  CHECK(r.methods[2].amg_iterations);
}

TEST_CASE("coarsening svg") {
  const auto m = uniform_tri_mesh(2);
  const auto s = assemble(m, constant_mu(m), 0.01);
  const auto split = build_algebraic_splitting(s.A, s.G);
  std::ostringstream os;
  dump_coarsening_svg(os, m, s.dofs, split);
  const std::string svg = os.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_of(svg, "<line ") == m.edges.size());
  CHECK(count_of(svg, "<polyline ") == static_cast<std::size_t>(split.num_pairs()));
  CHECK(count_of(svg, "<circle ") == split.coarse_nodes.size());
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("verification suite") {
  const auto reports = run_verification({});
  CHECK(reports.size() > 20);
  for (const auto& r : reports) {
    INFO(r.name << " [" << r.context << "] " << r.measured << " " << r.note);
    CHECK((r.passed || r.skipped));
  }
  VerificationConfig bad;
  bad.inject_double_path = true;
  const auto with_control = run_verification(bad);
  bool failed = false;
  for (const auto& r : with_control)
    if (r.context.find("double-path") != std::string::npos && !r.passed && !r.skipped) failed = true;
  CHECK(failed);
}
