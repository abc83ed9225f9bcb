#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "mslab/assembly.hpp"
#include "mslab/field.hpp"
#include "mslab/field_io.hpp"
#include "mslab/linear_solver.hpp"
#include "mslab/mesh.hpp"

using namespace mslab;

namespace {

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const SparseMatrix& a) {
  Dense d(a.rows(), std::vector<double>(a.cols(), 0.0));
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) d[it.row()][it.col()] = it.value();
  return d;
}

// Gaussian elimination with partial pivoting; independent of Eigen.
std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

void expect_symmetric(const SparseMatrix& a) {
  const Dense d = to_dense(a);
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(d[i][j], d[j][i], 1e-14);
}

}  // namespace

TEST(Mesh, IntervalCounts) {
  const Mesh a = build_mesh(Interval{0, 1}, 0.5);
  EXPECT_EQ(a.num_cells(), 2);
  EXPECT_EQ(a.num_vertices(), 3);
  const Mesh b = build_mesh(Interval{-1, 1}, 0.01);
  EXPECT_EQ(b.num_cells(), 200);
  EXPECT_LE(b.spacing(), 0.01 + 1e-15);
}

TEST(Mesh, RectangleCounts) {
  const Mesh m = build_mesh(Rectangle{0, 1, 0, 1}, 0.5);
  EXPECT_EQ(m.num_cells(), 8);
  EXPECT_EQ(m.num_vertices(), 9);
  double area = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    EXPECT_GT(m.measure(c), 0.0);
    area += m.measure(c);
  }
  EXPECT_NEAR(area, 1.0, 1e-15);
  EXPECT_NEAR(m.max_diameter(), std::sqrt(0.5), 1e-15);
}

TEST(Mesh, BoundaryTags) {
  const Mesh m = build_mesh(Rectangle{0, 1, 0, 1}, 0.5);
  int left = 0, top = 0, interior = 0;
  for (int i = 0; i < m.num_vertices(); ++i) {
    left += m.on_side(i, Side::Left);
    top += m.on_side(i, Side::Top);
    interior += m.boundary_flags(i) == 0;
  }
  EXPECT_EQ(left, 3);
  EXPECT_EQ(top, 3);
  EXPECT_EQ(interior, 1);
}

TEST(Mesh, RejectsDegenerateInput) {
  EXPECT_THROW(build_mesh(Interval{1, 1}, 0.1), std::invalid_argument);
  EXPECT_THROW(build_mesh(Interval{0, 1}, 0.0), std::invalid_argument);
  EXPECT_THROW(build_mesh(Rectangle{0, 1, 0, 0}, 0.1), std::invalid_argument);
}

TEST(Stiffness, TwoCellHandAssembly) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.5);
  const Dense k = to_dense(assemble_stiffness_p1(m));
  const Dense expected = {{2, -2, 0}, {-2, 4, -2}, {0, -2, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(k[i][j], expected[i][j], 1e-12);
}

TEST(Stiffness, WeightScalesLinearly) {
  const Mesh m = build_mesh(Rectangle{0, 1, 0, 2}, 0.25);
  const SparseMatrix one = assemble_stiffness_p1(m);
  const SparseMatrix two = assemble_stiffness_p1(m, Field::p0(m, 2.0));
  EXPECT_NEAR((two - 2.0 * one).norm(), 0.0, 1e-12);
  EXPECT_THROW(assemble_stiffness_p1(m, 0.0), std::invalid_argument);
  EXPECT_THROW(assemble_stiffness_p1(m, Field::p0(m, -1.0)), std::invalid_argument);
}

TEST(Stiffness, UnitRightTriangle) {
  const Mesh m = build_mesh(Rectangle{0, 1, 0, 1}, 1.0);
  ASSERT_EQ(m.num_cells(), 2);
  const Dense k = to_dense(assemble_stiffness_p1(m));
  // Each unit right triangle gives 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]] at its right-angle vertex;
  // two triangles meeting on a diagonal give the 5-point Laplacian on the corners.
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(k[i][i], 1.0, 1e-12);
  double total = 0.0;
  for (const auto& row : k)
    for (double v : row) total += v;
  EXPECT_NEAR(total, 0.0, 1e-12);
}

TEST(Stiffness, AnnihilatesConstantsAndLinearsInInterior) {
  const Mesh m = build_mesh(Rectangle{-1, 1, 0, 1}, 0.1);
  const SparseMatrix k = assemble_stiffness_p1(m);
  expect_symmetric(assemble_stiffness_p1(build_mesh(Rectangle{0, 1, 0, 1}, 0.25)));
  const Vector ones = Vector::Ones(m.num_vertices());
  EXPECT_LT((k * ones).lpNorm<Eigen::Infinity>(), 1e-12);
  const Field lin = interpolate_p1(m, [](const Point& x) { return 2 * x[0] - 3 * x[1] + 1; });
  const Vector r = k * to_vector(lin);
  for (int i = 0; i < m.num_vertices(); ++i)
    if (m.boundary_flags(i) == 0) EXPECT_NEAR(r[i], 0.0, 1e-11);
}

TEST(MixedMass, Examples) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.5);
  const Dense b = to_dense(assemble_mixed_mass(m, Field::p0(m, 1.0)));
  EXPECT_NEAR(b[0][0], 0.25, 1e-15);
  EXPECT_NEAR(b[1][0], 0.25, 1e-15);
  EXPECT_NEAR(b[1][1], 0.25, 1e-15);
  EXPECT_NEAR(b[2][0], 0.0, 1e-15);
  const SparseMatrix zero = assemble_mixed_mass(m, Field::p0(m, 0.0));
  EXPECT_EQ(zero.norm(), 0.0);

  const Mesh t = build_mesh(Rectangle{0, 1, 0, 1}, 1.0);
  const Dense bt = to_dense(assemble_mixed_mass(t, Field::p0(t, 1.0)));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(bt[t.cell(0)[k]][0], 0.5 / 3, 1e-15);
}

TEST(Mass, Examples) {
  const Mesh m = build_mesh(Interval{0, 1}, 1.0);
  const Dense a = to_dense(assemble_mass_p1(m));
  EXPECT_NEAR(a[0][0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(a[0][1], 1.0 / 6, 1e-15);
  const Mesh t = build_mesh(Rectangle{0, 1, 0, 1}, 1.0);
  const Dense at = to_dense(assemble_mass_p1(t));
  // Vertices private to one triangle carry A/6 = 1/12.
  int singles = 0;
  for (int i = 0; i < 4; ++i) singles += std::abs(at[i][i] - 1.0 / 12) < 1e-15;
  EXPECT_EQ(singles, 2);
  const Mesh big = build_mesh(Rectangle{-1, 1, -1, 2}, 0.3);
  const SparseMatrix mb = assemble_mass_p1(big);
  EXPECT_NEAR(mb.sum(), 6.0, 1e-12);
  expect_symmetric(assemble_mass_p1(build_mesh(Rectangle{0, 1, 0, 1}, 0.25)));
}

TEST(Quadrature, P1ProductsExact) {
  const Mesh m = build_mesh(Rectangle{0, 1, 0, 1}, 0.2);
  const Field a = interpolate_p1(m, [](const Point& x) { return 1 + x[0] + 2 * x[1]; });
  const Field b = interpolate_p1(m, [](const Point& x) { return x[0] - x[1]; });
  // int (1 + x + 2y)(x - y) over the unit square = -1/12
  const SparseMatrix mass = assemble_mass_p1(m);
  EXPECT_NEAR(to_vector(a).dot(mass * to_vector(b)), -1.0 / 12, 1e-14);
  const Field diff = a - b;
  const double norm2 = to_vector(diff).dot(mass * to_vector(diff));
  EXPECT_NEAR(std::pow(l2_distance(a, b), 2), norm2, 1e-13);
}

TEST(Norms, Examples) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.5);
  EXPECT_NEAR(l2_norm(Field::p0(m, 1.0)), 1.0, 1e-15);
  Field hat = Field::p1(m, 0.0);
  hat[1] = 1.0;
  // interior hat: two cells of h/3 and slope 1/h
  EXPECT_NEAR(std::pow(l2_norm(hat), 2), 1.0 / 3, 1e-15);
  EXPECT_NEAR(gradient_energy(hat), 4.0, 1e-12);
  Field edge = Field::p1(m, 0.0);
  edge[0] = 1.0;
  EXPECT_NEAR(std::pow(l2_norm(edge), 2), 1.0 / 6, 1e-15);
  EXPECT_NEAR(gradient_energy(edge), 2.0, 1e-12);
  EXPECT_NEAR(l2_norm(Field::p0(m, 1.0), Field::p0(m, 4.0)), 2.0, 1e-15);
  const Mesh other = build_mesh(Interval{0, 1}, 0.5);
  EXPECT_THROW(l2_distance(Field::p0(m, 1.0), Field::p0(other, 1.0)), std::invalid_argument);
}

TEST(Norms, MixedSpacesAgainstAnalytic) {
  // P0 = 1 versus P1 = x on (0,1): int (1 - x)^2 = 1/3.
  const Mesh m = build_mesh(Interval{0, 1}, 0.125);
  const Field one = Field::p0(m, 1.0);
  const Field x = interpolate_p1(m, [](const Point& p) { return p[0]; });
  EXPECT_NEAR(std::pow(l2_distance(one, x), 2), 1.0 / 3, 1e-14);
}

TEST(Norms, InterpolationErrorIsSecondOrder) {
  const auto fn = [](const Point& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); };
  std::vector<double> errs;
  for (double h : {0.2, 0.1, 0.05}) {
    const Mesh m = build_mesh(Rectangle{0, 1, 0, 1}, h);
    errs.push_back(l2_distance(interpolate_p1(m, fn), fn));
  }
  for (size_t i = 1; i < errs.size(); ++i) EXPECT_NEAR(std::log2(errs[i - 1] / errs[i]), 2.0, 0.15);
}

TEST(Solver, IdentityAndTwoCell) {
  SparseMatrix eye(4, 4);
  eye.setIdentity();
  const Vector b = Vector::LinSpaced(4, 1, 4);
  EXPECT_LT((solve_spd(eye, b) - b).norm(), 1e-15);
  SparseMatrix k(1, 1);
  k.insert(0, 0) = 4.0;
  EXPECT_NEAR(solve_spd(k, Vector::Ones(1))[0], 0.25, 1e-15);
}

TEST(Solver, RandomSpdAgainstDenseOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = dist(rng);
    const Eigen::MatrixXd a = g * g.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    std::vector<double> rhs(n);
    for (double& r : rhs) r = dist(rng);
    Dense dense(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dense[i][j] = a(i, j);
    const std::vector<double> oracle = dense_solve(dense, rhs);
    const Vector x = solve_spd(a.sparseView(), Eigen::Map<const Vector>(rhs.data(), n));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(x[i], oracle[i], 1e-10);
  }
}

TEST(Solver, ResidualContractOnAssembledSystem) {
  const Mesh m = build_mesh(Rectangle{0, 1, 0, 1}, 0.05);
  const SparseMatrix a = assemble_stiffness_p1(m, 0.3) + SparseMatrix(assemble_mass_p1(m));
  const Vector b = Vector::Ones(m.num_vertices());
  const Vector x = solve_spd(a, b);
  EXPECT_LE((a * x - b).norm(), 1e-12 * b.norm());
}

TEST(Solver, NonSpdRaises) {
  SparseMatrix a(2, 2);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = -1.0;
  EXPECT_THROW(solve_spd(a, Vector::Ones(2)), SolverError);
  SparseMatrix zero(2, 2);
  EXPECT_THROW(solve_spd(zero, Vector::Ones(2)), SolverError);
}

TEST(Solver, DirichletLifting) {
  // -u'' = 0 on (0,1) with u(0)=1, u(1)=3 gives the linear interpolant.
  const Mesh m = build_mesh(Interval{0, 1}, 0.1);
  DirichletConstraint bc(m.num_vertices());
  bc.fix(0, 1.0);
  bc.fix(m.num_vertices() - 1, 3.0);
  const Vector x =
      solve_constrained(assemble_stiffness_p1(m), Vector::Zero(m.num_vertices()), bc);
  for (int i = 0; i < m.num_vertices(); ++i) EXPECT_NEAR(x[i], 1 + 2 * m.vertex(i)[0], 1e-12);
}

TEST(Io, CsvLayout) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.5);
  std::ostringstream p1, p0;
  write_csv(p1, Field::p1(m, 1.5));
  write_csv(p0, Field::p0(m, 2.0));
  EXPECT_EQ(p1.str(), "x,value\n0,1.5\n0.5,1.5\n1,1.5\n");
  EXPECT_EQ(p0.str(), "x,value\n0.25,2\n0.75,2\n");
  const Mesh t = build_mesh(Rectangle{0, 1, 0, 1}, 1.0);
  std::ostringstream p2;
  write_csv(p2, Field::p1(t, 0.0));
  EXPECT_EQ(p2.str().substr(0, 8), "x,y,valu");
}

TEST(Io, VtkHeaderAndCounts) {
  const Mesh t = build_mesh(Rectangle{0, 1, 0, 1}, 0.5);
  const Field u = Field::p0(t, 1.0);
  const Field w = Field::p1(t, 2.0);
  std::ostringstream out;
  write_vtk(out, t, {{"u", &u}, {"w", &w}});
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version", 0), 0u);
  EXPECT_NE(s.find("POINTS 9"), std::string::npos);
  EXPECT_NE(s.find("CELLS 8 32"), std::string::npos);
  EXPECT_NE(s.find("CELL_DATA 8"), std::string::npos);
  EXPECT_NE(s.find("POINT_DATA 9"), std::string::npos);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3, 1e-300, 6.07446110935521e-8, -2.5}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}
