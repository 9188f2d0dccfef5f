#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"
#include "chemolab/grid.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

using namespace chemolab;

namespace {

constexpr double pi = std::numbers::pi;

double bump(double x, double r) {
  const double s = 1.0 - x * x / (r * r);
  return s > 0.0 ? s * s : 0.0;
}

} // namespace

TEST(Grid, SpacingAndNodes) {
  const Grid g = Grid::line(2.0 * pi, 64, Boundary::periodic);
  EXPECT_DOUBLE_EQ(g.spacing(), 2.0 * pi / 64);
  EXPECT_DOUBLE_EQ(g.coordinate(0, 0), -pi);
  EXPECT_DOUBLE_EQ(g.coordinate(0, 32), 0.0);
  EXPECT_DOUBLE_EQ(g.measure(), 2.0 * pi);

  const Grid r = Grid::line(4.0, 16, Boundary::reflecting);
  EXPECT_DOUBLE_EQ(r.coordinate(0, 0), -2.0 + 0.125);
  EXPECT_DOUBLE_EQ(r.coordinate(0, 15), 2.0 - 0.125);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid::line(1.0, 15, Boundary::periodic), InvalidArgument);
  EXPECT_THROW(Grid::line(1.0, 14, Boundary::periodic), InvalidArgument);
  EXPECT_THROW(Grid::line(-1.0, 32, Boundary::periodic), InvalidArgument);
  const double extent[2] = {1.0, 2.0};
  const std::size_t points[2] = {16, 16};
  EXPECT_THROW(Grid(2, extent, points, Boundary::periodic), InvalidArgument);
  const std::size_t matched[2] = {16, 32};
  EXPECT_NO_THROW(Grid(2, extent, matched, Boundary::periodic));
}

TEST(Grid, RowMajorRoundTrip) {
  const double extent[2] = {2.0, 3.0};
  const std::size_t points[2] = {16, 24};
  const Grid g(2, extent, points, Boundary::reflecting);
  EXPECT_EQ(g.size(), 16u * 24u);
  for (std::size_t ix = 0; ix < 16; ++ix) {
    for (std::size_t iy = 0; iy < 24; ++iy) {
      const std::size_t k = g.index(ix, iy);
      EXPECT_EQ(k, ix * 24 + iy);
      const auto back = g.unravel(k);
      EXPECT_EQ(back[0], ix);
      EXPECT_EQ(back[1], iy);
      const auto pos = g.position(k);
      EXPECT_DOUBLE_EQ(pos[0], g.coordinate(0, ix));
      EXPECT_DOUBLE_EQ(pos[1], g.coordinate(1, iy));
    }
  }
}

TEST(Field, ZeroFunction) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  const auto f = field_from_function(g, [](std::span<const double>, double) { return 0.0; });
  for (double v : f.values)
    EXPECT_EQ(v, 0.0);
}

TEST(Field, ResolvedCosineHasZeroMean) {
  const double L = 7.0;
  const Grid g = Grid::line(L, 128, Boundary::periodic);
  const auto f = field_from_function(
      g, [&](std::span<const double> x, double) { return std::cos(2.0 * pi * x[0] / L); });
  EXPECT_NEAR(mass(f) / L, 0.0, 1e-12);
}

TEST(Field, TimeArgumentIsPassedThrough) {
  const Grid g = Grid::line(1.0, 16, Boundary::periodic);
  const auto f =
      field_from_function(g, [](std::span<const double>, double t) { return 2.0 * t; }, 1.5);
  EXPECT_EQ(extrema(f).min, 3.0);
}

TEST(Field, NonFiniteSampleNamesTheNode) {
  const Grid g = Grid::line(2.0, 16, Boundary::periodic);
  try {
    field_from_function(g, [](std::span<const double> x, double) {
      return x[0] > 0.4 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    });
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
  }
}

TEST(Field, BumpSupportAndPeak) {
  const Grid g = Grid::line(20.0, 64, Boundary::periodic);
  const double r = 3.0;
  const auto f = field_from_function(
      g, [&](std::span<const double> x, double) { return bump(x[0], r); });
  EXPECT_EQ(extrema(f).max, 1.0); // node on the origin
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[g.size() - 1], 0.0);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (std::abs(g.coordinate(0, k)) >= r) {
      EXPECT_EQ(f[k], 0.0);
    }
}

TEST(Measures, ConstantField) {
  const double extent[2] = {3.0, 6.0};
  const std::size_t points[2] = {16, 32};
  const Grid g(2, extent, points, Boundary::periodic);
  const ScalarField f(g, 0.25);
  const auto e = extrema(f);
  EXPECT_EQ(e.min, 0.25);
  EXPECT_EQ(e.max, 0.25);
  EXPECT_NEAR(mass(f), 0.25 * 18.0, 1e-13);
  EXPECT_EQ(linf(f), 0.25);
}

TEST(Measures, CosineExtremaConvergeAtSecondOrder) {
  // reflecting nodes never hit the crest of cos(pi x / L) at 0 for even counts
  double previous = 0.0;
  for (std::size_t n : {32, 64, 128}) {
    const double L = 5.0;
    const Grid g = Grid::line(L, n, Boundary::reflecting);
    const auto f = field_from_function(
        g, [&](std::span<const double> x, double) { return std::cos(2.0 * pi * x[0] / L); });
    const auto e = extrema(f);
    const double h = g.spacing();
    const double err = std::max(std::abs(e.min + 1.0), std::abs(e.max - 1.0));
    EXPECT_LE(err, 2.0 * pi * pi * h * h / (L * L));
    if (previous > 0.0) {
      EXPECT_NEAR(previous / err, 4.0, 0.1);
    }
    previous = err;
  }
}

TEST(Measures, BumpMassAgainstQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  const double r = 1.0;
  const double exact =
      gauss_kronrod<double, 61>::integrate([&](double x) { return bump(x, r); }, -r, r, 10, 1e-14);
  EXPECT_NEAR(exact, 16.0 * r / 15.0, 1e-13);

  const double h = 2.0 * pi / 256.0;
  const Grid g = Grid::line(256 * h, 256, Boundary::periodic);
  const auto f = field_from_function(
      g, [&](std::span<const double> x, double) { return bump(x[0], r); });
  EXPECT_NEAR(mass(f), exact, 1e-3);
}

TEST(Measures, VectorNorm) {
  const double extent[2] = {1.0, 1.0};
  const std::size_t points[2] = {16, 16};
  const Grid g(2, extent, points, Boundary::periodic);
  VectorField v(g);
  v.components[0][5] = 3.0;
  v.components[1][5] = -4.0;
  EXPECT_DOUBLE_EQ(v.magnitude(5), 5.0);
  EXPECT_DOUBLE_EQ(linf(v), 5.0);
}

TEST(Csv, HeaderAndOrdering) {
  const double extent[2] = {2.0, 2.0};
  const std::size_t points[2] = {16, 16};
  const Grid g(2, extent, points, Boundary::periodic);
  ScalarField f(g);
  f[g.index(1, 2)] = 0.1;
  std::ostringstream out;
  write_csv(out, f);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,value");
  std::size_t rows = 0;
  std::string row_1_2;
  while (std::getline(in, line)) {
    if (rows == 16 + 2)
      row_1_2 = line;
    ++rows;
  }
  EXPECT_EQ(rows, g.size());
  EXPECT_EQ(row_1_2, format_number(g.coordinate(0, 1)) + "," + format_number(g.coordinate(1, 2)) +
                         ",0.10000000000000001");

  const Grid line_grid = Grid::line(1.0, 16, Boundary::periodic);
  std::ostringstream one;
  write_csv(one, ScalarField(line_grid, 1.0));
  EXPECT_EQ(one.str().substr(0, 10), "x,value\n-0");
}

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 2.0 / 19.0, -1e-300, 12345.678}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(std::optional<double>{}), "");
  const auto list = parse_number_list("0.001, 0.2,0.4");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[1], 0.2);
  EXPECT_TRUE(parse_number_list("").empty());
  EXPECT_THROW(parse_number_list("1,,2"), InvalidArgument);
  EXPECT_THROW(parse_number_list("1,x"), InvalidArgument);
}
