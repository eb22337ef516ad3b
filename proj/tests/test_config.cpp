#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "femkit/config.hpp"

using namespace femkit;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(FEMKIT_SOURCE_DIR) / "configs";

const char* kLaplace = R"(# worked example
[problem]
kind = poisson1d

[domain]
kind = interval
a = 0
b = 1
n = 5

[coefficients]
f = -1
exact = x^2/2 - x/2 + 1

[bc]
dirichlet.left = 1
dirichlet.right = 1
)";

int error_line(const std::string& text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

const char* kAdvdiff = R"([problem]
kind = advdiff1d
[domain]
kind = interval
a = 0
b = 1
n = 10
[coefficients]
mu = 0.1
[bc]
dirichlet.left = 1
dirichlet.right = 0
)";

std::string with_mode(std::string text) {
  return text.insert(text.find("[domain]"), "mode = steady\n");
}

}  // namespace

TEST_CASE("the worked Laplace example parses") {
  const ProblemConfig c = parse_config(kLaplace);
  CHECK(c.kind == ProblemKind::poisson1d);
  REQUIRE(c.domain.has_value());
  CHECK(*c.domain == DomainSpec{IntervalSpec{0.0, 1.0, 5}});
  CHECK(c.coefficient("f")(0.3) == -1.0);
  CHECK(c.coefficient("exact")(0.2) == doctest::Approx(0.92));
  CHECK(c.coefficient("kappa", 1.0)(0.0) == 1.0);
  REQUIRE(c.bc.size() == 2);
  CHECK(c.bc[0].label == 1);
  CHECK(c.bc[1].label == 2);
  CHECK(c.solver == SolverKind::lu);
  CHECK(c.format == OutputFormat::csv);
}

TEST_CASE("missing keys are named") {
  CHECK(error_text(std::string(kAdvdiff)).find("missing required key 'time.dt'") != std::string::npos);
  CHECK(error_text("[problem]\nkind = poisson2d\n").find("domain") != std::string::npos);
}

TEST_CASE("line numbers of key-level errors") {
  std::string text = kLaplace;
  CHECK(error_line(text + "\n[output]\nformatt = csv\n") == 20);
  CHECK(error_line("[problem]\nkind = poisson9\n") == 2);
  CHECK(error_line("[problem]\nkind = poisson1d\nkind = poisson2d\n") == 3);
  CHECK(error_line("[problem]\nkind poisson1d\n") == 2);
  CHECK(error_line("x = 1\n") == 1);
  CHECK(error_line("[problem\n") == 1);
  std::string bad_expr = kLaplace;
  bad_expr.replace(bad_expr.find("f = -1"), 6, "f = sin(x)*");
  CHECK(error_line(bad_expr) == 12);
  CHECK(error_text(bad_expr).find("at position 7") != std::string::npos);
  std::string bad_n = kLaplace;
  bad_n.replace(bad_n.find("n = 5"), 5, "n = 2.5");
  CHECK(error_line(bad_n) == 9);
}

TEST_CASE("semantic checks") {
  CHECK(error_text("[problem]\nkind = stokes\nspace = P1\n").find("fixed") != std::string::npos);
  CHECK_THROWS_AS(parse_config(std::string(kLaplace) + "\n[time]\ndt = 1\nT = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config(std::string(kAdvdiff) + "[time]\ndt = 0.1\nT = 0.05\n"), ParseError);
  CHECK_NOTHROW(parse_config(std::string(kAdvdiff) + "[time]\ndt = 0.1\nT = 1\n"));
  CHECK_NOTHROW(parse_config(with_mode(kAdvdiff)));
  std::string two_d = "[problem]\nkind = poisson2d\n[domain]\nkind = rectangle\nx0 = 0\nx1 = 1\ny0 = 0\ny1 = 1\nnx = 2\nny = 2\n";
  CHECK_NOTHROW(parse_config(two_d + "[bc]\ndirichlet.1 = 0\nneumann = 2, 3, 4\n"));
  CHECK_THROWS_AS(parse_config(two_d + "[bc]\ndirichlet.1 = 0\nneumann.1 = 0\n"), ParseError);
  CHECK_THROWS_AS(parse_config(two_d + "[coefficients]\nmu = 1\n"), ParseError);
}

TEST_CASE("every shipped config round-trips through serialize") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const ProblemConfig c = parse_config_file(entry.path());
    const std::string text = serialize_config(c);
    const ProblemConfig again = parse_config(text, "serialized");
    CHECK(again == c);
    CHECK(serialize_config(again) == text);
    ++count;
  }
  CHECK(count >= 8);
}

TEST_CASE("unreadable files are input errors naming the path") {
  try {
    parse_config_file("/nonexistent/file.cfg");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/file.cfg") != std::string::npos);
  }
}
