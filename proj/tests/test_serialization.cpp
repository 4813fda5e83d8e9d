#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "simplexia/serialization.hpp"

using namespace simplexia;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("simplex JSON layout") {
  Matrix v(3, 2);
  v << 0, 0, 1, 0, 0, 1;
  const Json j = to_json(Simplex(v));
  CHECK(j.dump() == R"({"dim":2,"vertices":[[0.0,0.0],[1.0,0.0],[0.0,1.0]]})");
  CHECK(simplex_from_json(j).vertices() == v);
}

TEST_CASE("dim is optional but must agree") {
  CHECK(simplex_from_json(Json::parse(R"({"vertices":[[0],[2]]})")).dim() == 1);
  CHECK_THROWS_AS((void)simplex_from_json(Json::parse(R"({"dim":3,"vertices":[[0,0],[1,0],[0,1]]})")), ParseError);
  CHECK_THROWS_AS((void)simplex_from_json(Json::parse(R"({"dim":"2","vertices":[[0,0],[1,0],[0,1]]})")), ParseError);
}

TEST_CASE("malformed simplices raise ParseError") {
  for (const char* text : {
           R"([[0,0],[1,0],[0,1]])",
           R"({"dim":2})",
           R"({"vertices":[[0,0],[1],[0,1]]})",
           R"({"vertices":[[0,0],[1,0]]})",
           R"({"vertices":[]})",
           R"({"vertices":[[0,0],[1,"x"],[0,1]]})",
           R"({"vertices":[[0,0],[1,true],[0,1]]})",
           R"({"vertices":[[0,0],[1,"inf"],[0,1]]})",
           R"({"vertices":[[0,0],3,[0,1]]})",
           R"({"vertices":"none"})",
       }) {
    CAPTURE(text);
    CHECK_THROWS_AS((void)simplex_from_json(Json::parse(text)), ParseError);
  }
}

TEST_CASE("flat simplices raise DegenerateSimplexError") {
  CHECK_THROWS_AS((void)simplex_from_json(Json::parse(R"({"vertices":[[0,0],[1,1],[2,2]]})")),
                  DegenerateSimplexError);
}

TEST_CASE("simplex files") {
  const std::string good = temp_file("simplexia_good.json", R"({"dim":1,"vertices":[[0],[1]]})");
  CHECK(read_simplex_file(good).dim() == 1);
  const std::string broken = temp_file("simplexia_broken.json", R"({"dim":1,"vertices":[[0],[1])");
  CHECK_THROWS_AS((void)read_simplex_file(broken), ParseError);
  CHECK_THROWS_AS((void)read_simplex_file("/nonexistent/simplexia.json"), ParseError);
  std::remove(good.c_str());
  std::remove(broken.c_str());
}

TEST_CASE("numbers and infinity") {
  CHECK(number_to_json(kInf) == "inf");
  CHECK(number_to_json(-kInf) == "-inf");
  CHECK(number_to_json(2.5) == 2.5);
  CHECK(number_from_json(Json("inf")) == kInf);
  CHECK(number_from_json(Json("infinity")) == kInf);
  CHECK(number_from_json(Json("∞")) == kInf);
  CHECK(number_from_json(Json("-inf")) == -kInf);
  CHECK(number_from_json(Json(3)) == 3.0);
  CHECK_THROWS_AS((void)number_from_json(Json("three")), ParseError);
  CHECK_THROWS_AS((void)number_from_json(Json(nullptr)), ParseError);
  const Json p = to_json(AsymParams{kInf, 1.0, kInf});
  CHECK(p.dump() == R"({"p":"inf","alpha":1.0,"beta":"inf"})");
}

TEST_CASE("matrices are row-major") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  CHECK(matrix_to_json(m).dump() == "[[1.0,2.0,3.0],[4.0,5.0,6.0]]");
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK_THROWS_AS((void)matrix_from_json(Json(1.0)), ParseError);
  CHECK_THROWS_AS((void)vector_from_json(Json::object()), ParseError);
}

TEST_CASE("approximation result has exactly the five keys") {
  ApproxResult r;
  r.error = 0.125;
  r.minimizer.a = Vector::Ones(1);
  r.minimizer.c = -0.125;
  r.evaluator = EvaluatorKind::MinimaxExact;
  r.flags = {"not_converged"};
  const Json j = to_json(r);
  CHECK(j.dump() == R"({"error":0.125,"a":[1.0],"c":-0.125,"evaluator":"minimax-exact","flags":["not_converged"]})");
}

TEST_CASE("symmetrization report carries every intermediate") {
  const Json j = to_json(symmetrize_step(random_unit_simplex(3, 1)));
  for (const char* key : {"pair", "frame", "y", "D", "U", "Qdiag", "Ubar", "M", "h", "S", "Shat", "F", "T_tilde",
                          "T_hat", "T_star", "factor", "symmetric", "checks"})
    CHECK(j.contains(key));
  CHECK(j["S"].size() == 3);
  CHECK(j["S"][0].size() == 3);
  CHECK(j["frame"]["A"].size() == 2);
  CHECK(simplex_from_json(j["T_star"]).dim() == 3);
  CHECK(j["checks"]["det_F"].get<double>() == doctest::Approx(1.0));
}
