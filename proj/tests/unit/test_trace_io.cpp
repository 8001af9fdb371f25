#include "doctest.h"
#include "helpers.hpp"

#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"
#include "mocondg/robust.hpp"
#include "mocondg/trace_io.hpp"

#include <filesystem>
#include <sstream>

using namespace mocondg;
using th::vec;

TEST_CASE("format_double round trips") {
  for (double v : {0.1, -3.0, 1e-300, 123456.789, 2.0 / 3.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
}

TEST_CASE("trace exports") {
  RobustConfig rc;
  const auto p = make_robust_problem("BK1", rc);
  const auto tr = run_condg(p, vec({9, 9}));
  const std::string csv = trace_csv(tr);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,lambda,theta,theta_pg,inner_evals,step_ratio,F_1,F_2,x_1,x_2");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == tr.iterations());

  auto a = trace_json(tr), b = trace_json(run_condg(p, vec({9, 9})));
  CHECK(a.contains("metadata"));
  a.erase("metadata");
  b.erase("metadata");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("text files") {
  const auto dir = std::filesystem::temp_directory_path() / "mocondg_io_test";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "a" / "b.txt").string();
  write_text_file(path, "hello\n");
  CHECK(read_text_file(path) == "hello\n");
  CHECK_THROWS_AS(read_text_file((dir / "missing").string()), IoFailure);
  std::filesystem::remove_all(dir);
}
