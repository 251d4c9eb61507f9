#include <json.hpp>
#include <sstream>

#include "command.hpp"
#include "doctest.h"
#include "flatrat/exact_linear.hpp"
#include "flatrat/syntax.hpp"

using json = nlohmann::json;
using flatrat::Mat2;

namespace {

struct Run {
  int code;
  json record;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = flatrat::cli::run_command(args, out, err);
  return {code, json::parse(out.str()), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("snf command") {
    Run r = run({"snf", "[[0,1],[1,0]]"});
    CHECK(r.code == 0);
    CHECK(r.record["r"] == "1");
    CHECK(r.record["q"] == "-1");
    Mat2 e = flatrat::parse_matrix(r.record["e"].get<std::string>());
    Mat2 f = flatrat::parse_matrix(r.record["f"].get<std::string>());
    CHECK(flatrat::in_sl2z(e));
    CHECK(flatrat::in_sl2z(f));
    CHECK(e * Mat2::diag(1, -1) * f == Mat2(0, 1, 1, 0));
    CHECK(run({"snf", "[[0,0],[0,0]]"}).code == 1);
  }

  TEST_CASE("member and empty commands") {
    Run r = run({"member", "[[1,0],[0,4]]", "([[1,0],[0,2]])*", "--monoid", "P2Q"});
    CHECK(r.code == 0);
    CHECK(r.record["verdict"] == true);
    CHECK(run({"member", "[[1,0],[0,3]]", "([[1,0],[0,2]])*"}).record["verdict"] == false);
    CHECK(run({"member", "[[1,3],[0,1]]", "([[1,1],[0,1]])*", "--monoid", "GL2Z"}).record["verdict"] == true);
    CHECK(run({"member", "[[1,-3],[0,1]]", "([[1,1],[0,1]])*", "--monoid", "GL2Z"}).record["verdict"] == false);
    CHECK(run({"member", "[[2,0],[0,0]]", "([[2,0],[0,2]]) ([[1,0],[0,0]])", "--monoid", "Pprime"}).record["verdict"] ==
          true);
    CHECK(run({"member", "[[0,0],[0,0]]", "([[1,0],[0,0]]) ([[0,0],[0,1]])", "--monoid", "P"}).record["verdict"] ==
          true);
    CHECK(run({"member", "[[1,0],[0,0]]", "([[1,1],[0,1]])*", "--monoid", "GL2Z"}).record["verdict"] == false);
    // Label outside the declared monoid.
    Run bad = run({"member", "[[1,0],[0,4]]", "([[1,0],[0,2]])*", "--monoid", "GL2Z"});
    CHECK(bad.code == 1);
    CHECK(bad.record["error"]["kind"] == "InvalidInput");
    CHECK_FALSE(bad.err.empty());

    Run e = run({"--def", "X=[[1,1],[0,1]]*", "empty", "(X) \\ (X)"});
    CHECK(e.code == 0);
    CHECK(e.record["verdict"] == true);
    CHECK(run({"empty", "([[1,0],[0,2]] ([[1,1],[0,1]])*) & ([[1,0],[0,2]] ([[1,2],[0,1]])*)"}).record["verdict"] ==
          false);
    CHECK(run({"empty", "([[1,0],[0,2]]) & ([[1,0],[0,3]])"}).record["verdict"] == true);
  }

  TEST_CASE("classify, cosets and oracle commands") {
    Run c = run({"classify", "[[2,0],[0,2]]", "[[3,0],[0,3]]"});
    CHECK(c.record["case"] == "DirectProduct");
    CHECK(c.record["k"] == 2);
    Run bs = run({"classify", "[[1,0],[0,2]]"});
    CHECK(bs.record["case"] == "ContainsBS");
    CHECK(bs.record["q"] == "2");
    CHECK(run({"classify", "[[0,-1],[1,0]]"}).code == 1);

    Run k = run({"cosets", "[[1,0],[0,6]]"});
    CHECK(k.record["index"] == 12);
    CHECK(k.record["reps"].size() == 12);

    Run o = run({"oracle", "[[1,2],[0,1]]", "[[1,1],[0,1]]*", "--bound", "3"});
    CHECK(o.record["verdict"] == "Member");
    CHECK(o.record["witness"].size() == 2);
    Run n = run({"oracle", "[[1,0],[0,3]]", "[[1,0],[0,2]]*", "--bound", "5"});
    CHECK(n.record["verdict"] == "NotFoundUpTo");
    CHECK(n.record["bound"] == 5);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"member", "[[1,0],[0,4", "([[1,0],[0,2]])*"}).code == 1);
    CHECK(run({"member", "[[1,0],[0,4]]", "([[1,0],[0,2]])*", "--monoid", "Q"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    Run limit = run({"--max-coset-reps", "3", "cosets", "[[1,0],[0,7]]"});
    CHECK(limit.code == 2);
    CHECK(limit.record["error"]["kind"] == "ResourceLimit");
    CHECK(run({"--max-oracle-products", "4", "oracle", "[[5,0],[0,5]]", "([[1,1],[0,1]] | [[0,-1],[1,0]])*",
               "--bound", "6"})
              .code == 2);
    std::ostringstream out, err;
    CHECK(flatrat::cli::run_command({"--help"}, out, err) == 0);
    // Deterministic output for a fixed budget.
    CHECK(run({"member", "[[1,0],[0,4]]", "([[1,0],[0,2]])*"}).record ==
          run({"member", "[[1,0],[0,4]]", "([[1,0],[0,2]])*"}).record);
  }
}
