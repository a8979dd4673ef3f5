#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CmdResult {
  int status = -1;
  std::string out;
};

CmdResult run(const std::string& args, bool merge_stderr = true) {
  const std::string cmd =
      std::string(FISKIT_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(FISKIT_DATA_DIR) + "/" + name; }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

TEST_CASE("validate prints a summary for a good model") {
  const auto r = run("validate " + data("minimal.fis"));
  CHECK(r.status == 0);
  CHECK(r.out == "tiny: mamdani, 1 inputs, 1 rules\n");
}

TEST_CASE("validate renders positioned errors and exits 1") {
  const auto r = run("validate " + data("bad_bell.fis"));
  CHECK(r.status == 1);
  CHECK(r.out.find(":3:") != std::string::npos);
  CHECK(r.out.find("exponent") != std::string::npos);
}

TEST_CASE("validate exits 2 for unreadable files") {
  CHECK(run("validate /no/such/file.fis").status == 2);
}

TEST_CASE("eval prints the crisp output") {
  const auto r = run("eval " + data("ts_affine.fis") + " --in x=3");
  CHECK(r.status == 0);
  CHECK(r.out == "7\n");
}

TEST_CASE("eval honors the defuzz override") {
  const auto wavg = run("eval " + data("wavg_pair.fis") + " --in temp=2.5 --defuzz wavg");
  CHECK(wavg.status == 0);
  CHECK(wavg.out == "7.5\n");
  const auto lom = run("eval " + data("wavg_pair.fis") + " --in temp=2.5 --defuzz mom");
  CHECK(lom.out == "10\n");  // the 0.75-clipped singleton at 10 is the lone maximum
}

TEST_CASE("eval failure modes") {
  CHECK(run("eval " + data("partial.fis") + " --in x=6").status == 1);   // zero activation
  CHECK(run("eval " + data("partial.fis") + " --in x=20").status == 1);  // out of universe
  CHECK(run("eval " + data("ts_affine.fis") + " --in x=20 --clamp").out == "21\n");
  CHECK(run("eval " + data("ts_affine.fis") + " --in x=nope").status == 2);
  CHECK(run("eval " + data("ts_affine.fis") + " --in x=1 --defuzz bogus").status == 2);
  CHECK(run("eval " + data("ts_affine.fis") + " --in x=1 --in x=2").status == 2);
  // the override is a mamdani concept
  CHECK(run("eval " + data("ts_affine.fis") + " --in x=1 --defuzz centroid").status == 1);
}

TEST_CASE("surface sweeps one variable as CSV") {
  const auto r = run("surface " + data("ts_identity.fis") + " --var x=0:1:10", false);
  CHECK(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "x,out");
  CHECK(lines[1] == "0,0");
  CHECK(lines[11] == "10,10");
}

TEST_CASE("surface sweeps two variables in row-major order") {
  const auto r = run("surface " + data("ts_2d.fis") + " --var x=0:1:2 --var y=0:1:2", false);
  CHECK(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "x,y,out");
  CHECK(lines[1] == "0,0,0");
  CHECK(lines[2] == "0,1,10");
  CHECK(lines[3] == "0,2,20");
  CHECK(lines[4] == "1,0,1");
  CHECK(lines[9] == "2,2,22");
}

TEST_CASE("surface marks failing points as nan and counts them") {
  const auto r = run("surface " + data("partial.fis") + " --var x=0:1:10", false);
  CHECK(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 13);
  CHECK(lines[4].substr(0, 2) == "3,");  // x=3 still fires, at 0.5
  CHECK(std::stod(lines[4].substr(2)) == Catch::Approx(5.0).margin(1e-9));
  CHECK(lines[5] == "4,nan");
  CHECK(lines.back() == "# failed points: 7");
}

TEST_CASE("surface of a constant sugeno system matches its singleton counterpart") {
  const auto a = run("surface " + data("ts_const.fis") + " --var x=0:0.5:10", false);
  const auto b = run("surface " + data("mam_const.fis") + " --var x=0:0.5:10", false);
  CHECK(a.status == 0);
  CHECK(b.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("identical surface invocations produce identical bytes") {
  const auto first = run("surface " + data("ts_2d.fis") + " --var x=0:0.5:10 --var y=0:0.5:10",
                         false);
  const auto second = run("surface " + data("ts_2d.fis") + " --var x=0:0.5:10 --var y=0:0.5:10",
                          false);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("surface usage errors exit 2") {
  CHECK(run("surface " + data("ts_2d.fis")).status == 2);
  CHECK(run("surface " + data("ts_2d.fis") +
            " --var x=0:1:2 --var y=0:1:2 --var x=0:1:2").status == 2);
  CHECK(run("surface " + data("ts_identity.fis") + " --var x=oops").status == 2);
}

TEST_CASE("mfplot samples model terms and inline specs") {
  const auto term = run("mfplot " + data("minimal.fis") + " --term x.low --range 0:5:10", false);
  CHECK(term.status == 0);
  CHECK(term.out == "0\t1\n5\t0\n10\t0\n");

  const auto inline_spec = run("mfplot --mf \"trapeze(2, 0, 0)\" --range -10:5:10", false);
  CHECK(inline_spec.status == 0);
  CHECK(inline_spec.out == "-10\t0\n-5\t0\n0\t1\n5\t0\n10\t0\n");

  CHECK(run("mfplot --mf \"bell1(0, 1, 1)\" --range 0:1:1").status == 1);
  CHECK(run("mfplot " + data("minimal.fis") + " --term x.nope --range 0:1:1").status == 1);
  CHECK(run("mfplot " + data("minimal.fis") + " --mf \"sigmoid()\" --range 0:1:1").status == 2);
  CHECK(run("mfplot --mf \"sigmoid()\"").status == 2);  // --range is required
}

TEST_CASE("demo output is deterministic and structured") {
  const auto first = run("demo", false);
  const auto second = run("demo", false);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);
  for (const char* tag : {"## fig2", "## fig3", "## fig4", "## fig5", "## fig6", "## fig7",
                          "## pipeline"})
    CHECK(first.out.find(tag) != std::string::npos);
  CHECK(first.out.find("\n4\t1\n") != std::string::npos);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("--help").status == 0);
}
