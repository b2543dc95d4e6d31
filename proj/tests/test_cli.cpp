#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>

#include "liftvf/cli.hpp"

using namespace liftvf;

namespace {

const std::filesystem::path kData = std::filesystem::path(LIFTVF_SOURCE_DIR) / "tests" / "data";

GermDocument data_doc(const std::string& file) { return parse_document(read_text_file(kData / file)); }

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome invoke(const std::string& args) {
  std::string cmd = std::string(LIFTVF_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) o.out.append(buf, n);
  int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string catalog_file(const std::string& name) { return (catalog_dir() / (name + ".germ")).string(); }

bool has_check(const Json& report, const std::string& name, bool passed) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return c["passed"].get<bool>() == passed;
  return false;
}

}  // namespace

TEST(Document, RenderParseRoundTripOverCatalog) {
  for (const auto& name : catalog_names()) {
    GermDocument d = load_catalog_entry(name);
    std::string text = render_document(d);
    GermDocument again = parse_document(text);
    EXPECT_EQ(again, d) << name;
    EXPECT_EQ(render_document(again), text) << name;
  }
}

TEST(Document, DefaultTargetNames) {
  EXPECT_EQ(default_target_names(3), (std::vector<std::string>{"X", "Y", "U"}));
  EXPECT_EQ(default_target_names(6).back(), "X6");
}

TEST(Document, ConstantTermRejected) {
  try {
    data_doc("constant-term.germ");
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("component 1 has a nonzero constant term"), std::string::npos) << e.what();
  }
}

TEST(Document, SyntaxErrorCarriesPosition) {
  try {
    data_doc("syntax.germ");
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("4:1:", 0), 0u) << e.what();
  }
}

TEST(Document, NestedErrorPositionIsNotDoubled) {
  try {
    parse_document("germ g {\n  n = 1; p = 2;\n  branch a(x) = (x^2, x^^3);\n}");
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_EQ(msg.rfind("3:", 0), 0u) << msg;
    EXPECT_EQ(msg.find(": 1:"), std::string::npos) << msg;
  }
}

TEST(Document, DimensionMismatchRejected) {
  EXPECT_THROW(parse_document("germ g { n = 2; p = 2; branch a(x) = (x, x^2); }"), InputError);
  EXPECT_THROW(parse_document("germ g { n = 1; p = 2; branch a(x) = (x); }"), InputError);
}

TEST(Document, UnfoldingParameterMustExist) {
  GermDocument d = load_catalog_entry("fold-line");
  d.unfolding->target_parameter = "Q";
  EXPECT_THROW(d.unfolding_spec(), InputError);
}

TEST(Document, FieldListUsesTargetNames) {
  auto fs = parse_field_list(read_text_file(kData / "umbrella-fields.txt"), {"V", "W", "X"});
  ASSERT_EQ(fs.size(), 3u);
  EXPECT_EQ(fs[0].render({"V", "W", "X"}), "(V, 0, X)");
}

TEST(Run, ConstructReportsChecks) {
  RunResult r = run("construct", load_catalog_entry("whitney-psi2"));
  EXPECT_EQ(r.code, ExitCode::Ok);
  EXPECT_EQ(r.report["exit_code"], 0);
  EXPECT_TRUE(r.report["error"].is_null());
  EXPECT_EQ(r.report["lift"]["count"], 4);
  EXPECT_TRUE(has_check(r.report, "reference-module-equality", true));
  EXPECT_TRUE(has_check(r.report, "certificates-reverify", true));
}

TEST(Run, HypothesisViolationIsExitOne) {
  RunResult r = run("construct", load_catalog_entry("embedding-e"));
  EXPECT_EQ(r.code, ExitCode::HypothesisViolated);
  EXPECT_EQ(r.report["error"]["kind"], "hypothesis");
}

TEST(Run, InjectedFaultIsExitFour) {
  RunOptions opt;
  opt.inject_fault = true;
  RunResult r = run("analyze", load_catalog_entry("ex36"), opt);
  EXPECT_EQ(r.code, ExitCode::ConsistencyFailure);
  EXPECT_EQ(r.report["error"]["kind"], "consistency");
}

TEST(Run, CapIsExitTwo) {
  RunOptions opt;
  opt.max_degree = 0;
  RunResult r = run("unfold", load_catalog_entry("cusp-pair"), opt);
  EXPECT_EQ(r.code, ExitCode::CapReached);
}

TEST(Run, CheckAcceptsLiftableAndRejectsOthers) {
  GermDocument d = load_catalog_entry("whitney-psi2");
  RunOptions good;
  good.fields_text = read_text_file(kData / "umbrella-fields.txt");
  EXPECT_EQ(run("check", d, good).code, ExitCode::Ok);
  RunOptions bad;
  bad.fields_text = read_text_file(kData / "umbrella-wrong.txt");
  RunResult r = run("check", d, bad);
  EXPECT_EQ(r.code, ExitCode::HypothesisViolated);
  EXPECT_FALSE(r.report["fields"][0]["certificate"]["liftable"].get<bool>());
}

TEST(Run, DocumentOptionsAreFallbacks) {
  GermDocument d = load_catalog_entry("ex36");
  d.options["cert"] = "20";
  EXPECT_EQ(run("construct", d).report["config"]["cert_order"], 20);
  RunOptions opt;
  opt.cert = 24;
  EXPECT_EQ(run("construct", d, opt).report["config"]["cert_order"], 24);
}

TEST(Run, ReduceCertifiesOnOriginal) {
  RunResult r = run("reduce", load_catalog_entry("suspended-69"));
  EXPECT_EQ(r.code, ExitCode::Ok);
  EXPECT_EQ(r.report["core"]["n"], 2);
  EXPECT_TRUE(has_check(r.report, "lift-equal-on-original", true));
  EXPECT_TRUE(has_check(r.report, "reference-module-equality", true));
}

TEST(Run, TransportMatchesExpectedFields) {
  RunResult r = run("transport", load_catalog_entry("umbrella-transport"));
  EXPECT_EQ(r.code, ExitCode::Ok);
  EXPECT_TRUE(has_check(r.report, "transported-module-equality", true));
}

TEST(Run, KernelLevelIsReported) {
  RunOptions opt;
  opt.level = 2;
  RunResult r = run("kernel", load_catalog_entry("cusp-pair"), opt);
  EXPECT_EQ(r.code, ExitCode::Ok);
  EXPECT_TRUE(r.report.contains("kernel"));
}

TEST(Run, KernelMatrixExportIsOptional) {
  RunOptions opt;
  opt.level = 0;
  EXPECT_FALSE(run("kernel", load_catalog_entry("fold"), opt).report["kernel"].contains("matrix"));
  opt.export_matrix = true;
  const auto k = run("kernel", load_catalog_entry("fold"), opt).report["kernel"];
  ASSERT_TRUE(k.contains("matrix"));
  EXPECT_EQ(k["domain_basis"].size(), k["domain_dimension"].get<std::size_t>());
  for (const auto& row : k["matrix"]) {
    EXPECT_EQ(row.size(), k["domain_dimension"].get<std::size_t>());
    for (const auto& x : row) EXPECT_TRUE(x.is_string());
  }
}

TEST(Run, TextRenderingListsChecks) {
  std::string text = render_text(run("construct", load_catalog_entry("multistable")).report);
  EXPECT_NE(text.find("PASS reference-module-equality"), std::string::npos) << text;
}

TEST(Catalog, EntriesMatchTheirFileNames) {
  auto names = catalog_names();
  EXPECT_GE(names.size(), 20u);
  for (const auto& n : names) EXPECT_EQ(load_catalog_entry(n).name, n);
  EXPECT_THROW(load_catalog_entry("no-such-entry"), InputError);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(invoke("analyze " + catalog_file("fold")).code, 0);
  EXPECT_EQ(invoke("construct " + catalog_file("embedding-e")).code, 1);
  EXPECT_EQ(invoke("analyze " + (kData / "constant-term.germ").string()).code, 3);
  EXPECT_EQ(invoke("analyze " + (kData / "syntax.germ").string()).code, 3);
  EXPECT_EQ(invoke("analyze /nonexistent/file.germ").code, 3);
  EXPECT_EQ(invoke("--mode sideways analyze " + catalog_file("fold")).code, 3);
  EXPECT_EQ(invoke("--inject-fault analyze " + catalog_file("ex36")).code, 4);
  EXPECT_EQ(invoke("check --fields " + (kData / "umbrella-wrong.txt").string() + " " + catalog_file("whitney-psi2")).code, 1);
}

TEST(Binary, JsonReportParses) {
  Outcome o = invoke("--json construct " + catalog_file("cusp-pair"));
  ASSERT_EQ(o.code, 0) << o.out;
  Json j = Json::parse(o.out);
  EXPECT_EQ(j["tool"]["name"], "liftvf");
  EXPECT_EQ(j["lift"]["count"], 2);
}

TEST(Binary, CatalogList) {
  Outcome o = invoke("catalog --list");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("whitney-psi3  [construct]"), std::string::npos) << o.out;
}
