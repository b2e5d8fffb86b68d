#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "qmgm/centrality.hpp"
#include "qmgm/csv_io.hpp"
#include "qmgm/dgp.hpp"
#include "qmgm/graph_document.hpp"
#include "qmgm/schema_file.hpp"

using namespace qmgm;

namespace {

int run(const std::string& args) {
  const std::string command = std::string(QMGM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Scratch {
  std::filesystem::path dir;
  Scratch() : dir(std::filesystem::temp_directory_path() / "qmgm_cli_test") { std::filesystem::create_directories(dir); }
  ~Scratch() { std::filesystem::remove_all(dir); }
  std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 1, help with 0") {
  CHECK(run("--help") == 0);
  CHECK(run("fit --help") == 0);
  CHECK(run("") == 1);
  CHECK(run("--bogus") == 1);
  CHECK(run("hamming --bogus a b") == 1);
  CHECK(run("--criterion hqic simulate") == 1);
  CHECK(run("--tau-levels 5 simulate --n 50 --R 1 --learners qmgm") == 1);
}

TEST_CASE("fit, metrics, centrality and hamming on a small simulated sample") {
  Scratch tmp;
  const auto sample = generate_sample({DgpKind::main, 150, 3});
  write_text_file(tmp("data.csv"), format_csv(sample.data));
  write_text_file(tmp("data.schema"), format_schema(sample.data.schema));

  const std::string common = "--tau-levels 1 --lambda-count 6 --lambda-min 0.01 --lambda-max 1 ";
  REQUIRE(run(common + "-o " + tmp("g.json") + " fit --data " + tmp("data.csv") + " --schema " +
              tmp("data.schema") + " --dot " + tmp("g.dot")) == 0);
  const auto doc = graph_document_from_json(read_text_file(tmp("g.json")));
  CHECK(doc.nodes.size() == 10);
  CHECK(doc.metadata.tau_levels == std::vector<double>{0.5});
  CHECK(doc.metadata.criterion == "bicp");
  CHECK(read_text_file(tmp("g.dot")) == to_dot(doc));

  REQUIRE(run(common + "-o " + tmp("m.json") + " fit --learner mgm --data " + tmp("data.csv") + " --schema " +
              tmp("data.schema")) == 0);
  const auto truth = make_document(EstimatedGraph::from_adjacency(sample.truth), sample.data.schema);
  write_text_file(tmp("truth.json"), to_json(truth));

  CHECK(run("-o " + tmp("metrics.csv") + " metrics --truth " + tmp("truth.json") + " --estimate " + tmp("g.json")) == 0);
  CHECK(read_text_file(tmp("metrics.csv")).find("mcc") != std::string::npos);
  CHECK(run("-o " + tmp("c.csv") + " centrality --weighted --graph " + tmp("g.json")) == 0);
  CHECK(run("-o " + tmp("h.txt") + " hamming " + tmp("g.json") + " " + tmp("m.json")) == 0);
  const double h = std::stod(read_text_file(tmp("h.txt")));
  CHECK(h == doctest::Approx(hamming_distance(doc.graph(), graph_document_from_json(read_text_file(tmp("m.json"))).graph())));
}

TEST_CASE("data problems exit with 2") {
  Scratch tmp;
  write_text_file(tmp("s.schema"), "x = continuous\ny = count\n");
  write_text_file(tmp("bad.csv"), "x,y\n1,2\n2,oops\n");
  CHECK(run("fit --data " + tmp("bad.csv") + " --schema " + tmp("s.schema")) == 2);
  write_text_file(tmp("extra.csv"), "x,y,z\n1,2,3\n");
  CHECK(run("fit --data " + tmp("extra.csv") + " --schema " + tmp("s.schema")) == 2);
  write_text_file(tmp("gap.csv"), "x,y\n1,2\n,3\n2,4\n");
  CHECK(run("fit --data " + tmp("gap.csv") + " --schema " + tmp("s.schema")) == 2);
  CHECK(run("impute --k 5 --data " + tmp("gap.csv") + " --schema " + tmp("s.schema")) == 2);
  CHECK(run("impute --k 2 -o " + tmp("filled.csv") + " --data " + tmp("gap.csv") + " --schema " + tmp("s.schema")) == 0);
  CHECK(read_text_file(tmp("filled.csv")) == "x,y\n1,2\n1.5,3\n2,4\n");
  write_text_file(tmp("junk.json"), "{]");
  CHECK(run("hamming " + tmp("junk.json") + " " + tmp("junk.json")) == 2);
}

TEST_CASE("simulate writes the summary and its sidecars") {
  Scratch tmp;
  const std::string out = tmp("sim.csv");
  REQUIRE(run("--lambda-count 3 --lambda-min 0.01 --lambda-max 1 -o " + out +
              " simulate --variant null --n 60 --R 2 --learners mgm,qmgm1 --criteria bicp") == 0);
  for (const auto* suffix : {"", ".replications.csv", ".timing.csv", ".manifest.txt"})
    CHECK(std::filesystem::exists(out + suffix));
  const auto first = read_text_file(out);
  REQUIRE(run("--lambda-count 3 --lambda-min 0.01 --lambda-max 1 -o " + out +
              " simulate --variant null --n 60 --R 2 --learners mgm,qmgm1 --criteria bicp") == 0);
  CHECK(read_text_file(out) == first);
}

}  // TEST_SUITE
