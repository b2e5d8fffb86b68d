// Command-line front end: fit, simulate, metrics, centrality, hamming, impute.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmgm/centrality.hpp"
#include "qmgm/csv_io.hpp"
#include "qmgm/graph_document.hpp"
#include "qmgm/impute.hpp"
#include "qmgm/mgm.hpp"
#include "qmgm/replications.hpp"
#include "qmgm/selection.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct GlobalFlags {
  std::string tau_levels = "7";
  double lambda_min = 0.001;
  double lambda_max = 5.0;
  int lambda_count = 100;
  std::string criterion = "bicp";
  double cn = -1.0;  // overrides the preset's C_n when set
  std::uint64_t seed = 1;
  int threads = 1;
  double tolerance = 1e-6;
  std::string output;
};

// "7" selects a standard grid, "0.25,0.5,0.75" an explicit one.
qmgm::QuantileGrid parse_tau_levels(const std::string& text) {
  if (text.find_first_of(",.") == std::string::npos) return qmgm::QuantileGrid::standard(std::stoi(text));
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) levels.push_back(std::stod(item));
  return qmgm::QuantileGrid(std::move(levels));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const GlobalFlags& flags, const std::string& text) {
  if (flags.output.empty() || flags.output == "-") {
    std::cout << text;
  } else {
    qmgm::write_text_file(flags.output, text);
  }
}

qmgm::SelectionCriterion make_criterion(const GlobalFlags& flags, qmgm::Index p) {
  auto criterion = qmgm::SelectionCriterion::parse(flags.criterion, p);
  if (flags.cn >= 0.0) {
    if (criterion.kind == qmgm::SelectionCriterion::Kind::aic) {
      throw std::invalid_argument("--cn has no effect with --criterion aic");
    }
    criterion.cn = flags.cn;
  }
  return criterion;
}

qmgm::GraphDocument read_document(const std::string& path) {
  return qmgm::graph_document_from_json(qmgm::read_text_file(path));
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

struct FitArgs {
  std::string data;
  std::string schema;
  std::string learner = "qmgm";
  std::string missing_token;
  int impute_k = 0;
  std::string dot;
};

int run_fit(const GlobalFlags& flags, const FitArgs& args) {
  qmgm::CsvOptions csv;
  csv.missing_token = args.missing_token;
  qmgm::Dataset raw = qmgm::load_csv(args.data, args.schema, csv);
  if (raw.has_missing()) {
    if (args.impute_k <= 0) {
      throw qmgm::DataError("data has missing cells; pass --impute K (13 is customary) or impute first");
    }
    raw = qmgm::knn_impute(raw, args.impute_k);
  }
  const qmgm::Dataset data = qmgm::validate_and_standardize(raw);
  const auto lambdas = qmgm::log_lambda_grid(flags.lambda_min, flags.lambda_max, flags.lambda_count);
  const auto criterion = make_criterion(flags, data.cols());

  qmgm::FitMetadata meta;
  meta.lambda = 0.0;
  meta.criterion = flags.criterion;
  meta.cn = criterion.cn;
  meta.edge_tolerance = flags.tolerance;

  qmgm::CoefficientCube cube;
  if (args.learner == "mgm") {
    cube = qmgm::fit_mgm(data, lambdas, {}, flags.threads);
    meta.learner = "mgm";
  } else if (args.learner == "qmgm") {
    const auto grid = parse_tau_levels(flags.tau_levels);
    qmgm::QmgmOptions options;
    options.threads = flags.threads;
    options.active_tolerance = flags.tolerance;
    cube = qmgm::fit_qmgm(data, grid, lambdas, options);
    meta.learner = "qmgm" + std::to_string(grid.size());
    meta.tau_levels = grid.levels();
  } else {
    throw std::invalid_argument("--learner must be qmgm or mgm");
  }
  if (const int bad = cube.nonconverged_count(); bad > 0) {
    std::cerr << "warning: " << bad << " regressions hit the iteration limit\n";
  }

  qmgm::ScoreOptions score;
  score.active_tolerance = flags.tolerance;
  const auto selection = qmgm::select_graph(cube, data, criterion, flags.tolerance, score);
  meta.lambda = selection.lambda;
  const auto doc = qmgm::make_document(selection.graph, data.schema, meta);
  emit(flags, qmgm::to_json(doc));
  if (!args.dot.empty()) qmgm::export_graph(doc, qmgm::ExportFormat::dot, args.dot);
  std::cerr << "selected lambda " << fmt(selection.lambda) << " (index " << selection.lambda_index << "), "
            << selection.graph.edge_count() << " edges\n";
  return kOk;
}

struct SimulateArgs {
  std::string variant = "main";
  long n = 500;
  int replications = 20;
  std::string learners = "mgm,qmgm1,qmgm3,qmgm7";
  std::string criteria = "aic,bic,bicp,bic2p,bic3p";
  bool response_residuals = false;
};

int run_simulate(const GlobalFlags& flags, const SimulateArgs& args) {
  qmgm::BenchmarkConfig config;
  config.variant = qmgm::parse_dgp_kind(args.variant);
  config.n = args.n;
  config.replications = args.replications;
  config.base_seed = flags.seed;
  for (const auto& name : split_list(args.learners)) config.learners.push_back(qmgm::Learner::parse(name));
  config.criteria = split_list(args.criteria);
  for (const auto& c : config.criteria) qmgm::SelectionCriterion::parse(c, 3);  // validates names
  config.lambda_min = flags.lambda_min;
  config.lambda_max = flags.lambda_max;
  config.lambda_count = flags.lambda_count;
  config.edge_tolerance = flags.tolerance;
  config.threads = flags.threads;
  config.qmgm.active_tolerance = flags.tolerance;
  if (args.response_residuals) config.residual_scale = qmgm::ResidualScale::response;

  const auto summary = qmgm::run_replications(config);
  for (const auto& rep : summary.replications) {
    if (!rep.ok) std::cerr << "replication " << rep.index << " failed: " << rep.error << '\n';
  }
  emit(flags, qmgm::summary_csv(summary));
  if (!flags.output.empty() && flags.output != "-") {
    qmgm::write_text_file(flags.output + ".replications.csv", qmgm::replications_csv(summary));
    qmgm::write_text_file(flags.output + ".timing.csv", qmgm::timing_csv(summary));
    qmgm::write_text_file(flags.output + ".manifest.txt", qmgm::manifest_text(config));
  }
  if (summary.failed == config.replications) {
    throw qmgm::NumericalError("every replication failed");
  }
  return kOk;
}

int run_metrics(const GlobalFlags& flags, const std::string& truth_path, const std::string& estimate_path) {
  const auto truth = read_document(truth_path).graph();
  const auto estimate = read_document(estimate_path).graph();
  if (truth.size() != estimate.size()) throw qmgm::DataError("truth and estimate have different node counts");
  const auto counts = qmgm::pair_counts(truth.adjacency(), estimate.adjacency());
  const auto m = qmgm::metrics_from_counts(counts);
  std::ostringstream os;
  os << "tp,fp,tn,fn,precision,tpr,fpr,f1,mcc,accuracy\n"
     << counts.tp << ',' << counts.fp << ',' << counts.tn << ',' << counts.fn << ',' << fmt(m.precision) << ','
     << fmt(m.tpr) << ',' << fmt(m.fpr) << ',' << fmt(m.f1) << ',' << fmt(m.mcc) << ',' << fmt(m.accuracy) << '\n';
  emit(flags, os.str());
  return kOk;
}

int run_centrality(const GlobalFlags& flags, const std::string& graph_path, bool weighted) {
  const auto doc = read_document(graph_path);
  const auto report = qmgm::centrality(doc.graph(), weighted);
  std::ostringstream os;
  os << "node,degree,betweenness,closeness\n";
  for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
    os << doc.nodes[i].name << ',' << report.degree[i] << ',' << fmt(report.betweenness[i]) << ','
       << fmt(report.closeness[i]) << '\n';
  }
  emit(flags, os.str());
  return kOk;
}

int run_hamming(const GlobalFlags& flags, const std::string& a, const std::string& b) {
  const auto ga = read_document(a).graph();
  const auto gb = read_document(b).graph();
  if (ga.size() != gb.size()) throw qmgm::DataError("graphs have different node counts");
  emit(flags, fmt(qmgm::hamming_distance(ga, gb)) + "\n");
  return kOk;
}

int run_impute(const GlobalFlags& flags, const std::string& data_path, const std::string& schema_path, int k,
               const std::string& missing_token) {
  qmgm::CsvOptions csv;
  csv.missing_token = missing_token;
  const auto data = qmgm::knn_impute(qmgm::load_csv(data_path, schema_path, csv), k);
  emit(flags, qmgm::format_csv(data, csv));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantile-based mixed graphical models"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--tau-levels", flags.tau_levels, "Level count (1, 3, 7, 17) or comma-separated levels")
      ->capture_default_str();
  app.add_option("--lambda-min", flags.lambda_min)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--lambda-max", flags.lambda_max)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--lambda-count", flags.lambda_count)->capture_default_str()->check(CLI::Range(1, 100000));
  app.add_option("--criterion", flags.criterion)
      ->capture_default_str()
      ->check(CLI::IsMember({"aic", "bic", "bicp", "bic2p", "bic3p"}));
  app.add_option("--cn", flags.cn, "Override C_n of the BIC-type criterion")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", flags.seed)->capture_default_str();
  app.add_option("--threads", flags.threads)->capture_default_str()->check(CLI::Range(1, 1024));
  app.add_option("--tolerance", flags.tolerance, "Nonzero threshold for coefficients")->capture_default_str();
  app.add_option("-o,--output", flags.output, "Output file (stdout when omitted)");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit a graph to a CSV file and print its graph document");
  fit->add_option("--data", fit_args.data)->required()->check(CLI::ExistingFile);
  fit->add_option("--schema", fit_args.schema)->required()->check(CLI::ExistingFile);
  fit->add_option("--learner", fit_args.learner)->capture_default_str()->check(CLI::IsMember({"qmgm", "mgm"}));
  fit->add_option("--missing-token", fit_args.missing_token);
  fit->add_option("--impute", fit_args.impute_k, "Impute missing cells from K nearest complete rows");
  fit->add_option("--dot", fit_args.dot, "Also write a Graphviz file");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the synthetic benchmark and print summary tables");
  simulate->add_option("--variant", sim_args.variant)->capture_default_str()->check(
      CLI::IsMember({"main", "binary", "null"}));
  simulate->add_option("--n", sim_args.n)->capture_default_str()->check(CLI::Range(10L, 10000000L));
  simulate->add_option("--R", sim_args.replications)->capture_default_str()->check(CLI::Range(1, 100000));
  simulate->add_option("--learners", sim_args.learners)->capture_default_str();
  simulate->add_option("--criteria", sim_args.criteria)->capture_default_str();
  simulate->add_flag("--response-residuals", sim_args.response_residuals,
                     "Score residuals on the response scale instead of the linear predictor");

  std::string truth_path, estimate_path;
  auto* metrics = app.add_subcommand("metrics", "Recovery metrics of an estimated graph against a true graph");
  metrics->add_option("--truth", truth_path)->required()->check(CLI::ExistingFile);
  metrics->add_option("--estimate", estimate_path)->required()->check(CLI::ExistingFile);

  std::string graph_path;
  bool weighted = false;
  auto* central = app.add_subcommand("centrality", "Degree, betweenness and closeness per node");
  central->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
  central->add_flag("--weighted", weighted, "Use 1/strength as edge length");

  std::string graph_a, graph_b;
  auto* hamming = app.add_subcommand("hamming", "Normalized Hamming distance between two graphs");
  hamming->add_option("graph_a", graph_a)->required()->check(CLI::ExistingFile);
  hamming->add_option("graph_b", graph_b)->required()->check(CLI::ExistingFile);

  std::string impute_data, impute_schema, impute_token;
  int impute_k = qmgm::kDefaultImputeNeighbours;
  auto* impute = app.add_subcommand("impute", "k-nearest-neighbour imputation of missing cells");
  impute->add_option("--data", impute_data)->required()->check(CLI::ExistingFile);
  impute->add_option("--schema", impute_schema)->required()->check(CLI::ExistingFile);
  impute->add_option("--k", impute_k)->capture_default_str()->check(CLI::Range(1, 100000));
  impute->add_option("--missing-token", impute_token);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*fit) return run_fit(flags, fit_args);
    if (*simulate) return run_simulate(flags, sim_args);
    if (*metrics) return run_metrics(flags, truth_path, estimate_path);
    if (*central) return run_centrality(flags, graph_path, weighted);
    if (*hamming) return run_hamming(flags, graph_a, graph_b);
    if (*impute) return run_impute(flags, impute_data, impute_schema, impute_k, impute_token);
  } catch (const qmgm::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const qmgm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
