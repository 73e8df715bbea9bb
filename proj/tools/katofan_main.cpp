// katofan <verb> --input <file> [--dot <file>] [--budget <n>]
// Prints one JSON report on stdout. Exit 0 ok, 1 input error, 2 mathematical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "katofan/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Kato fans, subdivisions, trace radicals and log curve invariants"};
  katofan::RunOptions opts;
  std::string input, dot_path, entity, sigma, tau, mode = "log-regular";
  std::vector<katofan::Int> star;
  app.add_option("verb", opts.verb, "What to compute")->required()->check(CLI::IsMember(katofan::kVerbs));
  app.add_option("--input,-i", input, "Workspace document, or - for stdin")->required();
  app.add_option("--dot", dot_path, "Write a DOT rendering of the resulting space");
  app.add_option("--budget", opts.budget, "Step budget for resolve and fiber")->check(CLI::PositiveNumber);
  app.add_option("--entity,-e", entity, "Name of the entity to act on");
  app.add_option("--sigma", sigma, "Cone name for extract");
  app.add_option("--tau", tau, "Cone name for extract");
  app.add_option("--star", star, "Star subdivision vector, e.g. 1,1")->delimiter(',');
  app.add_option("--punctures", opts.punctures, "Puncture count for curve");
  app.add_option("--mode", mode, "assoc-fan mode")->check(CLI::IsMember({"log-regular", "standard-log-point"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (!entity.empty()) opts.entity = entity;
  if (!sigma.empty()) opts.sigma = sigma;
  if (!tau.empty()) opts.tau = tau;
  if (!star.empty()) opts.star = star;
  opts.mode = mode == "log-regular" ? katofan::AssocMode::log_regular : katofan::AssocMode::over_standard_log_point;

  std::stringstream buf;
  if (input == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      std::cerr << "cannot read " << input << "\n";
      return 1;
    }
    buf << in.rdbuf();
  }
  const katofan::RunResult r = katofan::run_document(buf.str(), opts);
  std::cout << r.report.dump(2) << "\n";
  if (!dot_path.empty() && !r.dot.empty()) {
    std::ofstream out(dot_path);
    if (!out) {
      std::cerr << "cannot write " << dot_path << "\n";
      return 1;
    }
    out << r.dot;
  }
  return r.exit_code;
}
