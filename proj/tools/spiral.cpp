#include <spiral/cli.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

int emit(const spiral::cli::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spirality, separability and distortion class of clean surfaces in non-geometric 3-manifolds"};
  app.require_subcommand(1);

  std::string file, format = "text", component, cycle, mu, config;
  long long steps = 0;

  auto* validate = app.add_subcommand("validate", "Check a document against every model invariant");
  validate->add_option("file", file, "Input document")->required();

  auto* report = app.add_subcommand("report", "Spirality, separability and distortion class per component");
  report->add_option("file", file, "Input document")->required();
  report->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* spir = app.add_subcommand("spirality", "Cycle basis values, governor, potential and Lambda");
  spir->add_option("file", file, "Input document")->required();
  spir->add_option("--component", component, "Restrict to the component containing this piece");

  auto* witness = app.add_subcommand("witness", "Build and verify the witness sequence along a cycle");
  witness->add_option("file", file, "Input document")->required();
  witness->add_option("--cycle", cycle, "Closed walk, e.g. c1:fwd,c2:rev")->required();
  witness->add_option("--mu", mu, "Positive rational lower bound for t_0")->required();
  witness->add_option("--steps", steps, "Number of terms after t_0")->required();

  auto* trace = app.add_subcommand("trace", "Iterate the crossing recurrences and compare with the envelopes");
  trace->add_option("file", file, "Input document")->required();
  trace->add_option("--config", config, "Tracer configuration (JSON)")->required();

  auto* dot = app.add_subcommand("export-dot", "Surface dual graph in DOT");
  dot->add_option("file", file, "Input document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : spiral::cli::kPreconditionFailure;
  }

  auto text = slurp(file);
  if (!text) {
    std::cerr << "cannot read '" << file << "'\n";
    return spiral::cli::kParseFailure;
  }

  namespace cli = spiral::cli;
  if (*validate) return emit(cli::run_validate(*text));
  if (*report) return emit(cli::run_report(*text, format == "json" ? cli::Format::Json : cli::Format::Text));
  if (*spir)
    return emit(cli::run_spirality(*text, spir->count("--component") ? std::optional<std::string>(component) : std::nullopt));
  if (*witness) return emit(cli::run_witness(*text, cycle, mu, steps));
  if (*trace) {
    auto cfg = slurp(config);
    if (!cfg) {
      std::cerr << "cannot read '" << config << "'\n";
      return spiral::cli::kParseFailure;
    }
    return emit(cli::run_trace(*text, *cfg));
  }
  return emit(cli::run_export_dot(*text));
}
