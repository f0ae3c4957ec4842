#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "folia/errors.hpp"
#include "folia/gallery.hpp"
#include "folia/scenario.hpp"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitInternal = 3;
constexpr const char* kGalleryPrefix = "gallery:";

folia::Scenario load_scenario(const std::string& source) {
  if (source.rfind(kGalleryPrefix, 0) == 0) {
    try {
      return folia::gallery(source.substr(std::string(kGalleryPrefix).size()));
    } catch (const folia::UnknownGallery& e) {
      throw folia::SchemaError(e.what());
    }
  }
  std::ifstream in(source);
  if (!in) throw folia::SchemaError("cannot open scenario file '" + source + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw folia::SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return folia::scenario_from_json(j);
}

int verify(const std::string& source, const folia::RunOptions& options, std::string format) {
  const folia::Scenario scenario = load_scenario(source);
  if (format.empty()) format = scenario.format;
  const folia::Report report = folia::run_scenario(scenario, options);
  if (format == "markdown")
    std::cout << folia::render_markdown(report);
  else
    std::cout << folia::to_json(report).dump(2) << "\n";
  return report.exit_status();
}

int gallery(const std::string& name, const std::string& emit) {
  if (name == "list") {
    for (const auto& e : folia::gallery_list()) std::cout << e.name << "\n    " << e.description << "\n";
    return 0;
  }
  const std::string text = folia::to_json(folia::gallery(name)).dump(2) + "\n";
  if (emit.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(emit);
  if (!out) throw folia::SchemaError("cannot write '" + emit + "'");
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of identities for foliated Riemannian manifolds and maps"};
  app.require_subcommand(1);

  std::string source, format;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples, order;
  std::optional<double> tolerance;
  bool fd_check = false;
  auto* verify_cmd = app.add_subcommand("verify", "run a scenario file or gallery:<name>");
  verify_cmd->add_option("scenario", source, "scenario JSON path, or gallery:<name>")->required();
  verify_cmd->add_option("--seed", seed, "sampling seed for every check");
  verify_cmd->add_option("--samples", samples, "sample points per check")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol", tolerance, "tolerance for every check")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--order", order, "jet order (raised to each check's minimum)")->check(CLI::Range(1, 4));
  verify_cmd->add_flag("--fd-check", fd_check, "cross-check jet derivatives against finite differences");
  verify_cmd->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "markdown"}));

  std::string name, emit;
  auto* gallery_cmd = app.add_subcommand("gallery", "list the built-in scenarios or print one");
  gallery_cmd->add_option("name", name, "'list' or a gallery entry such as poincare-disc(2)")->required();
  gallery_cmd->add_option("--emit", emit, "write the scenario JSON to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  try {
    if (*verify_cmd) return verify(source, {seed, samples, tolerance, order, fd_check}, format);
    return gallery(name, emit);
  } catch (const folia::SchemaError& e) {
    std::cerr << "SchemaError: " << e.what() << "\n";
    return kExitSchema;
  } catch (const folia::UnknownGallery& e) {
    std::cerr << "UnknownGallery: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
