#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "liftvf/cli.hpp"

namespace {

using namespace liftvf;

struct Flags {
  unsigned max_i = 6;
  unsigned max_degree = 0;
  unsigned cert = 0;
  std::string mode = "both";
  std::string strategy;
  bool json = false;
  bool inject_fault = false;
};

RunOptions to_options(const Flags& f, const CLI::App& app) {
  RunOptions o;
  if (app.count("--max-i")) o.max_i = f.max_i;
  if (app.count("--max-degree")) o.max_degree = f.max_degree;
  if (app.count("--cert-order")) o.cert = f.cert;
  if (app.count("--mode")) o.mode = parse_mode(f.mode);
  if (!f.strategy.empty()) o.strategy = parse_strategy(f.strategy);
  o.inject_fault = f.inject_fault;
  return o;
}

int emit(const RunResult& r, bool json) {
  if (json)
    std::cout << r.report.dump(2) << "\n";
  else
    std::cout << render_text(r.report);
  return static_cast<int>(r.code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liftable vector fields over corank one multigerms"};
  app.name("liftvf");
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--max-i", flags.max_i, "highest level scanned")->capture_default_str();
  app.add_option("--max-degree", flags.max_degree, "degree bound for completions and unfolding search");
  app.add_option("--cert-order", flags.cert, "jet order of lift certificates");
  app.add_option("--mode", flags.mode, "formula, bruteforce or both")->capture_default_str();
  app.add_option("--strategy", flags.strategy, "completion strategy: ansatz or iterative");
  app.add_flag("--json", flags.json, "emit the JSON report");
  app.add_flag("--inject-fault", flags.inject_fault)->group("");

  std::string file;
  unsigned level = 1;
  bool export_matrix = false;
  std::string fields_file;
  std::string command;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("document", file, "germ document")->required();
    sub->fallthrough();
    if (name == "kernel") {
      sub->add_option("--level", level, "level i of the map")->capture_default_str();
      sub->add_flag("--matrix", export_matrix, "export the matrix as rational strings");
    }
    if (name == "check") sub->add_option("--fields", fields_file, "file of claimed vector fields")->required();
    sub->callback([&command, name] { command = name; });
  }

  auto* catalog = app.add_subcommand("catalog", "built-in examples");
  catalog->fallthrough();
  bool list = false, run_all = false;
  std::string entry;
  catalog->add_flag("--list", list, "list entries");
  catalog->add_option("--run", entry, "run one entry");
  catalog->add_flag("--run-all", run_all, "run every entry");
  catalog->callback([&command] { command = "catalog"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::InputError);
  }

  RunOptions opt;
  try {
    opt = to_options(flags, app);
  } catch (const Error& e) {
    std::cerr << "liftvf: " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
  opt.level = level;
  opt.export_matrix = export_matrix;

  if (command == "catalog") {
    try {
      if (list || (entry.empty() && !run_all)) {
        for (const auto& n : catalog_names()) {
          GermDocument d = load_catalog_entry(n);
          std::cout << n << "  [" << d.option_or("run", "analyze") << "]\n";
        }
        return 0;
      }
      if (!entry.empty()) return emit(run_catalog_entry(load_catalog_entry(entry), opt), flags.json);
      Json all = Json::array();
      int unexpected = 0;
      for (const auto& n : catalog_names()) {
        RunResult r = run_catalog_entry(load_catalog_entry(n), opt);
        const bool ok = r.report["catalog"]["as_expected"].get<bool>();
        if (!ok) ++unexpected;
        if (flags.json)
          all.push_back(r.report);
        else
          std::cout << (ok ? "ok    " : "FAIL  ") << n << "  exit " << static_cast<int>(r.code)
                    << (r.report["error"].is_null() ? "" : "  " + r.report["error"]["message"].get<std::string>()) << "\n";
      }
      if (flags.json) std::cout << all.dump(2) << "\n";
      return unexpected == 0 ? 0 : static_cast<int>(ExitCode::ConsistencyFailure);
    } catch (const Error& e) {
      std::cerr << "liftvf: " << e.what() << "\n";
      return static_cast<int>(e.code());
    }
  }

  GermDocument doc;
  try {
    doc = parse_document(read_text_file(file));
    if (command == "check") opt.fields_text = read_text_file(fields_file);
  } catch (const Error& e) {
    if (flags.json) return emit(input_failure(command, file, e, opt), true);
    std::cerr << "liftvf: " << file << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
  return emit(run(command, doc, opt), flags.json);
}
