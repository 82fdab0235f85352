#include "discgan/cli/commands.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "discgan/cli/svg.hpp"
#include "discgan/data/csv.hpp"
#include "discgan/data/standin.hpp"
#include "discgan/errors.hpp"
#include "discgan/eval/chi2.hpp"
#include "discgan/eval/ks.hpp"
#include "discgan/gan/checkpoint.hpp"

namespace discgan::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ArgumentError("cannot create output directory " + dir.string());
}

data::StandinSpec standin_spec(const std::optional<fs::path>& path) {
  return path ? data::load_standin_spec(*path) : data::default_standin_spec();
}

std::string file_stem(const std::string& column) {
  std::string out;
  for (char c : column) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_';
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> interim_ks(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& s) {
  if (s.count(data::ColumnKind::continuous) == 0) return std::nullopt;
  return eval::ks_test_value(real, gen, s);
}

std::optional<double> interim_cs(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& s) {
  if (s.count(data::ColumnKind::discrete) == 0) return std::nullopt;
  return eval::cs_test(real, gen, s);
}

}  // namespace

void cmd_standin(const StandinArgs& args) {
  if (args.n == 0) throw ArgumentError("--n must be positive");
  const auto spec = standin_spec(args.spec);
  Rng rng(args.seed);
  const auto table = data::make_standin_dataset(spec, args.n, rng);
  if (args.out.has_parent_path()) make_dir(args.out.parent_path());
  data::write_csv(table, args.out);
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: must be a JSON object");
  const fs::path base = path.parent_path();
  RunConfig run;
  try {
    if (!j.contains("schema")) throw ConfigError("schema: required");
    run.schema = resolve(base, j.at("schema").get<std::string>());
    if (j.contains("data") && j.contains("standin")) throw ConfigError("data: give either data or standin, not both");
    if (j.contains("data")) {
      run.data = resolve(base, j.at("data").get<std::string>());
    } else if (j.contains("standin")) {
      const auto& s = j.at("standin");
      StandinSource src;
      if (s.contains("spec")) src.spec = resolve(base, s.at("spec").get<std::string>());
      src.n = s.value("n", src.n);
      src.seed = s.value("seed", src.seed);
      if (src.n == 0) throw ConfigError("standin.n: must be positive");
      run.standin = src;
    } else {
      throw ConfigError("data: required (or a standin block)");
    }
    run.out = resolve(base, j.value("out", std::string("run")));
    run.targets = j.value("targets", std::vector<std::string>{});
    run.interim_eval_rows = j.value("interim_eval_rows", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  run.gan = gan::GanConfig::from_json(j);
  return run;
}

gan::TrainTrace cmd_train(const RunConfig& run, std::ostream& log) {
  const auto schema = data::load_schema(run.schema);
  data::RawTable table;
  if (run.data) {
    table = data::load_csv(*run.data, schema);
  } else {
    Rng rng(run.standin->seed);
    table = data::make_standin_dataset(standin_spec(run.standin->spec), run.standin->n, rng);
  }
  for (const auto& t : run.targets) {
    const auto& c = schema.at(t);
    if (c.kind != data::ColumnKind::discrete) throw ConfigError("targets: '" + t + "' is not a discrete column");
  }
  const auto transforms = data::fit_transforms(table, schema);
  const auto encoded = data::encode(table, transforms);
  auto model = gan::make_model(run.gan, schema, transforms, encoded);

  make_dir(run.out);
  data::write_csv(table, run.out / "real.csv");
  write_text(run.out / "config.json", run.gan.to_json().dump(2) + "\n");

  gan::TrainOptions opt;
  opt.checkpoint = run.out / "model.json";
  opt.checkpoint_every_log = true;
  opt.on_log = [&](const gan::TraceEntry& e) {
    log << "step " << e.step << " d_loss " << data::format_double(e.d_loss) << " g_loss "
        << data::format_double(e.g_loss);
    if (e.ks) log << " ks " << data::format_double(*e.ks);
    if (e.cs) log << " cs " << data::format_double(*e.cs);
    log << '\n';
  };
  if (run.interim_eval_rows > 0) {
    opt.evaluate = [&](const gan::GanModel& m) {
      Rng rng(mix_seed(m.config.seed, 4, static_cast<std::uint64_t>(m.step)));
      const auto gen = data::decode(gan::generate(m, run.interim_eval_rows, std::nullopt, rng), m.transforms);
      return gan::InterimMetrics{interim_ks(table, gen, schema), interim_cs(table, gen, schema)};
    };
  }
  const bool distributed = run.gan.distribution.scope != dist::Scope::none;
  auto trace = distributed ? gan::run_distributed_training(model, encoded, opt) : gan::train(model, encoded, opt);
  trace.write_csv(run.out / "trace.csv");
  trace.write_timing_csv(run.out / "timing.csv");
  if (trace.mirrored_lanes > 0) log << "mirrored invariant verified on " << trace.mirrored_lanes << " lanes\n";
  log << "wrote " << (run.out / "model.json").string() << '\n';
  return trace;
}

void cmd_generate(const GenerateArgs& args) {
  if (args.n == 0) throw ArgumentError("--n must be positive");
  const auto model = gan::load_checkpoint(args.checkpoint);
  Rng rng(args.seed ? *args.seed : mix_seed(model.config.seed, 5));
  const auto table = data::decode(gan::generate(model, args.n, args.condition, rng), model.transforms);
  if (args.out.has_parent_path()) make_dir(args.out.parent_path());
  data::write_csv(table, args.out);
}

eval::MetricsReport cmd_evaluate(const EvaluateArgs& args) {
  const auto schema = data::load_schema(args.schema);
  const auto real = data::load_csv(args.real, schema);
  const auto gen = data::load_csv(args.gen, schema);
  auto targets = args.targets;
  if (targets.empty()) {
    for (const auto& c : schema.columns()) {
      if (c.role == data::ColumnRole::target) targets.push_back(c.name);
    }
  }

  eval::ReportOptions opt;
  opt.split.seed = args.seed;
  opt.efficacy.mlp.seed = args.seed;
  opt.extra_echo["version"] = kVersion;
  opt.extra_echo["seed"] = args.seed;
  opt.extra_echo["real_rows"] = real.rows();
  opt.extra_echo["generated_rows"] = gen.rows();
  const auto report = eval::full_report(real, gen, schema, targets, opt);

  make_dir(args.out);
  write_text(args.out / "report.json", report.to_json().dump(2) + "\n");
  for (const auto& c : schema.columns()) {
    const auto& r = real.column(c.name);
    const auto& g = gen.column(c.name);
    if (c.kind == data::ColumnKind::continuous) {
      write_text(args.out / ("hist_" + file_stem(c.name) + ".svg"), histogram_svg(c.name, r.values, g.values));
    } else {
      write_text(args.out / ("bar_" + file_stem(c.name) + ".svg"), bar_chart_svg(c.name, r.labels, g.labels));
    }
  }
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tabular GAN toolkit: stand-in data, training, synthesis and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  StandinArgs standin;
  std::string standin_spec_path;
  auto* s = app.add_subcommand("standin", "Write a synthetic stand-in dataset as CSV");
  s->add_option("--spec", standin_spec_path, "Stand-in spec JSON (built-in default when omitted)");
  s->add_option("--n", standin.n, "Number of rows")->capture_default_str();
  s->add_option("--out", standin.out, "Output CSV")->required();
  s->add_option("--seed", standin.seed, "Random seed")->capture_default_str();

  std::string config_path;
  std::string train_out;
  auto* t = app.add_subcommand("train", "Train a GAN from a run config");
  t->add_option("--config", config_path, "Run config JSON")->required();
  t->add_option("--out", train_out, "Output directory (overrides the config)");

  GenerateArgs generate;
  std::string condition;
  std::uint64_t generate_seed = 0;
  auto* g = app.add_subcommand("generate", "Sample rows from a trained checkpoint");
  g->add_option("--checkpoint", generate.checkpoint, "Checkpoint JSON")->required();
  g->add_option("--n", generate.n, "Number of rows")->required();
  auto* cond_opt = g->add_option("--condition", condition, "Condition category (conditional models)");
  g->add_option("--out", generate.out, "Output CSV")->required();
  auto* seed_opt = g->add_option("--seed", generate_seed, "Random seed");

  EvaluateArgs evaluate;
  std::string targets;
  auto* e = app.add_subcommand("evaluate", "Compare generated and real tables");
  e->add_option("--real", evaluate.real, "Real CSV")->required();
  e->add_option("--gen", evaluate.gen, "Generated CSV")->required();
  e->add_option("--schema", evaluate.schema, "Schema JSON")->required();
  e->add_option("--targets", targets, "Comma-separated target columns");
  e->add_option("--out", evaluate.out, "Output directory")->required();
  e->add_option("--seed", evaluate.seed, "Split and classifier seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    // Help and version exit 0; every other parse problem is a usage error.
    return app.exit(ex, out, err) == 0 ? 0 : 2;
  }

  try {
    if (s->parsed()) {
      if (!standin_spec_path.empty()) standin.spec = standin_spec_path;
      cmd_standin(standin);
      out << "wrote " << standin.n << " rows to " << standin.out.string() << '\n';
    } else if (t->parsed()) {
      auto run = RunConfig::load(config_path);
      if (!train_out.empty()) run.out = train_out;
      cmd_train(run, out);
    } else if (g->parsed()) {
      if (*cond_opt) generate.condition = condition;
      if (*seed_opt) generate.seed = generate_seed;
      cmd_generate(generate);
      out << "wrote " << generate.n << " rows to " << generate.out.string() << '\n';
    } else if (e->parsed()) {
      evaluate.targets = split_list(targets);
      const auto report = cmd_evaluate(evaluate);
      if (report.ks_test) out << "ks_test " << data::format_double(*report.ks_test) << '\n';
      if (report.cs_test) out << "cs_test " << data::format_double(*report.cs_test) << '\n';
      out << "wrote " << (evaluate.out / "report.json").string() << '\n';
    }
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace discgan::cli
