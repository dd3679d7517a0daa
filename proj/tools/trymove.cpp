// trymove: command-line front end for puzzles, sessions, the classifier,
// scoring reports and the local play service.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trymove/engine.hpp"
#include "trymove/error.hpp"
#include "trymove/nn/model.hpp"
#include "trymove/puzzle.hpp"
#include "trymove/report.hpp"
#include "trymove/service.hpp"
#include "trymove/sessionio.hpp"

namespace fs = std::filesystem;
using namespace trymove;

namespace {

fs::path data_dir() {
  if (const char* env = std::getenv("TRYMOVE_DATA_DIR"); env && *env) return env;
  return "trymove-data";
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::optional<fs::path>& out) {
  if (!out) {
    std::cout << text;
    return;
  }
  if (out->has_parent_path()) fs::create_directories(out->parent_path());
  std::ofstream f(*out, std::ios::binary);
  if (!f || !(f << text)) fail(ErrorKind::io, "cannot write " + out->string());
}

struct ConfigFlags {
  std::string level = "guidance";
  std::optional<int> size;
  std::optional<int> pieces;
  std::optional<int> fakes;
  std::uint64_t seed = 1;

  void add(CLI::App* cmd) {
    cmd->add_option("--level", level, "guidance, easy, middle or difficult")->capture_default_str();
    cmd->add_option("--size", size, "grid edge S (overrides the level)");
    cmd->add_option("--pieces", pieces, "requested piece count N (overrides the level)");
    cmd->add_option("--fakes", fakes, "fake piece count (overrides the level)");
    cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
  }

  DifficultyConfig config() const {
    DifficultyConfig c = config_for(parse_level(level));
    if (size) c.grid_size = *size;
    if (pieces) c.requested_pieces = *pieces;
    if (fakes) c.fake_count = *fakes;
    return c;
  }
};

struct ScoreFlags {
  std::optional<std::string> model;
  std::string rounding = "half-up";
  std::optional<double> t_total_override;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", model, "classify frames with this model instead of using logged classes");
    cmd->add_option("--rounding", rounding, "time bonus rounding: half-up or floor")->capture_default_str();
    cmd->add_option("--t-total-override", t_total_override, "time budget in seconds");
  }

  ScoreOptions options() const { return {parse_rounding(rounding), t_total_override}; }
};

struct Scored {
  SessionLog log;
  Session session;
  PipelineResult pipeline;
  ScoreBreakdown score;
};

Scored score_file(const fs::path& path, const ScoreFlags& flags, const std::optional<nn::Model>& model) {
  SessionLog log = ingest_log(path);
  Session session = replay(log.config, log.seed, log.events);
  std::optional<nn::Predictor> predictor;
  if (model) predictor = nn::predictor_for(*model);
  PipelineResult pipeline = pipeline_counts(log.events, predictor ? &*predictor : nullptr, frames_dir_for(path));
  ScoreBreakdown score = score_log(log, pipeline.counts, flags.options());
  return {std::move(log), std::move(session), std::move(pipeline), score};
}

int run(int argc, char** argv) {
  CLI::App app{"Try to Move puzzle engine, gesture classifier and scoring tools"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a puzzle file");
  ConfigFlags gen_flags;
  std::optional<fs::path> gen_out;
  gen_flags.add(gen);
  gen->add_option("--out", gen_out, "puzzle file (default: stdout)");
  gen->callback([&] {
    const auto c = gen_flags.config();
    emit(dump_puzzle(generate_puzzle(c.grid_size, c.requested_pieces, gen_flags.seed, c.fake_count)), gen_out);
  });

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "emit a scripted solution for a session");
  ConfigFlags solve_flags;
  std::optional<fs::path> solve_out;
  bool no_frames = false;
  solve_flags.add(solve_cmd);
  solve_cmd->add_option("--out", solve_out, "script file (default: stdout)");
  solve_cmd->add_flag("--no-frames", no_frames, "do not attach frame references");
  solve_cmd->callback([&] {
    SolveOptions opts;
    opts.with_frames = !no_frames;
    emit(format_script(solve(solve_flags.config(), solve_flags.seed, opts)), solve_out);
  });

  // play
  auto* play_cmd = app.add_subcommand("play", "run a scripted event file, write the log and frames");
  ConfigFlags play_flags;
  fs::path script_path;
  std::optional<fs::path> play_out;
  play_flags.add(play_cmd);
  play_cmd->add_option("script", script_path, "event script (one JSON event per line)")->required();
  play_cmd->add_option("--out", play_out, "session log (default: $TRYMOVE_DATA_DIR/sessions/<id>.jsonl)");
  play_cmd->callback([&] {
    const auto config = play_flags.config();
    const auto script = parse_script(read_text(script_path));
    const fs::path out = play_out ? *play_out
                                  : data_dir() / "sessions" / (new_session(config, play_flags.seed).id() + ".jsonl");
    const auto result = play(config, play_flags.seed, script, out);
    std::cout << "log " << result.log_path.string() << "\n"
              << "frames " << result.frames_written << " in " << result.frames_dir.string() << "\n"
              << "events " << result.session.event_log().size() << "\n"
              << "completed " << (result.session.completed() ? "true" : "false") << "\n";
  });

  // train
  auto* train_cmd = app.add_subcommand("train", "train the gesture classifier on synthetic glyphs");
  nn::Hyper hyper;
  int train_per_class = 200;
  std::optional<fs::path> train_out;
  train_cmd->add_option("--seed", hyper.seed, "training seed")->capture_default_str();
  train_cmd->add_option("--epochs", hyper.epochs, "epochs")->capture_default_str();
  train_cmd->add_option("--lr", hyper.learning_rate, "learning rate")->capture_default_str();
  train_cmd->add_option("--batch", hyper.batch_size, "mini-batch size")->capture_default_str();
  train_cmd->add_option("--per-class", train_per_class, "training frames per class")->capture_default_str();
  train_cmd->add_option("--out", train_out, "model file (default: $TRYMOVE_DATA_DIR/model.bin)");
  train_cmd->callback([&] {
    const auto data = nn::synth_dataset(train_per_class, hyper.seed);
    const auto result = nn::train(nn::make_default_model(hyper), data, hyper);
    for (std::size_t e = 0; e < result.epoch_losses.size(); ++e) {
      std::cout << "epoch " << e + 1 << " loss " << result.epoch_losses[e] << "\n";
    }
    const fs::path out = train_out.value_or(data_dir() / "model.bin");
    nn::save_model(result.model, out);
    std::cout << "model " << out.string() << "\n";
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on held-out synthetic glyphs");
  fs::path eval_model;
  int eval_per_class = 50;
  std::uint64_t eval_seed = 1000;
  std::optional<fs::path> eval_out;
  eval_cmd->add_option("--model", eval_model, "model file")->required();
  eval_cmd->add_option("--per-class", eval_per_class, "held-out frames per class")->capture_default_str();
  eval_cmd->add_option("--seed", eval_seed, "held-out set seed")->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "confusion matrix CSV (default: stdout)");
  eval_cmd->callback([&] {
    const auto model = nn::load_model(eval_model);
    const auto cm = nn::evaluate(model, nn::synth_dataset(eval_per_class, eval_seed));
    emit(cm.to_csv(), eval_out);
    std::cerr << "accuracy " << cm.accuracy() << " (" << cm.trace() << "/" << cm.total() << ")\n";
  });

  // score
  auto* score_cmd = app.add_subcommand("score", "score a session log");
  fs::path score_path;
  ScoreFlags score_flags;
  score_cmd->add_option("log", score_path, "session log")->required();
  score_flags.add(score_cmd);
  score_cmd->callback([&] {
    std::optional<nn::Model> model;
    if (score_flags.model) model = nn::load_model(*score_flags.model);
    const auto s = score_file(score_path, score_flags, model);
    nlohmann::ordered_json doc = to_json(s.score);
    doc["counts"] = s.pipeline.counts;
    doc["source"] = std::string(to_string(model ? RowSource::classified : RowSource::ground_truth));
    std::cout << doc.dump(2) << "\n";
  });

  // report
  auto* report_cmd = app.add_subcommand("report", "render session logs as a score table");
  std::vector<fs::path> report_paths;
  ScoreFlags report_flags;
  std::string format = "table";
  std::optional<fs::path> report_out;
  report_cmd->add_option("logs", report_paths, "session logs");
  report_flags.add(report_cmd);
  report_cmd->add_option("--format", format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  report_cmd->add_option("--out", report_out, "report file (default: stdout)");
  report_cmd->callback([&] {
    std::optional<nn::Model> model;
    if (report_flags.model) model = nn::load_model(*report_flags.model);
    std::vector<ReportRow> rows;
    for (const auto& path : report_paths) {
      const auto s = score_file(path, report_flags, model);
      DifficultyConfig config = s.log.config;
      if (report_flags.t_total_override) config.t_total = report_flags.t_total_override;
      rows.push_back(make_row(config.level, s.session.t_end().value_or(s.session.last_timestamp()), s.score,
                              s.pipeline.counts, config.t_total.has_value(),
                              model ? RowSource::classified : RowSource::ground_truth));
    }
    emit(format == "csv" ? render_csv(rows) : render_table(rows), report_out);
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the local play service");
  std::string bind;
  std::optional<fs::path> serve_data;
  serve_cmd->add_option("--bind", bind, "host:port (default 127.0.0.1:7463)");
  serve_cmd->add_option("--data-dir", serve_data, "log write-through directory (default: $TRYMOVE_DATA_DIR)");
  serve_cmd->callback([&] {
    service::Options opts;
    if (!bind.empty()) service::apply_bind(opts, bind);
    if (serve_data) {
      opts.data_dir = *serve_data;
    } else if (const char* env = std::getenv("TRYMOVE_DATA_DIR"); env && *env) {
      opts.data_dir = env;
    }
    service::Server server(opts);
    const int port = server.bind();
    std::cout << "listening on http://" << opts.host << ":" << port << std::endl;
    server.run();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "trymove: " << e.what() << "\n";
    return e.kind() == ErrorKind::io ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "trymove: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "trymove: " << e.what() << "\n";
    return 1;
  }
}
