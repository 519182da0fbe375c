#include "tssort/cli.hpp"

#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "tssort/harness.hpp"
#include "tssort/service.hpp"

namespace tssort::cli {

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
  return s.substr(start);
}

struct SimulateFlags {
  std::vector<std::size_t> lengths;
  std::vector<double> noise;
  std::size_t runs = 0;
  std::vector<std::string> algorithms;
  std::uint64_t seed = 0;
  std::string out_dir;
  double budget_multiplier = 1.0;
  unsigned threads = 0;
};

int cmd_simulate(const SimulateFlags& flags, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (!flags.lengths.empty()) config.lengths = flags.lengths;
  if (!flags.noise.empty()) config.noise_levels = flags.noise;
  if (flags.runs > 0) config.runs = flags.runs;
  if (!flags.algorithms.empty()) {
    config.algorithms.clear();
    for (const auto& name : flags.algorithms) config.algorithms.push_back(parse_sim_algorithm(name));
  }
  config.base_seed = flags.seed;
  config.budget_multiplier = flags.budget_multiplier;
  config.threads = flags.threads;
  config.validate();

  const MatrixReport report = run_matrix(config, flags.out_dir, &out);
  if (report.complete()) {
    out << "wrote " << report.cells.size() << " curve file(s) and manifest.txt to "
        << flags.out_dir << '\n';
    return kExitOk;
  }
  err << "simulation incomplete:\n";
  for (const auto& cell : report.cells) {
    if (cell.status != "done") {
      err << "  " << to_string(cell.algorithm) << " n=" << cell.n << " noise=" << cell.noise_level
          << ": " << cell.status << (cell.error.empty() ? "" : " (" + cell.error + ")") << '\n';
    }
  }
  return kExitFailure;
}

int cmd_serve(const std::string& host, int port, const std::string& data_dir,
              const std::string& static_dir, std::ostream& out, std::ostream& err) {
  std::optional<service::SessionService> api;
  try {
    api.emplace(data_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  std::optional<std::filesystem::path> statics;
  if (!static_dir.empty()) statics = static_dir;
  service::HttpServer server(*api, statics);
  const auto bound = server.bind(host, port);
  if (!bound) {
    err << "error: cannot listen on " << host << ':' << port << '\n';
    return kExitFailure;
  }

  // SIGINT/SIGTERM are taken synchronously by a watcher thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::jthread watcher([&] {
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
  });

  out << "listening on http://" << host << ':' << *bound << std::endl;
  const bool ok = server.serve();
  if (!ok) {
    // Wake the watcher so it can be joined.
    pthread_kill(watcher.native_handle(), SIGTERM);
    err << "error: server stopped unexpectedly\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

std::vector<std::string> read_item_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read item file " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) labels.push_back(line);
  }
  if (in.bad()) throw std::runtime_error("error reading item file " + path.string());
  return labels;
}

void print_ranking(const SortSession& session, std::span<const std::string> labels,
                   std::ostream& out) {
  out << "rank\tlabel\tmu\tsigma\tscore\n";
  const auto order = session.order();
  const bool trueskill = uses_trueskill(session.algorithm());
  out << std::fixed << std::setprecision(4);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t item = order[rank];
    double mu = session.score(item);
    double sigma = 0.0;
    if (trueskill) {
      mu = session.gaussian_ratings()[item].mu;
      sigma = session.gaussian_ratings()[item].sigma;
    }
    out << (rank + 1) << '\t' << labels[item] << '\t' << mu << '\t' << sigma << '\t'
        << session.score(item) << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

int interactive_sort(std::span<const std::string> labels, Algorithm algorithm, std::istream& in,
                     std::ostream& out) {
  SortSession session(labels.size(), algorithm);
  std::string answer;
  while (!session.is_finished()) {
    const PairChoice pair = session.next_pair();
    out << '[' << (session.comparisons_done() + 1) << '/' << session.budget() << "] 1) "
        << labels[pair.first] << "   2) " << labels[pair.second]
        << "   which is greater? (1/2/=/q): " << std::flush;
    if (!std::getline(in, answer)) {
      out << '\n';
      break;
    }
    answer = trim(answer);
    if (answer == "q") break;
    if (answer == "1") {
      session.apply_outcome(pair, Outcome::first_wins);
    } else if (answer == "2") {
      session.apply_outcome(pair, Outcome::second_wins);
    } else if (answer == "=") {
      session.apply_outcome(pair, Outcome::draw);
    } else {
      out << "please answer 1, 2, = or q\n";
    }
  }
  print_ranking(session, labels, out);
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Probabilistic noise-resistant comparison sorting", "tssort"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run the convergence experiment matrix");
  simulate->add_option("--lengths", sim.lengths, "List lengths, comma separated")
      ->delimiter(',')
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  simulate->add_option("--noise", sim.noise, "Noise levels in [0, 1], comma separated")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--runs", sim.runs, "Runs per cell (default 128 for n <= 64, else 64)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--algorithms", sim.algorithms, "Algorithms, comma separated")
      ->delimiter(',')
      ->check([](const std::string& name) {
        try {
          parse_sim_algorithm(name);
          return std::string();
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
      });
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--budget-multiplier", sim.budget_multiplier,
                       "Scale of the n*log2(n) budget for probabilistic sorts")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  std::string items_file;
  std::string sort_algorithm = "tssort_partner_wover";
  auto* sort = app.add_subcommand("sort", "Sort items interactively on the terminal");
  sort->add_option("--items", items_file, "File with one item label per line")->required();
  sort->add_option("--algorithm", sort_algorithm, "Probabilistic sort algorithm")
      ->check([](const std::string& name) {
        try {
          parse_algorithm(name);
          return std::string();
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
      });

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP session API");
  serve->add_option("--port", port, "TCP port, 0 picks a free one")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--data-dir", data_dir, "Directory for persisted sessions")->required();
  serve->add_option("--static-dir", static_dir, "Optional web bundle served under /ui");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*sort) {
      std::vector<std::string> labels;
      try {
        labels = read_item_file(items_file);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      if (labels.size() < 2) {
        err << "error: --items needs at least 2 nonempty lines, got " << labels.size() << '\n';
        return kExitUsage;
      }
      return interactive_sort(labels, parse_algorithm(sort_algorithm), in, out);
    }
    if (*serve) return cmd_serve(host, port, data_dir, static_dir, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace tssort::cli
