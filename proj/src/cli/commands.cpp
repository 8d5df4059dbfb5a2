#include "farmvoice/cli/commands.hpp"

#include <CLI11.hpp>
#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "farmvoice/cli/manifest.hpp"
#include "farmvoice/core/error.hpp"
#include "farmvoice/metrics/report.hpp"
#include "farmvoice/nlp/resources.hpp"
#include "farmvoice/reviews/classifier.hpp"
#include "farmvoice/reviews/corpus.hpp"
#include "farmvoice/reviews/distribution.hpp"
#include "farmvoice/reviews/preprocess.hpp"
#include "farmvoice/reviews/vocabulary.hpp"
#include "farmvoice/service/http_api.hpp"
#include "farmvoice/service/service.hpp"
#include "farmvoice/stt/inject.hpp"
#include "farmvoice/util/csv.hpp"

namespace fv::cli {

namespace {

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f << bytes;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void emit(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << bytes;
  } else {
    write_file(path, bytes);
  }
}

struct EvaluateOptions {
  std::string manifest;
  std::string out;
  std::string format = "json";
  std::string golden;
  bool update_golden = false;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  const auto manifest = load_manifest(o.manifest);
  err << "evaluate: seed=" << manifest.seed << " recordings=" << manifest.entries.size() << '\n';
  const auto report = metrics::build_report(manifest.report_input());
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  std::string bytes;
  if (o.format == "json") {
    bytes = metrics::to_json(report);
  } else if (o.format == "csv") {
    bytes = metrics::to_csv(report);
  } else {
    bytes = metrics::render_summary_table(report);
  }
  if (!o.golden.empty()) {
    if (o.update_golden) {
      write_file(o.golden, bytes);
      err << "golden updated: " << o.golden << '\n';
    } else {
      const std::string expected = nlp::read_file(o.golden);
      if (expected != bytes) {
        err << "report differs from golden " << o.golden << " (regenerate with --update-golden)\n";
        return kExitInput;
      }
    }
  }
  emit(o.out, bytes, out);
  return kExitOk;
}

struct ClassifyOptions {
  std::string corpus;
  std::string lexicons;
  std::string out;
  std::string distribution;
  std::string removal_log;
  bool strict = false;
  std::uint64_t seed = 0;
  std::size_t sample_cap = 0;
  std::string language = "en";
};

int cmd_classify(const ClassifyOptions& o, std::ostream& out, std::ostream& err) {
  err << "classify: seed=" << o.seed << '\n';
  auto read = reviews::read_corpus(o.corpus);
  for (const auto& e : read.errors) err << o.corpus << ":" << e.line << ": " << e.message << '\n';
  if (o.strict && !read.errors.empty()) {
    err << "classify: " << read.errors.size() << " malformed row(s) with --strict\n";
    return kExitInput;
  }
  reviews::PreprocessConfig pc;
  const auto lang = parse_language(o.language);
  if (!lang) throw Error(ErrorCode::UnsupportedLanguage, "unsupported language " + o.language);
  pc.target_language = *lang;
  auto pre = reviews::preprocess(read.documents, pc);
  auto docs = o.sample_cap > 0 ? reviews::bootstrap_sample(pre.kept, o.sample_cap, o.seed) : pre.kept;

  const auto lexicon = o.lexicons.empty() ? reviews::CueLexicon::builtin() : reviews::CueLexicon::load(o.lexicons);
  docs = reviews::classify_all(std::move(docs), lexicon);

  std::ostringstream labeled;
  reviews::write_labeled_jsonl(labeled, docs);
  write_file(o.out, labeled.str());

  if (!o.removal_log.empty()) {
    std::string log = "id,reason,detail\n";
    for (const auto& r : pre.removed) {
      log += util::csv_escape(r.id) + "," + std::string(reviews::to_string(r.reason)) + "," +
             util::csv_escape(r.detail) + "\n";
    }
    write_file(o.removal_log, log);
  }
  const auto dist = reviews::distribution(std::span<const reviews::ReviewDocument>(docs));
  if (!o.distribution.empty()) write_file(o.distribution, reviews::to_json(dist));
  out << reviews::render_table(dist);
  err << "classify: read=" << read.documents.size() << " removed=" << pre.removed.size()
      << " classified=" << docs.size() << '\n';
  return read.errors.empty() || !o.strict ? kExitOk : kExitInput;
}

struct InjectOptions {
  std::string reference;
  std::size_t s = 0;
  std::size_t d = 0;
  std::size_t i = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_inject(const InjectOptions& o, std::ostream& out, std::ostream& err) {
  err << "inject: seed=" << o.seed << " s=" << o.s << " d=" << o.d << " i=" << o.i << '\n';
  const std::string reference = nlp::read_file(o.reference);
  const auto hypothesis = stt::inject_errors(reference, {o.s, o.d, o.i, o.seed});
  emit(o.out, hypothesis, out);
  return kExitOk;
}

struct VocabularyOptions {
  std::string corpus;
  std::string language = "en";
};

int cmd_vocabulary(const VocabularyOptions& o, std::ostream& out, std::ostream& err) {
  auto read = reviews::read_corpus(o.corpus);
  for (const auto& e : read.errors) err << o.corpus << ":" << e.line << ": " << e.message << '\n';
  const auto lang = parse_language(o.language);
  if (!lang) throw Error(ErrorCode::UnsupportedLanguage, "unsupported language " + o.language);
  const auto hits = reviews::vocabulary_scan(read.documents, reviews::builtin_categories(), *lang);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& h : hits) {
    auto pairs = [](const std::vector<reviews::TermCount>& v) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& [term, n] : v) a.push_back({term, n});
      return a;
    };
    j.push_back({{"category", h.category}, {"seed_hits", pairs(h.seed_hits)}, {"co_occurring", pairs(h.co_occurring)}});
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct ServeOptions {
  std::string config;
  int port = -1;
};

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  auto config = service::load_config(o.config);
  if (o.port >= 0) config.port = o.port;

  // Signals are consumed by a dedicated thread; block them everywhere else.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::FeedbackService svc(config);
  service::HttpServer http(svc);
  int port = 0;
  try {
    port = http.bind(config.host, config.port);
  } catch (const Error& e) {
    err << "serve: " << e.what() << '\n';
    return kExitInput;
  }
  const auto purged = svc.apply_retention();
  err << "serve: retention sweep removed audio=" << purged.audio << " transcripts=" << purged.transcripts << '\n';
  svc.start_workers();
  out << "listening on http://" << config.host << ":" << port << std::endl;

  std::atomic<bool> done{false};
  std::jthread watcher([&] {
    const timespec tick{0, 200'000'000};
    auto last_sweep = std::chrono::steady_clock::now();
    while (!done) {
      const int sig = sigtimedwait(&signals, nullptr, &tick);
      if (sig == SIGTERM || sig == SIGINT) {
        err << "serve: signal " << sig << ", draining\n";
        http.stop();
        return;
      }
      if (std::chrono::steady_clock::now() - last_sweep > std::chrono::hours(1)) {
        svc.apply_retention();
        last_sweep = std::chrono::steady_clock::now();
      }
    }
  });
  http.listen();
  done = true;
  watcher.join();
  svc.stop_workers();
  err << "serve: stopped; queued jobs=" << svc.store().pending_jobs() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"farmvoice: spoken feedback evaluation and review mining"};
  app.name("farmvoice");
  app.require_subcommand(1);

  EvaluateOptions eval;
  auto* ev = app.add_subcommand("evaluate", "Compute the transcription report of a run manifest");
  ev->add_option("--manifest", eval.manifest, "Run manifest (JSON)")->required()->check(CLI::ExistingFile);
  ev->add_option("--out", eval.out, "Output path; stdout when omitted");
  ev->add_option("--format", eval.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  ev->add_option("--golden", eval.golden, "Compare the output with this golden file");
  ev->add_flag("--update-golden", eval.update_golden, "Rewrite the golden file instead of comparing");

  ClassifyOptions cls;
  auto* cl = app.add_subcommand("classify", "Preprocess and classify an app review corpus");
  cl->add_option("--corpus", cls.corpus, "Corpus (.csv or JSON lines)")->required()->check(CLI::ExistingFile);
  cl->add_option("--lexicons", cls.lexicons, "Cue directory; built-in cues when omitted")
      ->check(CLI::ExistingDirectory);
  cl->add_option("--out", cls.out, "Labeled corpus (JSON lines)")->required();
  cl->add_option("--distribution", cls.distribution, "Distribution report (JSON)");
  cl->add_option("--removal-log", cls.removal_log, "Preprocessing removal log (CSV)");
  cl->add_flag("--strict", cls.strict, "Fail on malformed rows");
  cl->add_option("--seed", cls.seed, "Sampling seed");
  cl->add_option("--sample-cap", cls.sample_cap, "Reviews sampled per app; 0 keeps all");
  cl->add_option("--language", cls.language, "Target language of the corpus");

  InjectOptions inj;
  auto* in = app.add_subcommand("inject", "Derive a hypothesis with exact word error counts");
  in->add_option("--reference", inj.reference, "Reference text file")->required()->check(CLI::ExistingFile);
  in->add_option("-s,--substitutions", inj.s, "Substitutions");
  in->add_option("-d,--deletions", inj.d, "Deletions");
  in->add_option("-i,--insertions", inj.i, "Insertions");
  in->add_option("--seed", inj.seed, "Placement seed");
  in->add_option("--out", inj.out, "Output path; stdout when omitted");

  VocabularyOptions voc;
  auto* vo = app.add_subcommand("vocabulary", "Count category seed terms and co-occurring words");
  vo->add_option("--corpus", voc.corpus, "Corpus (.csv or JSON lines)")->required()->check(CLI::ExistingFile);
  vo->add_option("--language", voc.language, "Corpus language");

  ServeOptions srv;
  auto* se = app.add_subcommand("serve", "Run the feedback service");
  se->add_option("--config", srv.config, "Service configuration (JSON)")->required()->check(CLI::ExistingFile);
  se->add_option("--port", srv.port, "Override the configured port");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kExitInput;
  }

  try {
    if (*ev) return cmd_evaluate(eval, out, err);
    if (*cl) return cmd_classify(cls, out, err);
    if (*in) return cmd_inject(inj, out, err);
    if (*vo) return cmd_vocabulary(voc, out, err);
    if (*se) return cmd_serve(srv, out, err);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace fv::cli
