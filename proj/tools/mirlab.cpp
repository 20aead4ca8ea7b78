// mirlab: batch front end for the analysis library. Every run writes one
// report {tool_version, command, seed, parameters, results} as JSON or as a
// flattened CSV table.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mirlab/mirlab.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mirlab;
namespace fs = std::filesystem;

struct Globals {
  std::string out;
  std::string plot;
  std::uint64_t seed = Rng::kDefaultSeed;
  double alpha = kDefaultSmoothing;
  std::string format = "json";
};

struct AlphabetOption {
  std::string path;

  Alphabet load() const { return path.empty() ? Alphabet::scale_degrees() : io::read_alphabet(path); }
  json param(const Alphabet& a) const {
    return {{"source", path.empty() ? std::string("scale_degrees") : path}, {"symbols", a.symbols()}};
  }
};

void add_alphabet(CLI::App* cmd, AlphabetOption& opt) {
  cmd->add_option("--alphabet", opt.path, "JSON array of symbols (default: 15 scale degrees)")
      ->check(CLI::ExistingFile);
}

struct ThresholdOptions {
  ClassifierThresholds t;
  std::size_t min_samples = kDefaultMinSamples;
};

void add_thresholds(CLI::App* cmd, ThresholdOptions& o) {
  cmd->add_option("--metronomic-sigma", o.t.metronomic_sigma, "BPM sd below which a curve is metronomic")
      ->capture_default_str();
  cmd->add_option("--free-sigma", o.t.free_sigma, "BPM sd above which aperiodic rubato is free")
      ->capture_default_str();
  cmd->add_option("--quasi-ratio", o.t.quasi_ratio, "periodicity ratio for quasi-periodic")->capture_default_str();
  cmd->add_option("--periodic-ratio", o.t.periodic_ratio, "periodicity ratio for periodic")->capture_default_str();
  cmd->add_option("--min-samples", o.min_samples, "shortest analysable tempo curve")->capture_default_str();
}

json threshold_params(const ThresholdOptions& o) {
  json p = report::to_json(o.t);
  p["min_samples"] = o.min_samples;
  return p;
}

bool is_matrix_text(const std::string& text) {
  const std::size_t i = io::detail::skip_ws(text, 0);
  if (i >= text.size() || text[i] != '[') return false;
  const std::size_t j = io::detail::skip_ws(text, i + 1);
  return j < text.size() && text[j] == '[';
}

// A counts file becomes one index per counted item so it can be resampled
// like a sequence.
cases::LabelPieces symbol_input(const std::string& path, const Alphabet& alphabet) {
  const std::string text = io::read_text(path);
  std::vector<std::size_t> items;
  if (io::looks_like_counts(text)) {
    const auto counts = io::read_counts(path);
    if (counts.size() != alphabet.size()) {
      throw std::invalid_argument(path + ": " + std::to_string(counts.size()) + " counts for an alphabet of " +
                                  std::to_string(alphabet.size()) + " symbols");
    }
    for (std::size_t s = 0; s < counts.size(); ++s) items.insert(items.end(), counts.counts[s], s);
  } else {
    const auto seq = io::parse_sequence(path, text);
    if (seq.empty()) throw DegenerateInputError(path + ": sequence is empty");
    items = encode(seq, alphabet);
  }
  if (items.empty()) throw DegenerateInputError(path + ": no counted symbols");
  return {path, {path}, {std::move(items)}};
}

std::vector<std::string> sorted_files(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DegenerateInputError("directory '" + dir + "' has no files");
  return files;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical analysis of symbolic music corpora and tempo curves"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--out", g.out, "write the report to FILE instead of standard output");
  app.add_option("--plot", g.plot, "write plot-ready long-format CSV tables to FILE");
  app.add_option("--seed", g.seed, "seed for every resampling step")->capture_default_str();
  app.add_option("--alpha", g.alpha, "additive smoothing pseudo-count")->capture_default_str();
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  // Each subcommand fills the report's parameters and results.
  std::map<CLI::App*, std::function<void(report::RunReport&)>> runners;

  // entropy ---------------------------------------------------------------
  struct {
    std::string input;
    AlphabetOption alphabet;
    bool raw = false;
  } ent;
  auto* c_ent = app.add_subcommand("entropy", "Shannon entropy (bits) of a count or sequence file");
  c_ent->add_option("--input", ent.input, "JSON count array or sequence file")->required()->check(CLI::ExistingFile);
  add_alphabet(c_ent, ent.alphabet);
  c_ent->add_flag("--raw", ent.raw, "use relative frequencies without smoothing");
  runners[c_ent] = [&](report::RunReport& r) {
    const std::string text = io::read_text(ent.input);
    CountVector counts;
    json params = {{"input", ent.input}, {"raw", ent.raw}};
    if (io::looks_like_counts(text)) {
      counts = io::read_counts(ent.input);
    } else {
      const auto a = ent.alphabet.load();
      counts = counts_from_sequence(io::parse_sequence(ent.input, text), a);
      params["alphabet"] = ent.alphabet.param(a);
    }
    ProbabilityVector p = [&] {
      if (!ent.raw) return smooth(counts, g.alpha);
      if (counts.total() == 0) throw DegenerateInputError("all counts are zero");
      std::vector<double> w(counts.counts.begin(), counts.counts.end());
      return ProbabilityVector::normalized(std::move(w));
    }();
    if (!ent.raw) params["alpha"] = g.alpha;
    r.parameters = params;
    r.results = {{"entropy", shannon_entropy(p)}, {"n_symbols", counts.size()}, {"total_count", counts.total()}};
  };

  // kl / js -----------------------------------------------------------------
  struct DivergenceCli {
    std::string p, q, manifest, unit = "pieces";
    AlphabetOption alphabet;
    bool symmetrize = false;
    std::size_t replicates = 1000;
  };
  DivergenceCli kl, js;
  auto add_divergence = [&](const char* name, const char* help, DivergenceCli& o, cases::Divergence measure) {
    auto* cmd = app.add_subcommand(name, help);
    auto* p = cmd->add_option("--p", o.p, "first count or sequence file")->check(CLI::ExistingFile);
    auto* q = cmd->add_option("--q", o.q, "second count or sequence file")->check(CLI::ExistingFile);
    auto* m = cmd->add_option("--manifest", o.manifest, "corpus manifest: one matrix row per label")
                  ->check(CLI::ExistingFile);
    p->needs(q);
    q->needs(p);
    m->excludes(p)->excludes(q);
    add_alphabet(cmd, o.alphabet);
    if (measure == cases::Divergence::kl) {
      cmd->add_flag("--symmetrize", o.symmetrize, "average both directions");
    }
    cmd->add_option("--replicates", o.replicates, "bootstrap replicates per cell (0: no intervals)")
        ->capture_default_str();
    cmd->add_option("--resample", o.unit, "manifest mode bootstrap unit")
        ->check(CLI::IsMember({"pieces", "symbols"}))
        ->capture_default_str();
    runners[cmd] = [&, name, measure](report::RunReport& r) {
      if (o.manifest.empty() && o.p.empty()) throw std::invalid_argument(std::string(name) + " needs --p/--q or --manifest");
      const auto a = o.alphabet.load();
      cases::DivergenceOptions d;
      d.measure = measure;
      d.symmetrize = o.symmetrize;
      d.alpha = g.alpha;
      d.replicates = o.replicates;
      d.unit = o.unit == "symbols" || o.manifest.empty() ? cases::ResampleUnit::symbols : cases::ResampleUnit::pieces;
      json params = {{"alphabet", o.alphabet.param(a)}, {"alpha", g.alpha}, {"replicates", o.replicates}};
      if (measure == cases::Divergence::kl) params["symmetrize"] = o.symmetrize;
      if (o.manifest.empty()) {
        params["p"] = o.p;
        params["q"] = o.q;
        params["resample"] = "symbols";
        r.parameters = params;
        const auto out = cases::corpus_divergence({symbol_input(o.p, a), symbol_input(o.q, a)}, a, d, r.seed);
        r.results = {{"divergence", out["matrix"]["values"][0][1]}};
        if (out.contains("intervals")) r.results["interval"] = out["intervals"][0];
        return;
      }
      params["manifest"] = o.manifest;
      params["resample"] = o.unit;
      r.parameters = params;
      r.results = cases::corpus_divergence(cases::group_sequences(io::read_manifest(o.manifest), a), a, d, r.seed);
    };
  };
  add_divergence("kl", "Kullback-Leibler divergence (bits) of smoothed distributions", kl, cases::Divergence::kl);
  add_divergence("js", "Jensen-Shannon divergence (bits) of smoothed distributions", js, cases::Divergence::js);

  // zipf --------------------------------------------------------------------
  std::string zipf_input;
  auto* c_zipf = app.add_subcommand("zipf", "Rank-frequency power-law fit");
  c_zipf->add_option("--input", zipf_input, "JSON frequency array or sequence file")
      ->required()
      ->check(CLI::ExistingFile);
  runners[c_zipf] = [&](report::RunReport& r) {
    const std::string text = io::read_text(zipf_input);
    std::vector<double> freqs;
    if (io::looks_like_counts(text)) {
      freqs = io::read_numbers(zipf_input);
    } else {
      std::map<std::string, double> tally;
      for (const auto& s : io::parse_sequence(zipf_input, text)) tally[s] += 1.0;
      for (const auto& [s, n] : tally) freqs.push_back(n);
    }
    r.parameters = {{"input", zipf_input}};
    r.results = report::to_json(zipf_fit(freqs));
  };

  // gini --------------------------------------------------------------------
  std::string gini_input;
  auto* c_gini = app.add_subcommand("gini", "Gini coefficient per labelled dimension");
  c_gini->add_option("--input", gini_input, "JSON array of values, or {labels, rows}")
      ->required()
      ->check(CLI::ExistingFile);
  runners[c_gini] = [&](report::RunReport& r) {
    const auto t = io::read_labeled_table(gini_input);
    r.parameters = {{"input", gini_input}};
    r.results = report::to_json(gini_multi(t.labels, t.rows));
  };

  // network -----------------------------------------------------------------
  struct {
    std::vector<std::string> inputs;
    std::string dir;
    AlphabetOption alphabet;
    double threshold = kDefaultPruneThreshold;
    double damping = graph::kDefaultDamping;
  } net;
  auto* c_net = app.add_subcommand("network", "Chord-transition graph descriptors");
  c_net->add_option("--input", net.inputs, "bigram-count matrix or sequence file (repeatable)")
      ->check(CLI::ExistingFile);
  c_net->add_option("--dir", net.dir, "directory of sequence files, aggregated")->check(CLI::ExistingDirectory);
  add_alphabet(c_net, net.alphabet);
  c_net->add_option("--threshold", net.threshold, "edge pruning threshold on transition probability")
      ->capture_default_str();
  c_net->add_option("--damping", net.damping, "PageRank damping factor")->capture_default_str();
  runners[c_net] = [&](report::RunReport& r) {
    std::vector<std::string> files = net.inputs;
    if (!net.dir.empty()) {
      const auto more = sorted_files(net.dir);
      files.insert(files.end(), more.begin(), more.end());
    }
    if (files.empty()) throw std::invalid_argument("network needs --input or --dir");
    const auto a = net.alphabet.load();
    CountMatrix total(a.size(), std::vector<std::uint64_t>(a.size(), 0));
    std::size_t used = 0;
    json skipped = json::array();
    for (const auto& f : files) {
      const std::string text = io::read_text(f);
      if (is_matrix_text(text)) {
        const auto m = io::read_count_matrix(f);
        if (m.size() != a.size()) {
          throw std::invalid_argument(f + ": " + std::to_string(m.size()) + "x" + std::to_string(m.size()) +
                                      " matrix for an alphabet of " + std::to_string(a.size()) + " symbols");
        }
        accumulate(total, m);
        ++used;
        continue;
      }
      try {
        accumulate(total, bigram_counts(io::parse_sequence(f, text), a, true));
        ++used;
      } catch (const DegenerateInputError& e) {
        skipped.push_back({{"input", f}, {"reason", e.what()}});
      }
    }
    if (used == 0) throw DegenerateInputError("no input yields a transition");
    r.parameters = {{"inputs", net.inputs},
                    {"dir", net.dir},
                    {"alphabet", net.alphabet.param(a)},
                    {"threshold", net.threshold},
                    {"damping", net.damping}};
    const auto na = network_analysis(chord_graph(total, a, net.threshold), net.damping);
    json features;
    try {
      features = report::to_json(feature_vector(na));
    } catch (const DegenerateInputError& e) {
      features = cases::error_entry(e);
    }
    r.results = {{"analysis", report::to_json(na)},
                 {"features", features},
                 {"sources_used", used},
                 {"skipped", skipped}};
  };

  // stationarity ------------------------------------------------------------
  struct {
    std::string input;
    AlphabetOption alphabet;
    std::size_t segments = kDefaultSegments;
    bool collapse = false;
  } st;
  auto* c_st = app.add_subcommand("stationarity", "Chi-squared test of symbol use across segments");
  c_st->add_option("--input", st.input, "sequence file")->required()->check(CLI::ExistingFile);
  add_alphabet(c_st, st.alphabet);
  c_st->add_option("--segments", st.segments, "number of contiguous segments")->capture_default_str();
  c_st->add_flag("--collapse", st.collapse, "collapse consecutive duplicates first");
  runners[c_st] = [&](report::RunReport& r) {
    const auto a = st.alphabet.load();
    r.parameters = {{"input", st.input},
                    {"alphabet", st.alphabet.param(a)},
                    {"segments", st.segments},
                    {"collapse", st.collapse}};
    r.results = report::to_json(stationarity_test(io::read_sequence(st.input), a, st.segments, st.collapse));
  };

  // higuchi -----------------------------------------------------------------
  struct {
    std::string input;
    std::size_t k_max = 0;
  } hg;
  auto* c_hg = app.add_subcommand("higuchi", "Higuchi fractal dimension of a real series");
  c_hg->add_option("--input", hg.input, "JSON array of reals or one number per line")
      ->required()
      ->check(CLI::ExistingFile);
  c_hg->add_option("--kmax", hg.k_max, "largest scale (0: min(16, n/4))")->capture_default_str();
  runners[c_hg] = [&](report::RunReport& r) {
    const auto x = io::read_numeric_sequence(hg.input);
    const std::size_t k = hg.k_max == 0 ? default_k_max(x.size()) : hg.k_max;
    r.parameters = {{"input", hg.input}, {"k_max", k}};
    r.results = report::to_json(higuchi_fractal_dimension(x, k));
  };

  // rubato ------------------------------------------------------------------
  struct {
    std::string input;
    ThresholdOptions th;
  } rb;
  auto* c_rb = app.add_subcommand("rubato", "Spectral rubato classification of one tempo curve");
  c_rb->add_option("--input", rb.input, "tempo curve {\"bpm\": [...]}")->required()->check(CLI::ExistingFile);
  add_thresholds(c_rb, rb.th);
  runners[c_rb] = [&](report::RunReport& r) {
    r.parameters = {{"input", rb.input}, {"thresholds", threshold_params(rb.th)}};
    r.results = report::to_json(rubato_spectral(io::read_tempo_curve(rb.input), rb.th.t, rb.th.min_samples));
  };

  // intervals ---------------------------------------------------------------
  struct {
    std::string input;
    bool from_sequence = false;
    std::size_t replicates = 1000;
  } iv;
  auto* c_iv = app.add_subcommand("intervals", "Exponential vs Laplace fit of interval data");
  c_iv->add_option("--input", iv.input, "JSON array of intervals, or a numeric sequence with --from-sequence")
      ->required()
      ->check(CLI::ExistingFile);
  c_iv->add_flag("--from-sequence", iv.from_sequence, "take successive differences of the input");
  c_iv->add_option("--replicates", iv.replicates, "bootstrap replicates (0: no intervals)")->capture_default_str();
  runners[c_iv] = [&](report::RunReport& r) {
    std::vector<double> x = iv.from_sequence ? io::read_numeric_sequence(iv.input) : io::read_numbers(iv.input);
    if (iv.from_sequence) x = intervals_from_sequence<double>(x);
    r.parameters = {{"input", iv.input}, {"from_sequence", iv.from_sequence}, {"replicates", iv.replicates}};
    r.results = {{"analysis", report::to_json(interval_analysis(x))}};
    if (iv.replicates > 0) r.results["bootstrap"] = report::to_json(interval_param_bootstrap(x, iv.replicates, r.seed));
  };

  // case-network ------------------------------------------------------------
  struct {
    std::string manifest, reference;
    AlphabetOption alphabet;
    cases::NetworkCaseOptions opt;
  } cn;
  auto* c_cn = app.add_subcommand("case-network", "Per-label chord networks compared against a reference");
  c_cn->add_option("--manifest", cn.manifest, "corpus manifest")->required()->check(CLI::ExistingFile);
  c_cn->add_option("--reference", cn.reference, "divergence matrix {labels, values}")->check(CLI::ExistingFile);
  add_alphabet(c_cn, cn.alphabet);
  c_cn->add_option("--threshold", cn.opt.threshold, "edge pruning threshold")->capture_default_str();
  c_cn->add_option("--damping", cn.opt.damping, "PageRank damping factor")->capture_default_str();
  runners[c_cn] = [&](report::RunReport& r) {
    const auto a = cn.alphabet.load();
    r.parameters = {{"manifest", cn.manifest},
                    {"reference", cn.reference},
                    {"alphabet", cn.alphabet.param(a)},
                    {"threshold", cn.opt.threshold},
                    {"damping", cn.opt.damping}};
    std::optional<DivergenceMatrix> ref;
    if (!cn.reference.empty()) ref = io::read_divergence_matrix(cn.reference);
    r.results = cases::run_network_case(io::read_manifest(cn.manifest), a, ref, cn.opt);
  };

  // case-rubato -------------------------------------------------------------
  struct {
    std::string manifest, paired;
    bool sensitivity = false;
    std::size_t replicates = 1000;
    ThresholdOptions th;
  } cr;
  auto* c_cr = app.add_subcommand("case-rubato", "Rubato categories per label, paired deltas, threshold sweep");
  c_cr->add_option("--manifest", cr.manifest, "corpus manifest of tempo curves")->required()->check(CLI::ExistingFile);
  c_cr->add_option("--paired", cr.paired, "pairing file {pairs: [{unit, before, after}]}")->check(CLI::ExistingFile);
  c_cr->add_flag("--sensitivity", cr.sensitivity, "add the seventeen-run threshold sweep");
  c_cr->add_option("--replicates", cr.replicates, "bootstrap replicates")->capture_default_str();
  add_thresholds(c_cr, cr.th);
  runners[c_cr] = [&](report::RunReport& r) {
    r.parameters = {{"manifest", cr.manifest},
                    {"paired", cr.paired},
                    {"sensitivity", cr.sensitivity},
                    {"replicates", cr.replicates},
                    {"thresholds", threshold_params(cr.th)}};
    cases::RubatoCaseOptions opt;
    opt.thresholds = cr.th.t;
    opt.min_samples = cr.th.min_samples;
    opt.replicates = cr.replicates;
    opt.sensitivity = cr.sensitivity;
    if (!cr.paired.empty()) opt.pairs = io::read_pairing(cr.paired);
    r.results = cases::run_rubato_case(io::read_manifest(cr.manifest), opt, r.seed);
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    report::RunReport r;
    r.command = chosen->get_name();
    r.seed = g.seed;
    runners.at(chosen)(r);
    const std::string body = g.format == "csv" ? report::to_csv(r) : r.to_json().dump(2) + "\n";
    if (!g.plot.empty()) {
      const std::string table = report::plot_table(r.results);
      if (table.empty()) throw std::invalid_argument("command '" + r.command + "' has no plot-ready tables");
      write_text(g.plot, table);
    }
    write_text(g.out, body);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
