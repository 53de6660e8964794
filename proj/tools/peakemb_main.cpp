// Command-line front end: synth, extract, embed, evaluate, project.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "peakemb/config.hpp"
#include "peakemb/csv_io.hpp"
#include "peakemb/error.hpp"
#include "peakemb/harness.hpp"
#include "peakemb/synth.hpp"
#include "peakemb/tsne.hpp"

namespace fs = std::filesystem;
using namespace peakemb;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Bad flag values discovered after CLI11 has accepted the syntax.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value settings file")->check(CLI::ExistingFile);
  cmd->add_option("--workers", c.workers, "extraction threads")->check(CLI::PositiveNumber);
}

struct Settings {
  HarnessConfig harness;
  TsneConfig tsne;
};

Settings load_settings(const Common& c) {
  Settings s;
  if (!c.config.empty()) apply_config(read_key_values(c.config), s.harness, s.tsne);
  if (c.workers) s.harness.workers = *c.workers;
  return s;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

double parse_number(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(what + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<FeatureSet> parse_feature_list(const std::string& text) {
  if (text == "all") return {kAllFeatureSets.begin(), kAllFeatureSets.end()};
  std::vector<FeatureSet> out;
  for (const auto& name : split(text, ',')) {
    const auto fs = parse_feature_set(name);
    if (!fs) throw UsageError("unknown feature set '" + name + "'");
    if (std::find(out.begin(), out.end(), *fs) == out.end()) out.push_back(*fs);
  }
  if (out.empty()) throw UsageError("--features is empty");
  return out;
}

// ---- synth ----

struct SynthArgs {
  std::string profiles;
  std::string labels;
  std::string partitions;
  std::size_t n = 50;
  std::string dur = "0.9:1.71";
  double jitter = 0.03;
  std::uint64_t seed = 42;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  SynthSpec spec;
  for (const auto& profile : split(a.profiles, ';')) {
    std::vector<double> positions;
    for (const auto& p : split(profile, ',')) positions.push_back(parse_number(p, "--profiles"));
    spec.class_profiles.push_back(std::move(positions));
  }
  if (!a.labels.empty()) spec.class_labels = split(a.labels, ',');
  if (!a.partitions.empty()) spec.partitions = split(a.partitions, ',');
  const auto colon = a.dur.find(':');
  if (colon == std::string::npos) throw UsageError("--dur expects MIN:MAX");
  spec.min_duration_s = parse_number(std::string_view(a.dur).substr(0, colon), "--dur");
  spec.max_duration_s = parse_number(std::string_view(a.dur).substr(colon + 1), "--dur");
  spec.n_per_class = a.n;
  spec.jitter_frac = a.jitter;
  spec.seed = a.seed;
  const auto m = synthesize_rhythm_corpus(spec, a.out);
  std::cerr << "wrote " << m.entries.size() << " utterances and "
            << (fs::path(a.out) / "manifest.csv").string() << '\n';
  return 0;
}

// ---- extract ----

int run_extract(const Common& c, const std::string& manifest_path, const fs::path& out_dir,
                bool dump_tracks) {
  const Settings s = load_settings(c);
  const auto m = load_manifest(manifest_path);
  fs::create_directories(out_dir);

  struct Row {
    std::size_t frames = 0;
    double voiced_fraction = 0.0;
    double duration_s = 0.0;
    std::string error;
  };
  std::vector<Row> rows(m.entries.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const auto& e = m.entries[i];
      try {
        const auto audio = load_wav(e.audio_path);
        const auto tracks = compute_llds(audio, s.harness.frame);
        rows[i].frames = tracks.pitch.size();
        rows[i].duration_s = audio.duration_s();
        rows[i].voiced_fraction =
            static_cast<double>(std::count(tracks.pitch.voiced.begin(), tracks.pitch.voiced.end(), true)) /
            static_cast<double>(tracks.pitch.size());
        if (dump_tracks) {
          auto out = open_out(out_dir / (e.utterance_id + ".csv"));
          write_track_csv(out, tracks);
        }
      } catch (const Error& err) {
        rows[i].error = err.what();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned workers = std::max(1u, s.harness.workers);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  auto out = open_out(out_dir / "summary.csv");
  out << "utterance_id,label,duration_s,frames,voiced_fraction,status\n";
  std::size_t failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& e = m.entries[i];
    out << csv::escape(e.utterance_id) << ',' << csv::escape(e.group_label) << ','
        << rows[i].duration_s << ',' << rows[i].frames << ',' << rows[i].voiced_fraction << ','
        << csv::escape(rows[i].error.empty() ? "ok" : rows[i].error) << '\n';
    if (!rows[i].error.empty()) {
      ++failed;
      std::cerr << "skipped " << e.utterance_id << ": " << rows[i].error << '\n';
    }
  }
  std::cerr << "extracted " << rows.size() - failed << " of " << rows.size() << " utterances\n";
  return 0;
}

// ---- embed ----

std::string descriptor_set_name(FeatureSet fs) {
  const std::string pitch(to_string(Descriptor::Pitch));
  const std::string loud(to_string(Descriptor::Loudness));
  switch (fs) {
    case FeatureSet::PePitch: return pitch;
    case FeatureSet::PeLoudness: return loud;
    case FeatureSet::PePitchConcatLoudness: return pitch + ";" + loud;
    case FeatureSet::PePitchSumLoudness: return pitch + "+" + loud;
    case FeatureSet::BaselineFunctionals: break;
  }
  return {};
}

int run_embed(const Common& c, const std::string& manifest_path, const std::string& feature,
              const fs::path& out_path) {
  const auto fs_opt = parse_feature_set(feature);
  if (!fs_opt) throw UsageError("unknown feature set '" + feature + "'");
  const FeatureSet set = *fs_opt;
  const Settings s = load_settings(c);
  const auto m = load_manifest(manifest_path);
  const std::array<FeatureSet, 1> sets = {set};
  const auto ex = extract_features(m, sets, s.harness);
  const auto& table = ex.table(set);

  auto out = open_out(out_path);
  if (set == FeatureSet::BaselineFunctionals) {
    out << "utterance_id,label,peak_rate,v_mean,v_std,uv_mean,uv_std,psyl_rate\n";
  } else {
    out << "utterance_id,label,descriptor_set";
    for (std::size_t k = 0; k < feature_dimension(set, s.harness.pe); ++k) out << ",v" << k;
    out << '\n';
  }
  for (std::size_t r = 0; r < table.points.size(); ++r) {
    const auto& e = m.entries[table.entry_index[r]];
    out << csv::escape(e.utterance_id) << ',' << csv::escape(e.group_label);
    if (set != FeatureSet::BaselineFunctionals) out << ',' << descriptor_set_name(set);
    for (double v : table.points[r]) out << ',' << v;
    out << '\n';
  }
  for (const auto& sk : ex.skipped) std::cerr << "skipped " << sk.utterance_id << ": " << sk.reason << '\n';
  return 0;
}

// ---- evaluate ----

int run_evaluate(const Common& c, const std::string& manifest_path, const std::string& mode,
                 const std::string& features, const fs::path& out_path, const std::string& csv_path,
                 bool standardize) {
  const auto sets = parse_feature_list(features);
  Settings s = load_settings(c);
  if (standardize) s.harness.standardize = true;
  const auto m = load_manifest(manifest_path);
  const auto report = run_evaluation(m, mode == "words" ? EvalMode::Words : EvalMode::Pairs,
                                     sets, s.harness);
  open_out(out_path) << to_json(report) << '\n';
  if (!csv_path.empty()) {
    auto out = open_out(csv_path);
    write_report_csv(out, report);
  }
  for (const auto& [set, metrics] : report.averages) {
    std::cout << std::left << std::setw(24) << report_name(set) << " SC " << std::fixed
              << std::setprecision(4) << metrics.sc << "  GSI " << metrics.gsi << '\n';
  }
  if (!report.skipped.empty()) std::cerr << report.skipped.size() << " utterance(s) skipped\n";
  for (const auto& a : report.aborted) {
    std::cerr << "aborted " << report_name(a.feature_set) << ' ' << a.scope << ": " << a.reason
              << '\n';
  }
  return 0;
}

// ---- project ----

void write_svg(const fs::path& path, const Projection2D& proj) {
  constexpr double kSize = 600.0;
  constexpr double kMargin = 30.0;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (std::size_t i = 0; i < proj.coordinates.size(); ++i) {
    const auto& p = proj.coordinates[i];
    if (i == 0 || p[0] < lo_x) lo_x = p[0];
    if (i == 0 || p[0] > hi_x) hi_x = p[0];
    if (i == 0 || p[1] < lo_y) lo_y = p[1];
    if (i == 0 || p[1] > hi_y) hi_y = p[1];
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  auto sx = [&](double x) { return kMargin + (x - lo_x) / span * (kSize - 2 * kMargin); };
  auto sy = [&](double y) { return kSize - kMargin - (y - lo_y) / span * (kSize - 2 * kMargin); };

  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::map<std::string, std::size_t> index;
  for (const auto& l : proj.labels) index.emplace(l, 0);
  std::size_t k = 0;
  for (auto& [label, i] : index) i = k++;

  auto out = open_out(path);
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < proj.coordinates.size(); ++i) {
    const std::size_t c = index.at(proj.labels[i]);
    const char* color = kPalette[c % std::size(kPalette)];
    const double x = sx(proj.coordinates[i][0]);
    const double y = sy(proj.coordinates[i][1]);
    // Shape cycles every ten labels so colours can repeat without ambiguity.
    if ((c / std::size(kPalette)) % 2 == 0) {
      out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else {
      out << "<rect x=\"" << x - 4 << "\" y=\"" << y - 4 << "\" width=\"8\" height=\"8\" fill=\""
          << color << "\"/>\n";
    }
  }
  double legend_y = 16;
  for (const auto& [label, c] : index) {
    out << "<text x=\"8\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
        << kPalette[c % std::size(kPalette)] << "\">" << label << "</text>\n";
    legend_y += 14;
  }
  out << "</svg>\n";
}

int run_project(const Common& c, const fs::path& embeddings, std::optional<double> perplexity,
                std::optional<std::uint64_t> seed, const fs::path& out_path,
                const std::string& svg_path) {
  Settings s = load_settings(c);
  if (perplexity) s.tsne.perplexity = *perplexity;
  if (seed) s.tsne.seed = *seed;

  const auto table = csv::read(embeddings);
  std::optional<std::size_t> id_col, label_col;
  std::vector<std::size_t> value_cols;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    const auto& h = table.header[k];
    if (h == "utterance_id") id_col = k;
    else if (h == "label") label_col = k;
    else if (h != "descriptor_set") value_cols.push_back(k);
  }
  if (!id_col || !label_col || value_cols.empty()) {
    throw Error(ErrorCode::InvalidPointSet,
                embeddings.string() + ": expected utterance_id, label and value columns");
  }
  LabeledPointSet set;
  std::vector<std::string> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw Error(ErrorCode::InvalidPointSet,
                  embeddings.string() + ":" + std::to_string(table.line_numbers[r]) +
                      ": wrong field count");
    }
    std::vector<double> p;
    for (auto k : value_cols) {
      try {
        p.push_back(parse_number(row[k], "value"));
      } catch (const UsageError& e) {
        throw Error(ErrorCode::InvalidPointSet,
                    embeddings.string() + ":" + std::to_string(table.line_numbers[r]) + ": " +
                        e.what());
      }
    }
    set.points.push_back(std::move(p));
    set.labels.push_back(row[*label_col]);
    ids.push_back(row[*id_col]);
  }

  const auto proj = tsne_project(set, s.tsne);
  auto out = open_out(out_path);
  out << "utterance_id,label,x,y\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << csv::escape(ids[i]) << ',' << csv::escape(set.labels[i]) << ','
        << proj.coordinates[i][0] << ',' << proj.coordinates[i][1] << '\n';
  }
  if (!svg_path.empty()) write_svg(svg_path, proj);
  std::cerr << "final KL " << proj.final_kl << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peak Embedding prosody toolkit"};
  app.require_subcommand(1, 1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic rhythm corpus and manifest");
  synth_cmd->add_option("--profiles", synth.profiles, "bump positions, e.g. \"0.2,0.8;0.45,0.55\"")
      ->required();
  synth_cmd->add_option("--labels", synth.labels, "comma-separated class names");
  synth_cmd->add_option("--partitions", synth.partitions, "comma-separated partition tags");
  synth_cmd->add_option("--n", synth.n, "utterances per class (per partition)")
      ->capture_default_str();
  synth_cmd->add_option("--dur", synth.dur, "duration range MIN:MAX in seconds")
      ->capture_default_str();
  synth_cmd->add_option("--jitter", synth.jitter, "bump position jitter (fraction of duration)")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  Common extract_common;
  std::string extract_manifest, extract_out;
  bool dump_tracks = false;
  auto* extract_cmd = app.add_subcommand("extract", "compute pitch and loudness tracks");
  extract_cmd->add_option("--manifest", extract_manifest)->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--out", extract_out, "output directory")->required();
  extract_cmd->add_flag("--dump-tracks", dump_tracks, "write one track CSV per utterance");
  add_common(extract_cmd, extract_common);

  Common embed_common;
  std::string embed_manifest, embed_features, embed_out;
  auto* embed_cmd = app.add_subcommand("embed", "write one feature vector per utterance");
  embed_cmd->add_option("--manifest", embed_manifest)->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--features", embed_features,
                        "baseline|pe-pitch|pe-loudness|pe-concat|pe-sum")
      ->required();
  embed_cmd->add_option("--out", embed_out, "CSV path")->required();
  add_common(embed_cmd, embed_common);

  Common eval_common;
  std::string eval_manifest, eval_mode = "pairs", eval_features = "all", eval_out, eval_csv;
  bool standardize = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "SC and GSI per group pair or partition");
  eval_cmd->add_option("--manifest", eval_manifest)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--mode", eval_mode)
      ->check(CLI::IsMember({"pairs", "words"}))
      ->capture_default_str();
  eval_cmd->add_option("--features", eval_features, "all or a comma-separated list")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "JSON report path")->required();
  eval_cmd->add_option("--csv", eval_csv, "also write a flat CSV");
  eval_cmd->add_flag("--standardize", standardize, "z-score each dimension before metrics");
  add_common(eval_cmd, eval_common);

  Common project_common;
  std::string project_in, project_out, project_svg;
  std::optional<double> perplexity;
  std::optional<std::uint64_t> seed;
  auto* project_cmd = app.add_subcommand("project", "2-D t-SNE coordinates of an embedding CSV");
  project_cmd->add_option("--embeddings", project_in)->required()->check(CLI::ExistingFile);
  project_cmd->add_option("--perplexity", perplexity)->check(CLI::PositiveNumber);
  project_cmd->add_option("--seed", seed);
  project_cmd->add_option("--out", project_out, "coordinates CSV")->required();
  project_cmd->add_option("--svg", project_svg, "optional scatter plot");
  add_common(project_cmd, project_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*extract_cmd) return run_extract(extract_common, extract_manifest, extract_out, dump_tracks);
    if (*embed_cmd) return run_embed(embed_common, embed_manifest, embed_features, embed_out);
    if (*eval_cmd) {
      return run_evaluate(eval_common, eval_manifest, eval_mode, eval_features, eval_out, eval_csv,
                          standardize);
    }
    if (*project_cmd) {
      return run_project(project_common, project_in, perplexity, seed, project_out, project_svg);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
