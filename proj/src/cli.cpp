#include "meshgrade/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "meshgrade/error.hpp"
#include "meshgrade/eval.hpp"
#include "meshgrade/features.hpp"
#include "meshgrade/format.hpp"
#include "meshgrade/mesh_io.hpp"
#include "meshgrade/metrics.hpp"
#include "meshgrade/model_io.hpp"
#include "meshgrade/synth.hpp"
#include "meshgrade/train_config.hpp"
#include "meshgrade/viz.hpp"

namespace meshgrade {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kManifestFormatTag = "meshgrade-manifest/v1";

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

// Every artifact goes to --out and/or --stdout; producing neither is a
// configuration error, not silent success.
void emit(const std::string& content, const std::string& out_path,
          bool to_stdout, std::ostream& out) {
  if (out_path.empty() && !to_stdout) {
    throw ConfigError("no output destination; pass --out or --stdout");
  }
  if (!out_path.empty()) write_text_file(out_path, content);
  if (to_stdout) out << content;
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

// --- shared option groups ---------------------------------------------

struct FeatureFlags {
  int ring_limit = 4;
  std::vector<std::string> aggregators;
  bool skip_k0 = false;
};

void add_feature_flags(CLI::App* cmd, FeatureFlags& flags) {
  cmd->add_option("--ring-limit", flags.ring_limit,
                  "Largest neighbourhood ring entering the features")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--aggregators", flags.aggregators,
                  "Frontier aggregators, subset of min,max,mean")
      ->delimiter(',');
  cmd->add_flag("--skip-k0", flags.skip_k0,
                "Collapse the k=0 block to one entry per property");
}

FeatureConfig feature_config_from(const FeatureFlags& flags) {
  FeatureConfig config;
  config.ring_limit = flags.ring_limit;
  config.skip_k0_duplicates = flags.skip_k0;
  if (!flags.aggregators.empty()) {
    config.aggregators.clear();
    for (const std::string& name : flags.aggregators) {
      config.aggregators.push_back(aggregator_from_string(name));
    }
  }
  return config;
}

struct TrainFlags {
  std::string model = "extratrees";
  std::uint64_t seed = 0;
  int trees = 100;
  int split_attributes = 0;
  int min_split = 2;
  std::vector<int> hidden{64, 128, 16};
  double learning_rate = 0.01;
  int batch = 256;
  int epochs = 50;
  int patience = 5;
  double validation_fraction = 0.1;
};

void add_train_flags(CLI::App* cmd, TrainFlags& flags) {
  cmd->add_option("--model", flags.model, "Model kind: extratrees or fnn")
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Seed for all randomness")
      ->capture_default_str();
  cmd->add_option("--trees", flags.trees, "Ensemble size")
      ->capture_default_str();
  cmd->add_option("--split-attributes", flags.split_attributes,
                  "Attributes drawn per split; 0 means round(sqrt(D))")
      ->capture_default_str();
  cmd->add_option("--min-split", flags.min_split,
                  "Smallest node size still split")
      ->capture_default_str();
  cmd->add_option("--hidden", flags.hidden, "Hidden layer widths")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--learning-rate", flags.learning_rate,
                  "Adam step size")
      ->capture_default_str();
  cmd->add_option("--batch", flags.batch, "Minibatch size")
      ->capture_default_str();
  cmd->add_option("--epochs", flags.epochs, "Epoch cap")
      ->capture_default_str();
  cmd->add_option("--patience", flags.patience,
                  "Epochs without validation improvement before stopping")
      ->capture_default_str();
  cmd->add_option("--validation-fraction", flags.validation_fraction,
                  "Holdout share for early stopping")
      ->capture_default_str();
}

TrainConfig train_config_from(const TrainFlags& flags) {
  TrainConfig config;
  config.kind = model_kind_from_string(flags.model);
  config.seed = flags.seed;
  config.tree_count = flags.trees;
  config.attributes_per_split = flags.split_attributes;
  config.min_samples_split = flags.min_split;
  config.hidden_sizes = flags.hidden;
  config.learning_rate = flags.learning_rate;
  config.batch_size = flags.batch;
  config.max_epochs = flags.epochs;
  config.patience = flags.patience;
  config.validation_fraction = flags.validation_fraction;
  validate(config);
  return config;
}

// --- corpus loading ---------------------------------------------------

LabelledMesh load_labelled(const fs::path& path, const std::string& id) {
  ParsedMesh parsed = load_mesh_file(path);
  if (!parsed.labels) {
    throw Error(path.string() + ": mesh carries no labels");
  }
  LabelledMesh labelled;
  labelled.id = id.empty() ? path.stem().string() : id;
  labelled.mesh = std::move(parsed.mesh);
  labelled.labels = std::move(*parsed.labels);
  return labelled;
}

std::vector<LabelledMesh> load_corpus(const std::vector<std::string>& files,
                                      const std::string& manifest_path) {
  std::vector<LabelledMesh> corpus;
  if (!manifest_path.empty()) {
    const Json document =
        Json::parse(read_text_file(manifest_path), nullptr, false);
    if (document.is_discarded() || !document.is_object()) {
      throw ParseError(manifest_path + ": manifest is not well-formed");
    }
    if (!document.contains("format") || !document["format"].is_string() ||
        document["format"].get<std::string>() != kManifestFormatTag) {
      throw ParseError(manifest_path +
                       ": missing or unsupported manifest format tag");
    }
    if (!document.contains("meshes") || !document["meshes"].is_array()) {
      throw ParseError(manifest_path + ": \"meshes\" must be an array");
    }
    const fs::path base = fs::path(manifest_path).parent_path();
    for (const Json& entry : document["meshes"]) {
      if (!entry.is_object() || !entry.contains("file") ||
          !entry["file"].is_string()) {
        throw ParseError(manifest_path +
                         ": each mesh entry needs a \"file\" string");
      }
      const fs::path file = base / entry["file"].get<std::string>();
      std::string id;
      if (entry.contains("id") && entry["id"].is_string()) {
        id = entry["id"].get<std::string>();
      }
      corpus.push_back(load_labelled(file, id));
    }
  }
  for (const std::string& file : files) {
    corpus.push_back(load_labelled(file, ""));
  }
  if (corpus.empty()) {
    throw ConfigError("no input meshes; pass mesh files or --manifest");
  }
  return corpus;
}

// --- evaluation report shared by evaluate/crossval extras -------------

std::string threshold_table(const std::vector<PredictionRecord>& records,
                            const std::vector<double>& thresholds) {
  std::string out;
  out += "th,tp_pct,tn_pct,fp_pct,fn_pct,precision,recall,accuracy,f1\n";
  for (const double threshold : thresholds) {
    const ConfusionMatrix cm = confusion_from_predictions(records, threshold);
    const ClassificationMetrics metrics = classification_metrics(cm);
    const double scale = 100.0 / static_cast<double>(cm.total());
    out += format_fixed(threshold, 2) + "," +
           format_fixed(cm.tp * scale, 2) + "," +
           format_fixed(cm.tn * scale, 2) + "," +
           format_fixed(cm.fp * scale, 2) + "," +
           format_fixed(cm.fn * scale, 2) + "," +
           format_fixed(metrics.precision, 4) + "," +
           format_fixed(metrics.recall, 4) + "," +
           format_fixed(metrics.accuracy, 4) + "," +
           format_fixed(metrics.f1, 4) + "\n";
  }
  return out;
}

std::string evaluation_report(const std::vector<PredictionRecord>& records,
                              ModelKind kind,
                              const std::vector<double>& thresholds) {
  long positives = 0;
  std::map<std::string, bool> meshes;
  for (const PredictionRecord& record : records) {
    positives += record.ground_truth;
    meshes[record.mesh_id] = true;
  }
  std::string out;
  out += "evaluation report\n";
  out += "model: " + std::string(to_string(kind)) + "\n";
  out += "meshes: " + std::to_string(meshes.size()) + "\n";
  out += "elements: " + std::to_string(records.size()) + "\n";
  out += "rework_share: " +
         format_fixed(100.0 * static_cast<double>(positives) /
                          static_cast<double>(records.size()),
                      2) +
         "%\n\n";
  out += threshold_table(records, thresholds);
  return out;
}

// --- subcommand runners -----------------------------------------------

struct OutputFlags {
  std::string out_path;
  bool to_stdout = false;
};

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--out", flags.out_path, "Output file path");
  cmd->add_flag("--stdout", flags.to_stdout,
                "Write the artifact to the data stream");
}

int run_convert(const std::string& input, const OutputFlags& output,
                std::ostream& out, std::ostream& err) {
  const Mesh mesh = import_obj(read_text_file(input));
  emit(serialize_mesh(mesh), output.out_path, output.to_stdout, out);
  err << "converted " << input << ": " << mesh.nodes().size() << " nodes, "
      << mesh.elements().size() << " elements\n";
  return 0;
}

int run_validate(const std::vector<std::string>& inputs, std::ostream& err) {
  long finding_count = 0;
  for (const std::string& input : inputs) {
    try {
      ValidationReport findings;
      ParsedMesh parsed = parse_mesh(read_text_file(input), findings);
      if (parsed.labels) {
        const ValidationReport extra =
            validate_labels(parsed.mesh, *parsed.labels, false);
        findings.insert(findings.end(), extra.begin(), extra.end());
      }
      for (const Finding& finding : findings) {
        err << "finding: " << input << ": " << finding.code << ": "
            << finding.subject_id << ": " << finding.message << "\n";
      }
      finding_count += static_cast<long>(findings.size());
      if (findings.empty()) err << input << ": ok\n";
    } catch (const Error& error) {
      err << "error: " << one_line(error.what()) << "\n";
      ++finding_count;
    }
  }
  return finding_count == 0 ? 0 : 1;
}

int run_metrics(const std::string& input, const OutputFlags& output,
                std::ostream& out) {
  const ParsedMesh parsed = load_mesh_file(input);
  const NeighbourhoodGraph graph = build_graph(parsed.mesh);
  const PropertyTable table = compute_property_table(parsed.mesh, graph);
  emit(property_table_csv(table), output.out_path, output.to_stdout, out);
  return 0;
}

int run_featurize(const std::vector<std::string>& inputs,
                  const std::string& manifest, const FeatureFlags& features,
                  const OutputFlags& output, std::ostream& out,
                  std::ostream& err) {
  const std::vector<LabelledMesh> corpus = load_corpus(inputs, manifest);
  const FeatureConfig config = feature_config_from(features);
  const Dataset dataset = build_dataset(corpus, config);
  emit(feature_csv(dataset), output.out_path, output.to_stdout, out);
  err << "featurized " << corpus.size() << " meshes, " << dataset.size()
      << " elements, dimension " << feature_dimension(config) << "\n";
  return 0;
}

int run_train(const std::vector<std::string>& inputs,
              const std::string& manifest, const FeatureFlags& features,
              const TrainFlags& train, const OutputFlags& output,
              std::ostream& out, std::ostream& err) {
  const std::vector<LabelledMesh> corpus = load_corpus(inputs, manifest);
  const FeatureConfig feature_config = feature_config_from(features);
  const TrainConfig train_config = train_config_from(train);
  const Dataset dataset = build_dataset(corpus, feature_config);

  Model model;
  if (train_config.kind == ModelKind::extra_trees) {
    model = train_extra_trees(dataset, train_config);
  } else {
    model = train_fnn(dataset, train_config);
  }
  emit(save_model(model), output.out_path, output.to_stdout, out);
  err << "trained " << to_string(train_config.kind) << " on "
      << dataset.size() << " elements\n";
  return 0;
}

int run_predict(const std::string& input, const std::string& model_path,
                double threshold, const FeatureFlags& features,
                const OutputFlags& output, std::ostream& out) {
  const ParsedMesh parsed = load_mesh_file(input);
  const Model model = load_model(read_text_file(model_path));
  const FeatureConfig config = feature_config_from(features);
  const MeshFeatures mesh_features =
      mesh_feature_matrix(parsed.mesh, config);
  const Eigen::VectorXd probabilities =
      predict_proba(model, mesh_features.x);

  const std::string mesh_id = stem_of(input);
  std::string csv = "mesh_id,element_id,probability,predicted\n";
  for (std::size_t i = 0; i < mesh_features.element_ids.size(); ++i) {
    const double probability = probabilities[static_cast<Eigen::Index>(i)];
    csv += mesh_id + "," + std::to_string(mesh_features.element_ids[i]) +
           "," + format_double(probability) + "," +
           to_string(apply_threshold(probability, threshold)) + "\n";
  }
  emit(csv, output.out_path, output.to_stdout, out);
  return 0;
}

std::vector<PredictionRecord> predict_records(
    const std::vector<LabelledMesh>& corpus, const Model& model,
    const FeatureConfig& config) {
  const Dataset dataset = build_dataset(corpus, config);
  const Eigen::VectorXd probabilities = predict_proba(model, dataset.x);
  std::vector<PredictionRecord> records(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    records[i].mesh_id = dataset.mesh_ids[i];
    records[i].element_id = dataset.element_ids[i];
    records[i].probability = probabilities[static_cast<Eigen::Index>(i)];
    records[i].ground_truth = dataset.labels[i];
  }
  return records;
}

int run_evaluate(const std::vector<std::string>& inputs,
                 const std::string& manifest, const std::string& model_path,
                 std::vector<double> thresholds, const FeatureFlags& features,
                 const std::string& pr_path, const std::string& dump_path,
                 const OutputFlags& output, std::ostream& out) {
  const std::vector<LabelledMesh> corpus = load_corpus(inputs, manifest);
  const Model model = load_model(read_text_file(model_path));
  const FeatureConfig config = feature_config_from(features);
  const std::vector<PredictionRecord> records =
      predict_records(corpus, model, config);

  if (thresholds.empty()) thresholds = {0.25, 0.5, 0.75};
  emit(evaluation_report(records, kind_of(model), thresholds),
       output.out_path, output.to_stdout, out);
  if (!pr_path.empty()) {
    write_text_file(pr_path,
                    pr_curve_csv(pr_curve(records, uniform_thresholds())));
  }
  if (!dump_path.empty()) {
    write_text_file(dump_path, prediction_dump_csv(records));
  }
  return 0;
}

int run_crossval(const std::vector<std::string>& inputs,
                 const std::string& manifest, int folds,
                 const FeatureFlags& features, const TrainFlags& train,
                 const std::string& pr_path, const std::string& dump_path,
                 const OutputFlags& output, std::ostream& out,
                 std::ostream& err) {
  const std::vector<LabelledMesh> corpus = load_corpus(inputs, manifest);
  const FeatureConfig feature_config = feature_config_from(features);
  const TrainConfig train_config = train_config_from(train);

  err << "crossvalidating " << corpus.size() << " meshes over " << folds
      << " folds\n";
  const CrossvalResult result = run_crossval(
      corpus, feature_config, train_config, folds, train_config.seed);

  emit(crossval_report(result, feature_config, train_config),
       output.out_path, output.to_stdout, out);
  if (!pr_path.empty()) {
    write_text_file(
        pr_path, pr_curve_csv(pr_curve(result.records, uniform_thresholds())));
  }
  if (!dump_path.empty()) {
    write_text_file(dump_path, prediction_dump_csv(result.records));
  }
  return 0;
}

int run_synth(const std::string& out_dir, std::uint64_t seed,
              const OutputFlags& output, std::ostream& out,
              std::ostream& err) {
  fs::create_directories(out_dir);
  const std::vector<LabelledMesh> corpus = make_benchmark(seed);

  Json manifest;
  manifest["format"] = kManifestFormatTag;
  manifest["seed"] = seed;
  manifest["meshes"] = Json::array();
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const LabelledMesh& labelled = corpus[static_cast<std::size_t>(i)];
    const std::string file = labelled.id + ".mesh";
    write_text_file(fs::path(out_dir) / file,
                    serialize_mesh(labelled.mesh, labelled.labels));
    Json entry;
    entry["id"] = labelled.id;
    entry["file"] = file;
    entry["seed"] = benchmark_mesh_seed(seed, i);
    manifest["meshes"].push_back(std::move(entry));
  }
  const std::string manifest_text = manifest.dump(2) + "\n";
  write_text_file(fs::path(out_dir) / "manifest.json", manifest_text);
  if (output.to_stdout) out << manifest_text;

  long elements = 0;
  long rework = 0;
  for (const LabelledMesh& labelled : corpus) {
    elements += static_cast<long>(labelled.mesh.elements().size());
    for (const auto& [id, label] : labelled.labels) {
      rework += label == Label::rework ? 1 : 0;
    }
  }
  err << "wrote " << corpus.size() << " meshes to " << out_dir << " ("
      << elements << " elements, "
      << format_fixed(100.0 * static_cast<double>(rework) /
                          static_cast<double>(elements),
                      2)
      << "% rework)\n";
  return 0;
}

int run_export_viz(const std::string& input, const std::string& model_path,
                   double threshold, const FeatureFlags& features,
                   const OutputFlags& output, std::ostream& out) {
  const ParsedMesh parsed = load_mesh_file(input);
  if (!parsed.labels) {
    throw Error(input + ": mesh carries no labels");
  }
  const ValidationReport label_report =
      validate_labels(parsed.mesh, *parsed.labels, true);
  if (!label_report.empty()) {
    throw Error(input + ": " + label_report.front().message);
  }

  const Model model = load_model(read_text_file(model_path));
  const FeatureConfig config = feature_config_from(features);
  const MeshFeatures mesh_features =
      mesh_feature_matrix(parsed.mesh, config);
  const Eigen::VectorXd probabilities =
      predict_proba(model, mesh_features.x);

  std::map<int, VizCellData> cells;
  for (std::size_t i = 0; i < mesh_features.element_ids.size(); ++i) {
    const int element_id = mesh_features.element_ids[i];
    VizCellData data;
    data.probability = probabilities[static_cast<Eigen::Index>(i)];
    data.predicted =
        apply_threshold(data.probability, threshold) == Label::rework ? 1 : 0;
    data.truth = parsed.labels->at(element_id) == Label::rework ? 1 : 0;
    cells.emplace(element_id, data);
  }
  emit(write_vtk(parsed.mesh, cells, stem_of(input)), output.out_path,
       output.to_stdout, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"mesh quality evaluation toolkit"};
  app.set_config("--config", "", "Read options from a config file");
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand(
      "convert", "Convert an OBJ file to a canonical mesh document");
  std::string convert_input;
  OutputFlags convert_output;
  convert->add_option("input", convert_input, "OBJ file")->required();
  add_output_flags(convert, convert_output);

  // validate
  auto* validate_cmd = app.add_subcommand(
      "validate", "Audit mesh documents and report findings");
  std::vector<std::string> validate_inputs;
  validate_cmd->add_option("inputs", validate_inputs, "Mesh documents")
      ->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Write the per-element property table as CSV");
  std::string metrics_input;
  OutputFlags metrics_output;
  metrics_cmd->add_option("input", metrics_input, "Mesh document")
      ->required();
  add_output_flags(metrics_cmd, metrics_output);

  // featurize
  auto* featurize = app.add_subcommand(
      "featurize", "Write neighbourhood feature vectors as CSV");
  std::vector<std::string> featurize_inputs;
  std::string featurize_manifest;
  FeatureFlags featurize_features;
  OutputFlags featurize_output;
  featurize->add_option("inputs", featurize_inputs, "Labelled mesh documents");
  featurize->add_option("--manifest", featurize_manifest,
                        "Corpus manifest file");
  add_feature_flags(featurize, featurize_features);
  add_output_flags(featurize, featurize_output);

  // train
  auto* train_cmd =
      app.add_subcommand("train", "Train a model on labelled meshes");
  std::vector<std::string> train_inputs;
  std::string train_manifest;
  FeatureFlags train_features;
  TrainFlags train_flags;
  OutputFlags train_output;
  train_cmd->add_option("inputs", train_inputs, "Labelled mesh documents");
  train_cmd->add_option("--manifest", train_manifest, "Corpus manifest file");
  add_feature_flags(train_cmd, train_features);
  add_train_flags(train_cmd, train_flags);
  add_output_flags(train_cmd, train_output);

  // predict
  auto* predict = app.add_subcommand(
      "predict", "Predict rework probabilities for one mesh");
  std::string predict_input;
  std::string predict_model;
  double predict_threshold = 0.5;
  FeatureFlags predict_features;
  OutputFlags predict_output;
  predict->add_option("input", predict_input, "Mesh document")->required();
  predict->add_option("--model-file", predict_model, "Trained model file")
      ->required();
  predict->add_option("--threshold", predict_threshold,
                      "Rework probability cut (inclusive)")
      ->capture_default_str();
  add_feature_flags(predict, predict_features);
  add_output_flags(predict, predict_output);

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score a trained model against labelled meshes");
  std::vector<std::string> evaluate_inputs;
  std::string evaluate_manifest;
  std::string evaluate_model;
  std::vector<double> evaluate_thresholds;
  FeatureFlags evaluate_features;
  std::string evaluate_pr;
  std::string evaluate_dump;
  OutputFlags evaluate_output;
  evaluate->add_option("inputs", evaluate_inputs, "Labelled mesh documents");
  evaluate->add_option("--manifest", evaluate_manifest,
                       "Corpus manifest file");
  evaluate->add_option("--model-file", evaluate_model, "Trained model file")
      ->required();
  evaluate->add_option("--thresholds", evaluate_thresholds,
                       "Report thresholds")
      ->delimiter(',');
  add_feature_flags(evaluate, evaluate_features);
  evaluate->add_option("--pr-curve", evaluate_pr,
                       "Also write a precision/recall curve CSV here");
  evaluate->add_option("--dump-predictions", evaluate_dump,
                       "Also write per-element predictions CSV here");
  add_output_flags(evaluate, evaluate_output);

  // crossval
  auto* crossval = app.add_subcommand(
      "crossval", "Mesh-grouped crossvalidation with a fresh model per fold");
  std::vector<std::string> crossval_inputs;
  std::string crossval_manifest;
  int crossval_folds = 10;
  FeatureFlags crossval_features;
  TrainFlags crossval_flags;
  std::string crossval_pr;
  std::string crossval_dump;
  OutputFlags crossval_output;
  crossval->add_option("inputs", crossval_inputs, "Labelled mesh documents");
  crossval->add_option("--manifest", crossval_manifest,
                       "Corpus manifest file");
  crossval->add_option("--folds", crossval_folds, "Fold count")
      ->capture_default_str();
  add_feature_flags(crossval, crossval_features);
  add_train_flags(crossval, crossval_flags);
  crossval->add_option("--pr-curve", crossval_pr,
                       "Also write a precision/recall curve CSV here");
  crossval->add_option("--dump-predictions", crossval_dump,
                       "Also write per-element predictions CSV here");
  add_output_flags(crossval, crossval_output);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate the synthetic labelled benchmark corpus");
  std::string synth_dir;
  std::uint64_t synth_seed = 0;
  OutputFlags synth_output;
  synth->add_option("--out-dir", synth_dir, "Directory for meshes + manifest")
      ->required();
  synth->add_option("--seed", synth_seed, "Corpus seed")
      ->capture_default_str();
  synth->add_flag("--stdout", synth_output.to_stdout,
                  "Also write the manifest to the data stream");

  // export-viz
  auto* export_viz = app.add_subcommand(
      "export-viz", "Write predictions as a legacy-ASCII VTK grid");
  std::string viz_input;
  std::string viz_model;
  double viz_threshold = 0.5;
  FeatureFlags viz_features;
  OutputFlags viz_output;
  export_viz->add_option("input", viz_input, "Labelled mesh document")
      ->required();
  export_viz->add_option("--model-file", viz_model, "Trained model file")
      ->required();
  export_viz->add_option("--threshold", viz_threshold,
                         "Rework probability cut (inclusive)")
      ->capture_default_str();
  add_feature_flags(export_viz, viz_features);
  add_output_flags(export_viz, viz_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, err, err);  // help lands on the diagnostic stream
    }
    err << "error: cli: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (*convert) {
      return run_convert(convert_input, convert_output, out, err);
    }
    if (*validate_cmd) return run_validate(validate_inputs, err);
    if (*metrics_cmd) return run_metrics(metrics_input, metrics_output, out);
    if (*featurize) {
      return run_featurize(featurize_inputs, featurize_manifest,
                           featurize_features, featurize_output, out, err);
    }
    if (*train_cmd) {
      return run_train(train_inputs, train_manifest, train_features,
                       train_flags, train_output, out, err);
    }
    if (*predict) {
      return run_predict(predict_input, predict_model, predict_threshold,
                         predict_features, predict_output, out);
    }
    if (*evaluate) {
      return run_evaluate(evaluate_inputs, evaluate_manifest, evaluate_model,
                          evaluate_thresholds, evaluate_features, evaluate_pr,
                          evaluate_dump, evaluate_output, out);
    }
    if (*crossval) {
      return run_crossval(crossval_inputs, crossval_manifest, crossval_folds,
                          crossval_features, crossval_flags, crossval_pr,
                          crossval_dump, crossval_output, out, err);
    }
    if (*synth) return run_synth(synth_dir, synth_seed, synth_output, out, err);
    if (*export_viz) {
      return run_export_viz(viz_input, viz_model, viz_threshold, viz_features,
                            viz_output, out);
    }
    err << "error: cli: no subcommand selected\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace meshgrade
