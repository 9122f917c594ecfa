// Copyright 2026 The kovec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kovec/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "kovec/checkpoint.hpp"
#include "kovec/dataset.hpp"
#include "kovec/embeddings.hpp"
#include "kovec/errors.hpp"
#include "kovec/g2p.hpp"
#include "kovec/hangul.hpp"
#include "kovec/pretrain.hpp"
#include "kovec/unicode.hpp"

namespace kovec::cli {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string format_logits(const Mat<float>& row_matrix, Eigen::Index row) {
  std::ostringstream out;
  out.precision(6);
  for (Eigen::Index c = 0; c < row_matrix.cols(); ++c) {
    if (c) out << ',';
    out << row_matrix(row, c);
  }
  return out.str();
}

// Fills the defaulted keys so the frozen config is the whole effective
// configuration, not only the explicitly given part.
RunConfig with_defaults(const RunConfig& config,
                        const std::vector<std::pair<std::string, std::string>>&
                            defaults) {
  RunConfig out = config;
  for (const auto& [key, value] : defaults)
    if (!out.has(key)) out.set(key, value);
  return out;
}

Score score_from(const std::string& name) {
  if (name == "cosine") return Score::kCosine;
  if (name == "dot") return Score::kDot;
  throw ConfigError("score must be cosine or dot, got '" + name + "'");
}

EncoderConfig encoder_config_from(const RunConfig& config, int default_dim) {
  EncoderConfig out;
  out.num_layers = config.get_int("num_layers", out.num_layers);
  out.model_dim = config.get_int("model_dim", default_dim);
  out.num_heads = config.get_int("num_heads", out.num_heads);
  out.ffn_dim = config.get_int("ffn_dim", out.ffn_dim);
  out.max_seq_len = config.get_int("max_seq_len", out.max_seq_len);
  out.dropout = config.get_float("dropout", out.dropout);
  out.validate();
  return out;
}

struct LoadedEncoder {
  TwinEncoder encoder;
  RuleTable rules;
  MorphemeVocab vocab;
};

LoadedEncoder load_encoder_with_data(const RunConfig& config) {
  std::string dir = config.require("encoder_dir");
  EncoderData data = encoder_bundle_data(dir);
  std::string rules_path = config.get("rules", data.rules_path);
  std::string inventory_path = config.get("inventory", data.inventory_path);
  std::string vocab_path =
      config.get("morpheme_vocab", data.morpheme_vocab_path);
  return LoadedEncoder{load_encoder_bundle(dir),
                       RuleTable::load(rules_path, inventory_path),
                       MorphemeVocab::load(vocab_path)};
}

void write_metrics_csv(const std::string& path,
                       const std::vector<std::tuple<std::string, std::string,
                                                    double>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write metrics: " + path);
  out << "split,metric,value\n";
  out.precision(10);
  for (const auto& [split, metric, value] : rows)
    out << split << ',' << metric << ',' << value << '\n';
}

std::string modalities_string(const std::array<bool, 3>& mask) {
  std::string out;
  out += mask[0] ? 'p' : '-';
  out += mask[1] ? 'w' : '-';
  out += mask[2] ? 'm' : '-';
  return out;
}

}  // namespace

int cmd_decompose(const std::vector<std::string>& words, std::ostream& out) {
  for (const std::string& word : words) {
    JamoSequence seq = word_to_jamo(word);
    std::vector<std::string> symbols;
    symbols.reserve(seq.jamos.size());
    for (const Jamo& j : seq.jamos) symbols.push_back(encode_utf8(j.symbol));
    out << word << '\t' << join(symbols, ' ') << '\n';
  }
  return 0;
}

int cmd_g2p(const RunConfig& config, const std::vector<std::string>& words,
            std::ostream& out) {
  RuleTable rules =
      RuleTable::load(config.get("rules", default_rules_path()),
                      config.get("inventory", default_inventory_path()));
  for (const std::string& word : words) {
    PhonemeSequence seq = rules.to_ipa(word);
    if (seq.skipped_non_hangul)
      std::cerr << "kovec: warning: non-Hangul characters in '" << word
                << "' contribute no phonemes\n";
    out << word << '\t' << join(seq.phonemes, ' ') << '\n';
  }
  return 0;
}

int cmd_pretrain(const RunConfig& raw, std::ostream& out) {
  EmbeddingTable table = load_embeddings(raw.require("embeddings"));
  RunConfig config = with_defaults(
      raw, {{"rules", default_rules_path()},
            {"inventory", default_inventory_path()},
            {"morpheme_vocab", default_morpheme_vocab_path()},
            {"seed", "42"},
            {"epochs", "10"},
            {"batch_size", "32"},
            {"lr", "0.001"},
            {"weight_decay", "0"},
            {"temperature", "0.07"},
            {"score", "cosine"},
            {"lambda", "0.1"},
            {"num_layers", "2"},
            {"model_dim", std::to_string(table.dim)},
            {"num_heads", "6"},
            {"ffn_dim", "600"},
            {"max_seq_len", "64"},
            {"dropout", "0.1"}});

  std::string run_dir = config.require("run_dir");
  fs::create_directories(run_dir);
  config.freeze_to(run_dir + "/config.txt");

  RuleTable rules = RuleTable::load(config.require("rules"),
                                    config.require("inventory"));
  MorphemeVocab vocab = MorphemeVocab::load(config.require("morpheme_vocab"));

  EncoderConfig enc_config = encoder_config_from(config, table.dim);
  SymbolTable symbols = build_corpus_symbol_table(table.words, rules, vocab);
  TwinEncoder encoder(enc_config, std::move(symbols),
                      config.get_float("lambda", 0.1f),
                      config.get_u64("seed", 42));

  PretrainConfig pre;
  pre.temperature = config.get_float("temperature", 0.07f);
  pre.batch_size = config.get_int("batch_size", 32);
  pre.epochs = config.get_int("epochs", 10);
  pre.lr = config.get_float("lr", 1e-3f);
  pre.weight_decay = config.get_float("weight_decay", 0.f);
  pre.seed = config.get_u64("seed", 42);
  pre.score = score_from(config.require("score"));

  PretrainLog log = pretrain(encoder, table, rules, vocab, pre);

  std::ofstream loss_log(run_dir + "/loss_log.tsv");
  if (!loss_log) throw DataError("cannot write loss log in " + run_dir);
  loss_log.precision(12);
  out.precision(12);
  for (std::size_t epoch = 0; epoch < log.epoch_mean_loss.size(); ++epoch) {
    loss_log << (epoch + 1) << '\t' << log.epoch_mean_loss[epoch] << '\n';
    out << (epoch + 1) << '\t' << log.epoch_mean_loss[epoch] << '\n';
  }

  save_encoder_bundle(run_dir + "/encoder", encoder, config.require("rules"),
                      config.require("inventory"),
                      config.require("morpheme_vocab"));
  return 0;
}

int cmd_embed(const RunConfig& config, const std::vector<std::string>& words,
              std::ostream& out) {
  if (words.empty()) throw EmptyInput("no words to embed");
  LoadedEncoder loaded = load_encoder_with_data(config);
  std::vector<Representation> reps =
      embed_oov(words, loaded.encoder, loaded.rules, loaded.vocab);
  out << words.size() << ' ' << loaded.encoder.config().model_dim << '\n';
  out.precision(9);
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << words[i];
    for (Eigen::Index c = 0; c < reps[i].vector.size(); ++c)
      out << ' ' << reps[i].vector(c);
    out << '\n';
  }
  return 0;
}

FinetuneConfig finetune_config_from(const RunConfig& config,
                                    bool tagging_default) {
  FinetuneConfig out;
  std::string head = config.get("head", tagging_default ? "bilstm" : "cnn");
  if (head == "cnn")
    out.head = HeadKind::kCnn;
  else if (head == "bilstm")
    out.head = HeadKind::kBiLstm;
  else
    throw ConfigError("head must be cnn or bilstm, got '" + head + "'");

  auto parse_triplet = [&](const std::string& key, std::array<float, 3>& dst) {
    if (!config.has(key)) return;
    std::vector<std::string> parts = split_csv(config.require(key));
    if (parts.size() != 3)
      throw ConfigError(key + " wants three comma-separated numbers");
    for (int i = 0; i < 3; ++i) {
      try {
        dst[static_cast<std::size_t>(i)] = std::stof(parts[i]);
      } catch (const std::exception&) {
        throw ConfigError(key + " wants numbers, got '" + parts[i] + "'");
      }
    }
  };
  parse_triplet("alphas", out.alphas);
  parse_triplet("betas", out.betas);

  if (config.has("modalities")) {
    std::string m = config.require("modalities");
    out.modality_mask = {m.find('p') != std::string::npos,
                         m.find('w') != std::string::npos,
                         m.find('m') != std::string::npos};
  }
  out.epochs = config.get_int("epochs", out.epochs);
  out.lr = config.get_float("lr", out.lr);
  out.batch_size = config.get_int("batch_size", out.batch_size);
  out.weight_decay = config.get_float("weight_decay", out.weight_decay);
  out.seed = config.get_u64("seed", out.seed);
  out.validate();
  return out;
}

namespace {

struct FinetuneData {
  Dataset train, dev, test;
  bool has_test = false;
  PreparedDataset ptrain, pdev, ptest, ptest_oov;
  std::vector<std::string> labels;
  bool tagging = false;
};

FinetuneData load_finetune_data(const RunConfig& config,
                                LoadedEncoder& loaded) {
  FinetuneData data;
  std::string task = config.get("task", "classify");
  if (task != "classify" && task != "tag")
    throw ConfigError("task must be classify or tag, got '" + task + "'");
  data.tagging = task == "tag";
  auto load = [&](const std::string& path) {
    return data.tagging ? load_tagging_file(path, &data.labels)
                        : load_classification_tsv(path, &data.labels);
  };
  data.train = load(config.require("train"));
  if (data.train.examples.empty())
    throw EmptyDataset("training set is empty: " + config.require("train"));
  data.dev = config.has("dev") ? load(config.require("dev")) : data.train;

  const EmbeddingTable* external = nullptr;
  EmbeddingTable external_storage;
  if (config.has("external_embeddings")) {
    external_storage = load_embeddings(config.require("external_embeddings"));
    external = &external_storage;
  }
  data.ptrain = prepare_dataset(data.train, loaded.encoder, loaded.rules,
                                loaded.vocab, external);
  data.pdev = prepare_dataset(data.dev, loaded.encoder, loaded.rules,
                              loaded.vocab, external);
  if (config.has("test")) {
    data.has_test = true;
    data.test = load(config.require("test"));
    data.ptest = prepare_dataset(data.test, loaded.encoder, loaded.rules,
                                 loaded.vocab, external);
    if (config.has("reference_vocab")) {
      Dataset oov = oov_subset(
          data.test, load_vocab_file(config.require("reference_vocab")));
      data.ptest_oov = prepare_dataset(oov, loaded.encoder, loaded.rules,
                                       loaded.vocab, external);
    }
  }
  return data;
}

}  // namespace

int cmd_finetune(const RunConfig& raw, std::ostream& out) {
  RunConfig config = with_defaults(raw, {{"task", "classify"},
                                         {"seed", "42"},
                                         {"epochs", "10"},
                                         {"batch_size", "32"},
                                         {"lr", "0.001"},
                                         {"weight_decay", "0"},
                                         {"alphas", "1,1,1"},
                                         {"betas", "0.333333,0.333333,0.333333"},
                                         {"modalities", "pwm"}});
  if (!config.has("head"))
    config.set("head", config.get("task", "classify") == "tag" ? "bilstm"
                                                                : "cnn");
  std::string run_dir = config.require("run_dir");
  fs::create_directories(run_dir);
  config.freeze_to(run_dir + "/config.txt");

  LoadedEncoder loaded = load_encoder_with_data(config);
  std::uint64_t encoder_checksum_before =
      params_checksum(loaded.encoder.params());
  FinetuneData data = load_finetune_data(config, loaded);
  FinetuneConfig fin = finetune_config_from(config, data.tagging);
  if (data.tagging && fin.head == HeadKind::kCnn)
    throw ConfigError("the cnn head cannot tag sequences; use head = bilstm");

  Head head(fin.head, loaded.encoder.config().model_dim,
            static_cast<int>(data.labels.size()), fin.seed,
            config.get_int("cnn_maps", Head::kCnnMaps),
            config.get_int("lstm_hidden", Head::kLstmHidden));
  HeadTrainResult result = train_head(head, data.ptrain, data.pdev, fin);

  if (params_checksum(loaded.encoder.params()) != encoder_checksum_before)
    throw NumericError("encoder parameters changed during fine-tuning");

  std::ofstream train_log(run_dir + "/train_log.tsv");
  train_log.precision(12);
  for (std::size_t epoch = 0; epoch < result.epoch_train_loss.size(); ++epoch) {
    train_log << (epoch + 1) << '\t' << result.epoch_train_loss[epoch] << '\t'
              << result.epoch_dev_accuracy[epoch] << '\n';
  }

  std::vector<std::tuple<std::string, std::string, double>> metrics;
  Metrics dev_metrics = evaluate(data.pdev, head, fin);
  metrics.emplace_back("dev", "accuracy", dev_metrics.accuracy);
  metrics.emplace_back("dev", "macro_f1", dev_metrics.macro_f1);
  out.precision(10);
  out << "dev\taccuracy\t" << dev_metrics.accuracy << '\n';
  out << "dev\tmacro_f1\t" << dev_metrics.macro_f1 << '\n';
  if (data.has_test) {
    Metrics test_metrics = evaluate(data.ptest, head, fin);
    metrics.emplace_back("test", "accuracy", test_metrics.accuracy);
    metrics.emplace_back("test", "macro_f1", test_metrics.macro_f1);
    out << "test\taccuracy\t" << test_metrics.accuracy << '\n';
    out << "test\tmacro_f1\t" << test_metrics.macro_f1 << '\n';
    if (!data.ptest_oov.empty()) {
      Metrics oov_metrics = evaluate(data.ptest_oov, head, fin);
      metrics.emplace_back("test_oov", "accuracy", oov_metrics.accuracy);
      metrics.emplace_back("test_oov", "macro_f1", oov_metrics.macro_f1);
      out << "test_oov\taccuracy\t" << oov_metrics.accuracy << '\n';
      out << "test_oov\tmacro_f1\t" << oov_metrics.macro_f1 << '\n';
    }
  }
  write_metrics_csv(run_dir + "/metrics.csv", metrics);
  save_head_bundle(run_dir + "/head", head, data.labels, fin, data.tagging);
  return 0;
}

int cmd_predict(const RunConfig& config, std::ostream& out) {
  LoadedEncoder loaded = load_encoder_with_data(config);
  HeadBundle bundle = load_head_bundle(config.require("head_dir"));
  std::string input_path = config.require("input");
  std::ifstream in(input_path);
  if (!in) throw ParseError("cannot open input: " + input_path);

  auto emit = [&](const std::vector<std::string>& words) {
    ModalInputs inputs = precompute_inputs(words, loaded.encoder, loaded.rules,
                                           loaded.vocab);
    PredictionScores scores =
        ensemble_predict(bundle.head, inputs, bundle.config);
    if (bundle.tagging) {
      for (std::size_t i = 0; i < words.size(); ++i) {
        out << words[i] << '\t'
            << bundle.labels.at(
                   static_cast<std::size_t>(scores.argmax[i]));
        out << "\tz=" << format_logits(scores.ensemble,
                                        static_cast<Eigen::Index>(i));
        out << '\n';
      }
      out << '\n';
    } else {
      out << bundle.labels.at(static_cast<std::size_t>(scores.argmax[0]));
      if (scores.phoneme) out << "\tp=" << format_logits(*scores.phoneme, 0);
      if (scores.word) out << "\tw=" << format_logits(*scores.word, 0);
      if (scores.mixed) out << "\tm=" << format_logits(*scores.mixed, 0);
      out << "\tz=" << format_logits(scores.ensemble, 0) << '\n';
    }
  };

  std::string line;
  if (bundle.tagging) {
    std::vector<std::string> words;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        if (!words.empty()) emit(words);
        words.clear();
        continue;
      }
      // Accept either bare tokens or token<TAB>... lines.
      std::size_t tab = line.find('\t');
      words.push_back(tab == std::string::npos ? line : line.substr(0, tab));
    }
    if (!words.empty()) emit(words);
  } else {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::vector<std::string> words;
      std::string w;
      while (fields >> w) words.push_back(w);
      if (!words.empty()) emit(words);
    }
  }
  return 0;
}

std::vector<std::array<bool, 3>> ablation_grid() {
  return {{true, false, false}, {false, true, false}, {false, false, true},
          {true, true, false},  {true, false, true},  {false, true, true},
          {true, true, true}};
}

int cmd_ablate(const RunConfig& raw, std::ostream& out) {
  RunConfig config = with_defaults(raw, {{"task", "classify"},
                                         {"seed", "42"},
                                         {"epochs", "10"},
                                         {"batch_size", "32"},
                                         {"lr", "0.001"},
                                         {"weight_decay", "0"},
                                         {"alphas", "1,1,1"},
                                         {"betas", "0.333333,0.333333,0.333333"}});
  if (!config.has("head"))
    config.set("head", config.get("task", "classify") == "tag" ? "bilstm"
                                                                : "cnn");
  std::string run_dir = config.require("run_dir");
  fs::create_directories(run_dir);
  config.freeze_to(run_dir + "/config.txt");

  LoadedEncoder loaded = load_encoder_with_data(config);
  FinetuneData data = load_finetune_data(config, loaded);
  if (!data.has_test)
    throw ConfigError("ablate needs a test set (key: test)");
  if (data.ptest_oov.empty())
    throw ConfigError(
        "ablate needs a reference_vocab producing a nonempty OOV subset");

  FinetuneConfig base = finetune_config_from(config, data.tagging);
  std::vector<std::tuple<std::string, std::string, double>> metrics;
  out << "row\tmodalities\toov_accuracy\toov_macro_f1\torig_accuracy\torig_"
         "macro_f1\n";
  out.precision(10);
  int row = 0;
  for (const std::array<bool, 3>& mask : ablation_grid()) {
    ++row;
    FinetuneConfig fin = base;
    fin.modality_mask = mask;
    Head head(fin.head, loaded.encoder.config().model_dim,
              static_cast<int>(data.labels.size()), fin.seed,
              config.get_int("cnn_maps", Head::kCnnMaps),
              config.get_int("lstm_hidden", Head::kLstmHidden));
    train_head(head, data.ptrain, data.pdev, fin);
    Metrics oov = evaluate(data.ptest_oov, head, fin);
    Metrics orig = evaluate(data.ptest, head, fin);
    std::string tag = "row" + std::to_string(row);
    metrics.emplace_back(tag + "_oov", "accuracy", oov.accuracy);
    metrics.emplace_back(tag + "_oov", "macro_f1", oov.macro_f1);
    metrics.emplace_back(tag + "_orig", "accuracy", orig.accuracy);
    metrics.emplace_back(tag + "_orig", "macro_f1", orig.macro_f1);
    out << row << '\t' << modalities_string(mask) << '\t' << oov.accuracy
        << '\t' << oov.macro_f1 << '\t' << orig.accuracy << '\t'
        << orig.macro_f1 << '\n';
  }
  write_metrics_csv(run_dir + "/metrics.csv", metrics);
  return 0;
}

void save_encoder_bundle(const std::string& dir, TwinEncoder& encoder,
                         const std::string& rules_path,
                         const std::string& inventory_path,
                         const std::string& morpheme_vocab_path) {
  fs::create_directories(dir);
  save_checkpoint(dir + "/params.bin", encoder.params());
  encoder.symbols().save(dir + "/symbols.tsv");
  const EncoderConfig& c = encoder.config();
  std::map<std::string, std::string> kv = {
      {"num_layers", std::to_string(c.num_layers)},
      {"model_dim", std::to_string(c.model_dim)},
      {"num_heads", std::to_string(c.num_heads)},
      {"ffn_dim", std::to_string(c.ffn_dim)},
      {"max_seq_len", std::to_string(c.max_seq_len)},
      {"dropout", std::to_string(c.dropout)},
      {"lambda", std::to_string(encoder.mixup_lambda())},
      {"rules", rules_path},
      {"inventory", inventory_path},
      {"morpheme_vocab", morpheme_vocab_path}};
  save_kv(dir + "/encoder.txt", kv);
}

TwinEncoder load_encoder_bundle(const std::string& dir) {
  std::map<std::string, std::string> kv = load_kv(dir + "/encoder.txt");
  auto want = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ParseError(dir + "/encoder.txt is missing key " + key);
    return it->second;
  };
  EncoderConfig config;
  config.num_layers = std::stoi(want("num_layers"));
  config.model_dim = std::stoi(want("model_dim"));
  config.num_heads = std::stoi(want("num_heads"));
  config.ffn_dim = std::stoi(want("ffn_dim"));
  config.max_seq_len = std::stoi(want("max_seq_len"));
  config.dropout = std::stof(want("dropout"));
  SymbolTable symbols = SymbolTable::load(dir + "/symbols.tsv");
  TwinEncoder encoder(config, std::move(symbols), std::stof(want("lambda")),
                      /*seed=*/0);
  load_checkpoint(dir + "/params.bin", encoder.params());
  return encoder;
}

EncoderData encoder_bundle_data(const std::string& dir) {
  std::map<std::string, std::string> kv = load_kv(dir + "/encoder.txt");
  EncoderData data;
  data.rules_path = kv.count("rules") ? kv["rules"] : default_rules_path();
  data.inventory_path =
      kv.count("inventory") ? kv["inventory"] : default_inventory_path();
  data.morpheme_vocab_path = kv.count("morpheme_vocab")
                                 ? kv["morpheme_vocab"]
                                 : default_morpheme_vocab_path();
  return data;
}

void save_head_bundle(const std::string& dir, Head& head,
                      const std::vector<std::string>& labels,
                      const FinetuneConfig& config, bool tagging) {
  fs::create_directories(dir);
  save_checkpoint(dir + "/params.bin", head.params());
  std::ofstream label_file(dir + "/labels.txt");
  if (!label_file) throw DataError("cannot write labels in " + dir);
  for (const std::string& label : labels) label_file << label << '\n';
  std::ostringstream alphas, betas;
  alphas << config.alphas[0] << ',' << config.alphas[1] << ','
         << config.alphas[2];
  betas << config.betas[0] << ',' << config.betas[1] << ',' << config.betas[2];
  std::string modalities;
  if (config.modality_mask[0]) modalities += 'p';
  if (config.modality_mask[1]) modalities += 'w';
  if (config.modality_mask[2]) modalities += 'm';
  std::map<std::string, std::string> kv = {
      {"kind", head.kind() == HeadKind::kCnn ? "cnn" : "bilstm"},
      {"input_dim", std::to_string(head.input_dim())},
      {"num_classes", std::to_string(head.num_classes())},
      {"cnn_maps", std::to_string(head.cnn_maps())},
      {"lstm_hidden", std::to_string(head.lstm_hidden())},
      {"alphas", alphas.str()},
      {"betas", betas.str()},
      {"modalities", modalities},
      {"tagging", tagging ? "true" : "false"}};
  save_kv(dir + "/head.txt", kv);
}

HeadBundle load_head_bundle(const std::string& dir) {
  std::map<std::string, std::string> kv = load_kv(dir + "/head.txt");
  auto want = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ParseError(dir + "/head.txt is missing key " + key);
    return it->second;
  };
  RunConfig as_config;
  for (const auto& [key, value] : kv) as_config.set(key, value);
  bool tagging = want("tagging") == "true";
  FinetuneConfig fin = finetune_config_from(as_config, tagging);

  HeadKind kind = want("kind") == "cnn" ? HeadKind::kCnn : HeadKind::kBiLstm;
  HeadBundle bundle{Head(kind, std::stoi(want("input_dim")),
                         std::stoi(want("num_classes")), /*seed=*/0,
                         std::stoi(want("cnn_maps")),
                         std::stoi(want("lstm_hidden"))),
                    {},
                    fin,
                    tagging};
  load_checkpoint(dir + "/params.bin", bundle.head.params());
  std::ifstream label_file(dir + "/labels.txt");
  if (!label_file) throw ParseError("cannot open labels in " + dir);
  std::string line;
  while (std::getline(label_file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) bundle.labels.push_back(line);
  }
  if (static_cast<int>(bundle.labels.size()) != bundle.head.num_classes())
    throw ParseError(dir + ": label count does not match the head");
  return bundle;
}

}  // namespace kovec::cli
