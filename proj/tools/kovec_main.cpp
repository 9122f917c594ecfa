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

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "kovec/commands.hpp"
#include "kovec/errors.hpp"
#include "kovec/runconfig.hpp"

namespace {

// Builds the layered configuration: defaults live in the commands, the
// config file comes next, then --set overrides and dedicated flags.
struct ConfigArgs {
  std::string config_file;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "key = value config file");
    cmd->add_option("--set", overrides,
                    "override a config key (key=value, repeatable)");
  }

  kovec::RunConfig build() const {
    kovec::RunConfig config;
    if (!config_file.empty()) config.load_file(config_file);
    for (const std::string& kv : overrides) config.set_override(kv);
    return config;
  }
};

void bind_path_flag(CLI::App* cmd, std::vector<std::pair<std::string,
                    std::string>>* flag_values, const std::string& flag,
                    const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag,
      [flag_values, key](const std::string& value) {
        flag_values->emplace_back(key, value);
      },
      help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Korean phoneme-aware OOV word representations"};
  app.require_subcommand(1);

  // decompose
  std::vector<std::string> decompose_words;
  CLI::App* decompose = app.add_subcommand(
      "decompose", "print the jamo sequence of each word");
  decompose->add_option("words", decompose_words, "Hangul words")->required();

  // g2p
  std::vector<std::string> g2p_words;
  ConfigArgs g2p_config;
  CLI::App* g2p =
      app.add_subcommand("g2p", "print the IPA sequence of each word");
  g2p->add_option("words", g2p_words, "Hangul words")->required();
  g2p_config.attach(g2p);
  std::vector<std::pair<std::string, std::string>> g2p_flags;
  bind_path_flag(g2p, &g2p_flags, "--rules", "rules", "rule table file");
  bind_path_flag(g2p, &g2p_flags, "--inventory", "inventory",
                 "IPA inventory file");

  // pretrain
  ConfigArgs pretrain_config;
  std::vector<std::pair<std::string, std::string>> pretrain_flags;
  CLI::App* pretrain = app.add_subcommand(
      "pretrain", "train the twin encoders against target embeddings");
  pretrain_config.attach(pretrain);
  bind_path_flag(pretrain, &pretrain_flags, "--embeddings", "embeddings",
                 "word2vec text file of target embeddings");
  bind_path_flag(pretrain, &pretrain_flags, "--run-dir", "run_dir",
                 "output run directory");
  bind_path_flag(pretrain, &pretrain_flags, "--seed", "seed", "random seed");

  // embed
  ConfigArgs embed_config;
  std::vector<std::pair<std::string, std::string>> embed_flags;
  std::vector<std::string> embed_words;
  CLI::App* embed = app.add_subcommand(
      "embed", "print representations of words (word2vec text format)");
  embed_config.attach(embed);
  bind_path_flag(embed, &embed_flags, "--encoder-dir", "encoder_dir",
                 "encoder checkpoint directory");
  embed->add_option("words", embed_words, "words to embed")->required();

  // finetune
  ConfigArgs finetune_config;
  std::vector<std::pair<std::string, std::string>> finetune_flags;
  CLI::App* finetune = app.add_subcommand(
      "finetune", "train a downstream head on frozen representations");
  finetune_config.attach(finetune);
  bind_path_flag(finetune, &finetune_flags, "--encoder-dir", "encoder_dir",
                 "encoder checkpoint directory");
  bind_path_flag(finetune, &finetune_flags, "--train", "train",
                 "training set");
  bind_path_flag(finetune, &finetune_flags, "--dev", "dev", "dev set");
  bind_path_flag(finetune, &finetune_flags, "--test", "test", "test set");
  bind_path_flag(finetune, &finetune_flags, "--run-dir", "run_dir",
                 "output run directory");
  bind_path_flag(finetune, &finetune_flags, "--seed", "seed", "random seed");

  // predict
  ConfigArgs predict_config;
  std::vector<std::pair<std::string, std::string>> predict_flags;
  CLI::App* predict = app.add_subcommand(
      "predict", "label inputs with a trained head and print logits");
  predict_config.attach(predict);
  bind_path_flag(predict, &predict_flags, "--encoder-dir", "encoder_dir",
                 "encoder checkpoint directory");
  bind_path_flag(predict, &predict_flags, "--head-dir", "head_dir",
                 "head checkpoint directory");
  bind_path_flag(predict, &predict_flags, "--input", "input", "input file");

  // ablate
  ConfigArgs ablate_config;
  std::vector<std::pair<std::string, std::string>> ablate_flags;
  CLI::App* ablate = app.add_subcommand(
      "ablate", "run the seven-row modality ablation grid");
  ablate_config.attach(ablate);
  bind_path_flag(ablate, &ablate_flags, "--encoder-dir", "encoder_dir",
                 "encoder checkpoint directory");
  bind_path_flag(ablate, &ablate_flags, "--run-dir", "run_dir",
                 "output run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "kovec: " << e.what() << "\n";
    return 1;
  }

  auto merged = [](const ConfigArgs& args,
                   const std::vector<std::pair<std::string, std::string>>&
                       flags) {
    kovec::RunConfig config = args.build();
    for (const auto& [key, value] : flags) config.set(key, value);
    return config;
  };

  try {
    if (decompose->parsed()) return kovec::cli::cmd_decompose(decompose_words);
    if (g2p->parsed())
      return kovec::cli::cmd_g2p(merged(g2p_config, g2p_flags), g2p_words);
    if (pretrain->parsed())
      return kovec::cli::cmd_pretrain(merged(pretrain_config, pretrain_flags));
    if (embed->parsed())
      return kovec::cli::cmd_embed(merged(embed_config, embed_flags),
                                   embed_words);
    if (finetune->parsed())
      return kovec::cli::cmd_finetune(merged(finetune_config, finetune_flags));
    if (predict->parsed())
      return kovec::cli::cmd_predict(merged(predict_config, predict_flags));
    if (ablate->parsed())
      return kovec::cli::cmd_ablate(merged(ablate_config, ablate_flags));
  } catch (const kovec::DataError& e) {
    std::cerr << "kovec: " << e.what() << "\n";
    return 2;
  } catch (const kovec::NumericError& e) {
    std::cerr << "kovec: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
