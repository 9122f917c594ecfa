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
//
// Command implementations behind the CLI. Each command validates its
// configuration, freezes the effective settings into the run directory and
// emits line-oriented UTF-8 TSV on the given stream.

#ifndef KOVEC_COMMANDS_HPP_
#define KOVEC_COMMANDS_HPP_

#include <iostream>
#include <string>
#include <vector>

#include "kovec/downstream.hpp"
#include "kovec/encoder.hpp"
#include "kovec/runconfig.hpp"

namespace kovec::cli {

int cmd_decompose(const std::vector<std::string>& words,
                  std::ostream& out = std::cout);
int cmd_g2p(const RunConfig& config, const std::vector<std::string>& words,
            std::ostream& out = std::cout);
int cmd_pretrain(const RunConfig& config, std::ostream& out = std::cout);
int cmd_embed(const RunConfig& config, const std::vector<std::string>& words,
              std::ostream& out = std::cout);
int cmd_finetune(const RunConfig& config, std::ostream& out = std::cout);
int cmd_predict(const RunConfig& config, std::ostream& out = std::cout);
int cmd_ablate(const RunConfig& config, std::ostream& out = std::cout);

// Checkpoint bundles. An encoder bundle directory holds params.bin,
// encoder.txt (dimensions, lambda and the data-file paths used) and
// symbols.tsv; a head bundle holds params.bin, head.txt and labels.txt.
void save_encoder_bundle(const std::string& dir, TwinEncoder& encoder,
                         const std::string& rules_path,
                         const std::string& inventory_path,
                         const std::string& morpheme_vocab_path);
TwinEncoder load_encoder_bundle(const std::string& dir);

// The data-file paths recorded in an encoder bundle.
struct EncoderData {
  std::string rules_path;
  std::string inventory_path;
  std::string morpheme_vocab_path;
};
EncoderData encoder_bundle_data(const std::string& dir);

void save_head_bundle(const std::string& dir, Head& head,
                      const std::vector<std::string>& labels,
                      const FinetuneConfig& config, bool tagging);
struct HeadBundle {
  Head head;
  std::vector<std::string> labels;
  FinetuneConfig config;
  bool tagging = false;
};
HeadBundle load_head_bundle(const std::string& dir);

// FinetuneConfig <-> config keys (alphas, betas, modalities, head, ...).
FinetuneConfig finetune_config_from(const RunConfig& config,
                                    bool tagging_default);

// The ablation grid: the seven modality masks in row order
// (P, W, M, PW, PM, WM, PWM).
std::vector<std::array<bool, 3>> ablation_grid();

}  // namespace kovec::cli

#endif  // KOVEC_COMMANDS_HPP_
