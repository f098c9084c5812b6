/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <fstream>

#include "ugformer/error.hpp"
#include "ugformer/harness.hpp"
#include "ugformer/rng.hpp"

namespace ugformer {

void export_embeddings(const Dataset& dataset, const UGformer& model, EvalSampling sampling,
                       std::uint64_t eval_seed, const std::filesystem::path& out_path) {
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
  const std::size_t width = model.config().embedding_dim();
  out << "graph_id,node_id,node_label";
  for (std::size_t j = 0; j < width; ++j) out << ",e_" << j;
  out << '\n';

  NoGradGuard no_grad;
  for (std::size_t gi = 0; gi < dataset.graphs.size(); ++gi) {
    const Graph& g = dataset.graphs[gi];
    const auto contexts = model.contexts_for(g, derive_seed({eval_seed, gi}), 0,
                                             sampling == EvalSampling::kFullNeighborhood);
    const auto r = model.forward(g, contexts);
    const auto values = r.node_embeddings.data();
    const auto& labels = g.node_labels();
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      out << gi << ',' << v << ',';
      if (labels) out << (*labels)[v];
      for (std::size_t j = 0; j < width; ++j) out << ',' << format_double(values[v * width + j]);
      out << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + out_path.string());
}

}  // namespace ugformer
