// Regenerates the bundled synthetic corpora under the given directory.
#include <filesystem>
#include <iostream>

#include "di/corpus_io.hpp"
#include "di/error.hpp"
#include "di/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_synthetic <out-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  try {
    const std::vector<di::synthetic::BundleSpec> specs{
        {"synthetic", "s", "levantine", di::Task::kSentiment, 20200315},
        {"synthetic_hate", "h", "gulf", di::Task::kHate, 20200316},
    };
    for (const auto& spec : specs) {
      const auto bundle = di::synthetic::make_bundle(spec);
      di::save_documents(bundle.corpus, dir / (spec.name + ".jsonl"));
      di::save_embeddings(bundle.embeddings, dir / (spec.name + ".demb"));
      std::cout << spec.name << ": " << bundle.corpus.size() << " documents\n";
    }
  } catch (const di::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
