#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "artauth/modelsel.hpp"
#include "artauth/raster.hpp"

namespace artauth {

/// Parameters of the procedural paired-texture corpus.
struct CorpusSpec {
  std::size_t n_authentic = 24;
  std::size_t n_forgery = 24;
  int image_size = 256;
  std::uint64_t seed = 2024;

  // Authentic family.
  int base_frequency = 4;           ///< lattice cells per edge at the coarsest octave
  int octaves = 6;
  double surface_persistence = 0.45;  ///< amplitude ratio between octaves (spectral slope)
  double xray_persistence = 0.5;
  double shared_structure = 0.6;    ///< weight of the structure layer both modalities see
  double noise_amplitude = 0.02;    ///< per-pixel grain
  double palette_hue = 30.0;        ///< degrees
  double palette_saturation = 0.45;
  double jitter = 1.0;              ///< scales per-painting variation inside a class

  /// Forgery shift in units of the default perturbation.
  double perturbation = 1.0;

  void validate() const;
};

struct SynthPainting {
  std::string id;
  RasterImage visual;  ///< Rgb8
  RasterImage xray;    ///< Gray16
  Label label;
};

/// Deterministic under spec.seed. Each painting draws from its own RNG
/// stream derived from (seed, class, index). Even-indexed forgeries perturb
/// the surface (spectral slope and palette) and leave the radiograph
/// authentic-like; odd-indexed forgeries do the opposite and decorrelate the
/// radiograph from the shared structure layer.
std::vector<SynthPainting> generate_corpus(const CorpusSpec& spec);

/// Writes <id>_visual.png, <id>_xray.png, manifest.csv and manifest.json.
void write_corpus(const std::vector<SynthPainting>& corpus, const CorpusSpec& spec,
                  const std::filesystem::path& out_dir);

}  // namespace artauth
