#include "artauth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "artauth/error.hpp"
#include "artauth/image_io.hpp"
#include "artauth/random.hpp"

namespace artauth {

namespace {

constexpr std::uint64_t kAuthenticStream = 0x1000;
constexpr std::uint64_t kForgeryStream = 0x2000;

using Field = std::vector<double>;

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

/// Multi-octave value noise normalised to [0, 1].
Field value_noise(Rng& rng, int size, int base_cells, int octaves, double persistence) {
  Field field(static_cast<std::size_t>(size) * size, 0.0);
  double amplitude = 1.0;
  for (int o = 0; o < octaves; ++o) {
    const int cells = base_cells << o;
    const int stride = cells + 1;
    std::vector<double> lattice(static_cast<std::size_t>(stride) * stride);
    for (auto& v : lattice) v = rng.uniform();
    for (int y = 0; y < size; ++y) {
      const double fy = (y + 0.5) * cells / size;
      const int y0 = std::min(static_cast<int>(fy), cells - 1);
      const double ty = smoothstep(fy - y0);
      for (int x = 0; x < size; ++x) {
        const double fx = (x + 0.5) * cells / size;
        const int x0 = std::min(static_cast<int>(fx), cells - 1);
        const double tx = smoothstep(fx - x0);
        const double a = lattice[static_cast<std::size_t>(y0) * stride + x0];
        const double b = lattice[static_cast<std::size_t>(y0) * stride + x0 + 1];
        const double c = lattice[static_cast<std::size_t>(y0 + 1) * stride + x0];
        const double d = lattice[static_cast<std::size_t>(y0 + 1) * stride + x0 + 1];
        const double top = a + (b - a) * tx;
        const double bottom = c + (d - c) * tx;
        field[static_cast<std::size_t>(y) * size + x] += amplitude * (top + (bottom - top) * ty);
      }
    }
    amplitude *= persistence;
  }
  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  const double span = *hi - *lo;
  const double base = *lo;
  for (auto& v : field) v = span > 0.0 ? (v - base) / span : 0.5;
  return field;
}

Field mix(const Field& a, const Field& b, double weight_a) {
  Field out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = weight_a * a[i] + (1.0 - weight_a) * b[i];
  return out;
}

void add_grain(Rng& rng, Field& f, double amplitude) {
  for (auto& v : f) v = std::clamp(v + amplitude * rng.gaussian(), 0.0, 1.0);
}

std::array<std::uint16_t, 3> hsv_to_rgb8(double h, double s, double v) {
  h = std::fmod(h, 360.0);
  if (h < 0.0) h += 360.0;
  s = std::clamp(s, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  const double m = v - c;
  auto to8 = [](double u) { return static_cast<std::uint16_t>(std::lround(std::clamp(u, 0.0, 1.0) * 255.0)); };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

struct PaintingParams {
  double surface_persistence;
  double xray_persistence;
  double shared;
  double hue;
  double saturation;
};

SynthPainting render(const CorpusSpec& spec, const PaintingParams& p, std::uint64_t stream_seed, std::string id,
                     Label label) {
  Rng rng(stream_seed);
  const int n = spec.image_size;
  const Field structure = value_noise(rng, n, spec.base_frequency, spec.octaves, 0.5);
  const Field surface = value_noise(rng, n, spec.base_frequency, spec.octaves, p.surface_persistence);
  const Field under = value_noise(rng, n, spec.base_frequency, spec.octaves, p.xray_persistence);
  const Field hue_field = value_noise(rng, n, spec.base_frequency, 3, 0.5);

  Field lum = mix(structure, surface, spec.shared_structure);
  Field dens = mix(structure, under, p.shared);
  add_grain(rng, lum, spec.noise_amplitude);
  add_grain(rng, dens, spec.noise_amplitude);

  std::vector<std::uint16_t> rgb(static_cast<std::size_t>(n) * n * 3);
  std::vector<std::uint16_t> gray(static_cast<std::size_t>(n) * n);
  const double exposure = 0.75 + 0.2 * rng.uniform();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double h = p.hue + 40.0 * (hue_field[i] - 0.5);
    const double s = p.saturation + 0.2 * (hue_field[i] - 0.5);
    const double v = 0.15 + 0.75 * lum[i];
    const auto px = hsv_to_rgb8(h, s, v);
    rgb[3 * i] = px[0];
    rgb[3 * i + 1] = px[1];
    rgb[3 * i + 2] = px[2];
    // Radiographs are rendered under-exposed; the pipeline's exposure stretch undoes it.
    gray[i] = static_cast<std::uint16_t>(std::lround((2000.0 + 60000.0 * dens[i]) * exposure));
  }
  return {std::move(id), RasterImage(n, n, PixelFormat::Rgb8, std::move(rgb)),
          RasterImage(n, n, PixelFormat::Gray16, std::move(gray)), label};
}

/// Paintings of one family drift along a single style axis (think of the
/// artist's period) rather than independently in every parameter.
PaintingParams style_params(const CorpusSpec& spec, std::uint64_t painting_seed) {
  Rng jit(derive_seed(painting_seed, 1));
  const double t = spec.jitter * jit.uniform(-1.0, 1.0);
  return {spec.surface_persistence + 0.02 * t, spec.xray_persistence + 0.02 * t, spec.shared_structure,
          spec.palette_hue + 4.0 * t, spec.palette_saturation + 0.03 * t};
}

std::string make_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu", prefix, i);
  return buf;
}

}  // namespace

void CorpusSpec::validate() const {
  if (image_size < 32) throw InputError("corpus image_size must be >= 32");
  if (n_forgery > 0 && !(perturbation > 0.0)) throw InputError("forgery perturbation must be > 0");
  if (base_frequency < 1 || octaves < 1) throw InputError("corpus noise needs base_frequency >= 1 and octaves >= 1");
  if ((base_frequency << (octaves - 1)) > image_size) {
    throw InputError("finest noise octave exceeds the image resolution");
  }
  if (!(surface_persistence > 0.0) || !(xray_persistence > 0.0)) throw InputError("persistence must be > 0");
  if (shared_structure < 0.0 || shared_structure > 1.0) throw InputError("shared_structure must be in [0, 1]");
  if (noise_amplitude < 0.0 || jitter < 0.0) throw InputError("noise_amplitude and jitter must be >= 0");
}

std::vector<SynthPainting> generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<SynthPainting> out;
  out.reserve(spec.n_authentic + spec.n_forgery);

  for (std::size_t i = 0; i < spec.n_authentic; ++i) {
    const std::uint64_t s = derive_seed(spec.seed, kAuthenticStream + i);
    PaintingParams p = style_params(spec, s);
    out.push_back(render(spec, p, s, make_id("auth", i), Label::Positive));
  }

  for (std::size_t i = 0; i < spec.n_forgery; ++i) {
    const std::uint64_t s = derive_seed(spec.seed, kForgeryStream + i);
    const double mag = spec.perturbation;
    PaintingParams p = style_params(spec, s);
    if (i % 2 == 0) {
      p.surface_persistence += 0.2 * mag;
      p.hue += 35.0 * mag;
      p.saturation += 0.15 * mag;
    } else {
      p.xray_persistence += 0.2 * mag;
      p.shared = std::max(0.0, spec.shared_structure * (1.0 - mag));
    }
    out.push_back(render(spec, p, s, make_id("forg", i), Label::Negative));
  }
  return out;
}

void write_corpus(const std::vector<SynthPainting>& corpus, const CorpusSpec& spec,
                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw InputError("cannot create output directory '" + out_dir.string() + "'");
  }

  std::ostringstream csv;
  csv << "id,visual_path,xray_path,label\n";
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const auto& p : corpus) {
    const std::string vis = p.id + "_visual.png";
    const std::string xr = p.id + "_xray.png";
    save_png(out_dir / vis, p.visual);
    save_png(out_dir / xr, p.xray);
    const char* label = p.label == Label::Positive ? "authentic" : "forgery";
    csv << p.id << ',' << vis << ',' << xr << ',' << label << '\n';
    items.push_back({{"id", p.id}, {"visual_path", vis}, {"xray_path", xr}, {"label", label}});
  }

  nlohmann::ordered_json manifest;
  manifest["spec"] = {
      {"n_authentic", spec.n_authentic},
      {"n_forgery", spec.n_forgery},
      {"image_size", spec.image_size},
      {"seed", spec.seed},
      {"base_frequency", spec.base_frequency},
      {"octaves", spec.octaves},
      {"surface_persistence", spec.surface_persistence},
      {"xray_persistence", spec.xray_persistence},
      {"shared_structure", spec.shared_structure},
      {"noise_amplitude", spec.noise_amplitude},
      {"palette_hue", spec.palette_hue},
      {"palette_saturation", spec.palette_saturation},
      {"jitter", spec.jitter},
      {"perturbation", spec.perturbation},
  };
  manifest["seed"] = spec.seed;
  manifest["paintings"] = items;

  auto write_text = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary);
    f << text;
    if (!f) throw InputError("failed to write '" + (out_dir / name).string() + "'");
  };
  write_text("manifest.csv", csv.str());
  write_text("manifest.json", manifest.dump(2) + "\n");
}

}  // namespace artauth
