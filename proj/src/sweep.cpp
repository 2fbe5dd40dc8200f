#include "chancert/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "chancert/errors.hpp"

namespace chancert {

namespace {

std::string hex_key(std::uint64_t key) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, key);
  return buffer;
}

bool specs_equal(const FiberSpec& a, const FiberSpec& b) {
  return a.length_m == b.length_m && a.core_radius_m == b.core_radius_m && a.n_core == b.n_core &&
         a.numerical_aperture == b.numerical_aperture && a.alpha == b.alpha &&
         a.center_wavelength_m == b.center_wavelength_m && a.bandwidth_m == b.bandwidth_m &&
         a.num_wavelengths == b.num_wavelengths && a.sigma_m == b.sigma_m;
}

}  // namespace

namespace {

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code error;
  std::filesystem::create_directories(dir, error);
  if (error) throw ConfigError("cannot create output directory '" + dir.string() + "': " +
                               error.message());
}

}  // namespace

Mstm cached_mstm(const FiberSpec& spec, const std::filesystem::path& cache_dir) {
  spec.validate();
  ensure_directory(cache_dir);
  const std::filesystem::path path = cache_dir / ("mstm_" + hex_key(spec.cache_key()) + ".bin");
  if (std::filesystem::exists(path)) {
    try {
      Mstm cached = load_mstm(path);
      if (specs_equal(cached.spec, spec)) return cached;
    } catch (const ConfigError&) {
      // Corrupt cache entry: fall through and rebuild.
    }
  }
  Mstm mstm = build_mstm(spec);
  save_mstm(mstm, path);
  return mstm;
}

ApproxTm estimate_tm(const Mstm& mstm, const RunConfig& config) {
  if (config.estimator == TmEstimator::spectral_mean) return spectral_mean_tm(mstm);
  const Eigen::Index dim = mstm.dim();
  if (dim > 48) {
    std::fprintf(stderr,
                 "note: intensity_fit over %lld modes fits %lld complex parameters; "
                 "this can take hours (spectral_mean is the fast estimator)\n",
                 static_cast<long long>(dim), static_cast<long long>(dim * dim));
  }
  const int num_probes =
      config.num_probes > 0 ? config.num_probes : static_cast<int>(4 * dim * dim);
  Rng rng(config.seed);
  const ProbeDataset dataset = simulate_probe_dataset(mstm, num_probes, rng);
  return intensity_fit_tm(dataset, dim, config.fit_iters, rng);
}

CorrelationTensor subspace_correlations(const Mstm& mstm, const ApproxTm& approx, int d,
                                        const MubFamily& mubs) {
  return mub_correlations(mstm, leading_subspace(approx, d), mubs);
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  ensure_directory(config.output_dir);
  const Mstm mstm = cached_mstm(config.fiber, config.output_dir / "cache");
  const ApproxTm approx = estimate_tm(mstm, config);
  const Eigen::Index full_dim = mstm.dim();

  std::vector<int> dims = config.dims;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  std::vector<SweepRow> rows;
  for (int d : dims) {
    if (d > full_dim) {
      std::fprintf(stderr, "note: skipping d=%d (> %lld guided modes)\n", d,
                   static_cast<long long>(full_dim));
      continue;
    }
    // Resolve the m list for this d: deduplicate, clamp "d+1".
    std::set<int> m_values;
    for (int m : config.mub_m) m_values.insert(m == kFullMubSet ? d + 1 : m);

    std::map<int, CorrelationTensor> tensors;  // keyed by m
    for (int m : m_values) {
      if (m > 2 && !is_prime(d)) {
        std::fprintf(stderr, "note: skipping d=%d for m=%d (m > 2 needs prime d)\n", d, m);
        continue;
      }
      if (m > d + 1) {
        std::fprintf(stderr, "note: skipping d=%d for m=%d (at most d+1 bases exist)\n", d, m);
        continue;
      }
      const MubFamily mubs = (m == 2) ? fourier_pair(d) : prime_family(d, m);
      CorrelationTensor ideal = subspace_correlations(mstm, approx, d, mubs);
      tensors.emplace(m, apply_noise(ideal, config.noise));
    }

    for (WitnessKind kind : {WitnessKind::ft_bavaresco, WitnessKind::pt_steering,
                             WitnessKind::ft_morelli}) {
      if (std::find(config.witnesses.begin(), config.witnesses.end(), kind) ==
          config.witnesses.end())
        continue;
      for (const auto& [m, tensor] : tensors) {
        const bool two_basis =
            kind == WitnessKind::ft_bavaresco || kind == WitnessKind::pt_steering;
        if (two_basis && m != 2) continue;
        const auto start = std::chrono::steady_clock::now();
        const CertificationResult result = certify(tensor, kind, m);
        const auto stop = std::chrono::steady_clock::now();
        SweepRow row;
        row.fiber_length_m = config.fiber.length_m;
        row.d = d;
        row.witness = std::string(witness_name(kind));
        row.m = m;
        row.p_used = config.noise.mixing_at(d);
        row.lhs = result.lhs;
        row.certified_n = static_cast<int>(result.certified_n);
        row.wall_time_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << "fiber_length_m,d,witness,m,p_used,lhs,certified_n,wall_time_ms\n";
  char line[192];
  for (const SweepRow& row : rows) {
    std::snprintf(line, sizeof(line), "%.12g,%d,%s,%d,%.12g,%.12g,%d,%lld\n", row.fiber_length_m,
                  row.d, row.witness.c_str(), row.m, row.p_used, row.lhs, row.certified_n,
                  static_cast<long long>(row.wall_time_ms));
    out << line;
  }
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (d, certified_n)
};

void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::vector<Series>& series) {
  constexpr double width = 860, height = 560;
  constexpr double left = 80, right = 830, top = 60, bottom = 500;
  static const char* palette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                  "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

  double max_x = 1.0, max_y = 1.0;
  for (const Series& s : series)
    for (const auto& [x, y] : s.points) {
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
    }
  max_x *= 1.05;
  max_y *= 1.1;

  auto px = [&](double x) { return left + (right - left) * x / max_x; };
  auto py = [&](double y) { return bottom - (bottom - top) * y / max_y; };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"430\" y=\"30\" text-anchor=\"middle\" font-size=\"18\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"430\" y=\"540\" text-anchor=\"middle\" font-size=\"14\" "
         "font-family=\"sans-serif\">subspace dimension d</text>\n"
      << "<text x=\"24\" y=\"280\" text-anchor=\"middle\" font-size=\"14\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 24 280)\">certified dimension "
         "n</text>\n";

  for (int tick = 0; tick <= 5; ++tick) {
    const double xv = max_x * tick / 5.0, yv = max_y * tick / 5.0;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << bottom << "\" x2=\"" << px(xv) << "\" y2=\""
        << bottom + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(xv) << "\" y=\"" << bottom + 20
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << static_cast<int>(xv) << "</text>\n"
        << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << left << "\" y2=\""
        << py(yv) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left - 10 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
        << static_cast<int>(yv) << "</text>\n";
  }

  int color = 0;
  double legend_y = top + 10;
  for (const Series& s : series) {
    const char* stroke = palette[color % 8];
    ++color;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.points) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    for (const auto& [x, y] : s.points)
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3.5\" fill=\"" << stroke
          << "\"/>\n";
    out << "<rect x=\"" << right - 210 << "\" y=\"" << legend_y - 9
        << "\" width=\"14\" height=\"14\" fill=\"" << stroke << "\"/>\n"
        << "<text x=\"" << right - 190 << "\" y=\"" << legend_y + 3
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    legend_y += 20;
  }
  out << "</svg>\n";
}

}  // namespace

void emit_plots(const std::vector<SweepRow>& rows, const std::filesystem::path& output_dir) {
  if (rows.empty()) throw std::invalid_argument("emit_plots: no rows");
  ensure_directory(output_dir);

  std::map<std::string, Series> two_basis, multi_basis;
  for (const SweepRow& row : rows) {
    char label[128];
    std::snprintf(label, sizeof(label), "%s m=%d (%.0f m)", row.witness.c_str(), row.m,
                  row.fiber_length_m);
    auto& bucket = (row.witness == "ft_morelli" && row.m > 2) ? multi_basis : two_basis;
    Series& series = bucket[label];
    series.label = label;
    series.points.emplace_back(row.d, row.certified_n);
  }
  auto flatten = [](std::map<std::string, Series>& bucket) {
    std::vector<Series> list;
    for (auto& [label, series] : bucket) {
      std::sort(series.points.begin(), series.points.end());
      list.push_back(std::move(series));
    }
    return list;
  };
  if (!two_basis.empty())
    write_svg(output_dir / "certified_vs_dimension.svg", "Certified dimension vs subspace dimension",
              flatten(two_basis));
  if (!multi_basis.empty())
    write_svg(output_dir / "mub_enhancement.svg", "Certified dimension with additional bases",
              flatten(multi_basis));
}

}  // namespace chancert
