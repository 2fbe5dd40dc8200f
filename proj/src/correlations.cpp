#include "chancert/correlations.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "chancert/errors.hpp"

namespace chancert {

double CorrelationTensor::diagonal_sum(Eigen::Index x) const {
  double total = 0.0;
  for (Eigen::Index a = 0; a < dim; ++a) total += at(x, a, a);
  return total;
}

double CorrelationTensor::normalization_defect() const {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < num_bases; ++x) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      double column = 0.0;
      for (Eigen::Index a = 0; a < dim; ++a) column += at(x, a, b);
      worst = std::max(worst, std::abs(column - 1.0));
    }
  }
  return worst;
}

void CorrelationTensor::validate() const {
  if (values.size() != static_cast<std::size_t>(num_bases * dim * dim))
    throw std::invalid_argument("CorrelationTensor: value count does not match dimensions");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("CorrelationTensor: entries must be finite and non-negative");
  if (normalization_defect() > tol::column_normalization)
    throw std::invalid_argument("CorrelationTensor: columns are not normalized");
}

CorrelationTensor CorrelationTensor::perfect(Eigen::Index dim, Eigen::Index num_bases) {
  CorrelationTensor c;
  c.dim = dim;
  c.num_bases = num_bases;
  c.values.assign(static_cast<std::size_t>(num_bases * dim * dim), 0.0);
  for (Eigen::Index x = 0; x < num_bases; ++x)
    for (Eigen::Index a = 0; a < dim; ++a) c.at(x, a, a) = 1.0;
  return c;
}

double NoiseModel::mixing_at(Eigen::Index d) const {
  switch (kind) {
    case NoiseKind::none:
      return 1.0;
    case NoiseKind::fixed_p:
      return p;
    case NoiseKind::quadratic_p: {
      const double x = static_cast<double>(d);
      return std::clamp(a * x * x + b * x + c, 0.0, 1.0);
    }
  }
  return 1.0;
}

NoiseModel NoiseModel::fixed(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("NoiseModel: fixed p must lie in [0, 1], got " + std::to_string(p));
  NoiseModel model;
  model.kind = NoiseKind::fixed_p;
  model.p = p;
  return model;
}

NoiseModel NoiseModel::quadratic(double a, double b, double c) {
  NoiseModel model;
  model.kind = NoiseKind::quadratic_p;
  model.a = a;
  model.b = b;
  model.c = c;
  return model;
}

CorrelationTensor mub_correlations(const Mstm& mstm, const SubspaceBases& bases,
                                   const MubFamily& mubs) {
  const Eigen::Index d = mubs.dim;
  const Eigen::Index m = mubs.num_bases();
  const Eigen::Index full_dim = mstm.dim();
  if (bases.input.cols() != d || bases.output.cols() != d)
    throw std::invalid_argument("mub_correlations: basis column count does not match MUB dimension");
  if (bases.input.rows() != full_dim || bases.output.rows() != full_dim)
    throw std::invalid_argument("mub_correlations: basis row count does not match the MSTM");

  const Eigen::Index num_lambda = mstm.num_wavelengths();
  const std::size_t tensor_size = static_cast<std::size_t>(m * d * d);

  // Fixed chunking keeps the reduction order independent of the thread count.
  const int num_chunks = static_cast<int>(std::min<Eigen::Index>(16, num_lambda));
  std::vector<std::vector<double>> partial(num_chunks, std::vector<double>(tensor_size, 0.0));

  auto run_chunk = [&](int chunk) {
    const Eigen::Index begin = num_lambda * chunk / num_chunks;
    const Eigen::Index end = num_lambda * (chunk + 1) / num_chunks;
    std::vector<double>& acc = partial[static_cast<std::size_t>(chunk)];
    ComplexMatrix rotated(d, d);
    for (Eigen::Index i = begin; i < end; ++i) {
      const double weight = mstm.weights[static_cast<std::size_t>(i)];
      const ComplexMatrix scaled =
          mstm.diagonals[static_cast<std::size_t>(i)].asDiagonal() * bases.input;
      const ComplexMatrix core = bases.output.adjoint() * scaled;  // d x d
      for (Eigen::Index x = 0; x < m; ++x) {
        if (x == 0) {
          rotated = core;
        } else {
          rotated.noalias() = mubs.matrices[static_cast<std::size_t>(x)].adjoint() * core *
                              mubs.matrices[static_cast<std::size_t>(x)];
        }
        for (Eigen::Index b = 0; b < d; ++b)
          for (Eigen::Index a = 0; a < d; ++a)
            acc[static_cast<std::size_t>((x * d + a) * d + b)] += weight * std::norm(rotated(a, b));
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int num_workers = static_cast<int>(std::min<unsigned>(hw, num_chunks));
  if (num_workers <= 1) {
    for (int chunk = 0; chunk < num_chunks; ++chunk) run_chunk(chunk);
  } else {
    std::vector<std::thread> workers;
    std::atomic<int> next_chunk{0};
    for (int w = 0; w < num_workers; ++w) {
      workers.emplace_back([&]() {
        for (int chunk = next_chunk.fetch_add(1); chunk < num_chunks;
             chunk = next_chunk.fetch_add(1))
          run_chunk(chunk);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  CorrelationTensor tensor;
  tensor.dim = d;
  tensor.num_bases = m;
  tensor.values.assign(tensor_size, 0.0);
  for (int chunk = 0; chunk < num_chunks; ++chunk)
    for (std::size_t i = 0; i < tensor_size; ++i) tensor.values[i] += partial[chunk][i];

  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index b = 0; b < d; ++b) {
      double column = 0.0;
      for (Eigen::Index a = 0; a < d; ++a) column += tensor.at(x, a, b);
      if (column < 1e-12)
        throw NumericFailure("mub_correlations: vanishing column (x=" + std::to_string(x) +
                             ", b=" + std::to_string(b) + "), cannot normalize");
      for (Eigen::Index a = 0; a < d; ++a) tensor.at(x, a, b) /= column;
    }
  }
  return tensor;
}

CorrelationTensor apply_noise(const CorrelationTensor& c, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("apply_noise: p must lie in [0, 1], got " + std::to_string(p));
  CorrelationTensor noisy = c;
  const double background = (1.0 - p) / static_cast<double>(c.dim);
  for (double& v : noisy.values) v = p * v + background;
  return noisy;
}

CorrelationTensor apply_noise(const CorrelationTensor& c, const NoiseModel& model) {
  return apply_noise(c, model.mixing_at(c.dim));
}

void save_correlations_csv(const CorrelationTensor& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << "x,a,b,value\n";
  char line[96];
  for (Eigen::Index x = 0; x < c.num_bases; ++x)
    for (Eigen::Index a = 0; a < c.dim; ++a)
      for (Eigen::Index b = 0; b < c.dim; ++b) {
        std::snprintf(line, sizeof(line), "%lld,%lld,%lld,%.17g\n", static_cast<long long>(x),
                      static_cast<long long>(a), static_cast<long long>(b), c.at(x, a, b));
        out << line;
      }
}

CorrelationTensor load_correlations_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "x,a,b,value")
    throw ConfigError("'" + path.string() + "': expected header x,a,b,value");

  struct Row {
    long long x, a, b;
    double value;
  };
  std::vector<Row> rows;
  long long max_x = -1, max_ab = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Row row{};
    char extra = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld,%lld,%lf%c", &row.x, &row.a, &row.b, &row.value,
                    &extra) != 4 ||
        row.x < 0 || row.a < 0 || row.b < 0)
      throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) +
                        ": malformed row '" + line + "'");
    max_x = std::max(max_x, row.x);
    max_ab = std::max({max_ab, row.a, row.b});
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("'" + path.string() + "': no data rows");

  CorrelationTensor c;
  c.dim = max_ab + 1;
  c.num_bases = max_x + 1;
  c.values.assign(static_cast<std::size_t>(c.num_bases * c.dim * c.dim), 0.0);
  for (const Row& row : rows) c.at(row.x, row.a, row.b) = row.value;
  c.validate();
  return c;
}

}  // namespace chancert
