#include "elaa/channel.hpp"

#include <cmath>
#include <string>

namespace elaa {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void GeometryConfig::validate() const {
  if (carrier_freq_hz <= 0.0)
    throw GeometryError("geometry: carrier_freq_hz must be positive");
  if (num_service_antennas == 0)
    throw GeometryError("geometry: num_service_antennas must be positive");
  if (num_users == 0) throw GeometryError("geometry: num_users must be positive");
  if (antennas_per_user == 0)
    throw GeometryError("geometry: antennas_per_user must be positive");
  if (user_line_distance_m <= 0.0)
    throw GeometryError("geometry: user_line_distance_m must be positive");
  if (user_spread_m < 0.0)
    throw GeometryError("geometry: user_spread_m must be non-negative");
  if (element_spacing_wavelengths <= 0.0)
    throw GeometryError("geometry: element_spacing_wavelengths must be positive");
  if (num_service_antennas < total_user_antennas())
    throw GeometryError("geometry: service array must have at least as many "
                        "antennas as there are user antennas");
}

Geometry build_geometry(const GeometryConfig& cfg) {
  cfg.validate();
  Geometry g;
  g.wavelength_m = cfg.wavelength_m();

  const std::size_t m = cfg.num_service_antennas;
  const double pitch = cfg.element_spacing_wavelengths * g.wavelength_m;
  g.service_positions.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = (static_cast<double>(i) - 0.5 * static_cast<double>(m - 1)) * pitch;
    g.service_positions.push_back({x, 0.0});
  }

  const std::size_t k = cfg.num_users;
  const std::size_t j = cfg.antennas_per_user;
  const double center_step = k > 1 ? cfg.user_spread_m / static_cast<double>(k - 1) : 0.0;
  const double intra_pitch = 0.5 * g.wavelength_m;
  g.user_positions.reserve(k * j);
  for (std::size_t u = 0; u < k; ++u) {
    const double cx = (static_cast<double>(u) - 0.5 * static_cast<double>(k - 1)) * center_step;
    for (std::size_t a = 0; a < j; ++a) {
      const double off =
          (static_cast<double>(a) - 0.5 * static_cast<double>(j - 1)) * intra_pitch;
      g.user_positions.push_back({cx + off, cfg.user_line_distance_m});
    }
  }
  return g;
}

RealMatrix pairwise_distances(const Geometry& g) {
  const std::size_t m = g.service_positions.size();
  const std::size_t n = g.user_positions.size();
  RealMatrix d(m, n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double dist = std::hypot(g.service_positions[r].x - g.user_positions[c].x,
                                     g.service_positions[r].y - g.user_positions[c].y);
      if (dist <= 0.0) {
        throw GeometryError("pairwise_distances: coincident antennas at (" +
                            std::to_string(r) + ", " + std::to_string(c) + ")");
      }
      d.at(r, c) = dist;
    }
  }
  return d;
}

PathlossModel PathlossModel::free_space(double wavelength_m) {
  return {wavelength_m / (4.0 * kPi), 1.0, true};
}

double PathlossModel::gain(double distance_m) const {
  return alpha / std::pow(distance_m, beta);
}

std::vector<double> pathloss_column_norms(const RealMatrix& d,
                                          const PathlossModel& pl) {
  std::vector<double> norms(d.cols);
  for (std::size_t c = 0; c < d.cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < d.rows; ++r) {
      const double g = pl.gain(d.at(r, c));
      acc += g * g;
    }
    norms[c] = std::sqrt(acc);
  }
  return norms;
}

CMatrix los_matrix(const RealMatrix& d, double wavelength_m,
                   const PathlossModel& pl) {
  if (wavelength_m <= 0.0) throw GeometryError("los_matrix: wavelength must be positive");
  CMatrix h(d.rows, d.cols);
  const double wavenumber = 2.0 * kPi / wavelength_m;
  const std::vector<double> norms =
      pl.normalize_columns ? pathloss_column_norms(d, pl) : std::vector<double>{};
  for (std::size_t c = 0; c < d.cols; ++c) {
    const double scale = pl.normalize_columns ? 1.0 / norms[c] : 1.0;
    for (std::size_t r = 0; r < d.rows; ++r) {
      const double dist = d.at(r, c);
      const double phase = -wavenumber * dist;
      const double amp = pl.gain(dist) * scale;
      h(r, c) = {amp * std::cos(phase), amp * std::sin(phase)};
    }
  }
  return h;
}

CMatrix nlos_matrix(const RealMatrix& d, const PathlossModel& pl,
                    std::uint64_t seed) {
  CMatrix h(d.rows, d.cols);
  Rng rng(seed);
  // Row-major draw order is part of the reproducibility contract.
  for (std::size_t r = 0; r < d.rows; ++r)
    for (std::size_t c = 0; c < d.cols; ++c)
      h(r, c) = pl.gain(d.at(r, c)) * rng.complex_gaussian();
  if (pl.normalize_columns) {
    const std::vector<double> norms = pathloss_column_norms(d, pl);
    for (std::size_t c = 0; c < d.cols; ++c) {
      const double scale = 1.0 / norms[c];
      for (std::size_t r = 0; r < d.rows; ++r) h(r, c) *= scale;
    }
  }
  return h;
}

ChannelRealization rician_combine(CMatrix h_los, CMatrix h_nlos, double kappa) {
  if (h_los.rows() != h_nlos.rows() || h_los.cols() != h_nlos.cols()) {
    throw DimensionError("rician_combine: component shapes differ");
  }
  if (!(kappa >= 0.0)) throw ConfigError("rician_combine: kappa must be >= 0");
  const double w_los = std::sqrt(kappa / (kappa + 1.0));
  const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
  ChannelRealization ch;
  ch.kappa = kappa;
  ch.h = CMatrix(h_los.rows(), h_los.cols());
  for (std::size_t i = 0; i < ch.h.entries().size(); ++i)
    ch.h.entries()[i] = w_los * h_los.entries()[i] + w_nlos * h_nlos.entries()[i];
  ch.h_los = std::move(h_los);
  ch.h_nlos = std::move(h_nlos);
  return ch;
}

ChannelRealization generate_channel(const Geometry& g, const PathlossModel& pl,
                                    double kappa, std::uint64_t seed) {
  RealMatrix d = pairwise_distances(g);
  CMatrix h_los = los_matrix(d, g.wavelength_m, pl);
  CMatrix h_nlos = nlos_matrix(d, pl, seed);
  ChannelRealization ch = rician_combine(std::move(h_los), std::move(h_nlos), kappa);
  if (!all_finite(ch.h)) throw GeometryError("generate_channel: non-finite entries");
  ch.column_scales = pl.normalize_columns ? pathloss_column_norms(d, pl)
                                          : std::vector<double>{};
  ch.distances = std::move(d);
  return ch;
}

}  // namespace elaa
