#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "elaa/linalg.hpp"
#include "elaa/rng.hpp"

namespace elaa {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Uplink layout: a uniform linear service array on the x axis centered at
// the origin, and user antennas on a parallel line at a fixed perpendicular
// distance. User antennas are grouped per user equipment; each group is a
// short half-wavelength ULA centered on the equipment position, and the
// equipment centers are spread evenly over user_spread_m.
struct GeometryConfig {
  double carrier_freq_hz = 3.5e9;
  std::size_t num_service_antennas = 512;  // M
  std::size_t num_users = 8;
  std::size_t antennas_per_user = 4;
  double user_line_distance_m = 30.0;
  double user_spread_m = 10.0;
  double element_spacing_wavelengths = 0.5;  // service array pitch

  std::size_t total_user_antennas() const { return num_users * antennas_per_user; }
  double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
  void validate() const;  // throws GeometryError
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Geometry {
  std::vector<Point2> service_positions;  // M entries
  std::vector<Point2> user_positions;     // N entries, user-major order
  double wavelength_m = 0.0;
};

Geometry build_geometry(const GeometryConfig& cfg);

struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Element-pair distances in meters, service antenna m x user antenna n.
// Coincident pairs throw GeometryError.
RealMatrix pairwise_distances(const Geometry& g);

// Amplitude gain alpha / d^beta at distance d. free_space() uses
// alpha = wavelength / (4 pi) with beta = 1. When normalize_columns is set,
// each channel column is divided by the deterministic gain profile norm
// sqrt(sum_m (alpha/d_mn^beta)^2) so a pure line-of-sight column has unit
// norm and a scattered column has unit expected norm.
struct PathlossModel {
  double alpha = 1.0;
  double beta = 1.0;
  bool normalize_columns = true;

  static PathlossModel free_space(double wavelength_m);
  double gain(double distance_m) const;
};

std::vector<double> pathloss_column_norms(const RealMatrix& d,
                                          const PathlossModel& pl);

// Deterministic line-of-sight matrix: entry (m, n) is
// gain(d_mn) * exp(-i 2 pi d_mn / wavelength), distances taken per element
// pair (spherical wavefront, no plane-wave approximation).
CMatrix los_matrix(const RealMatrix& d, double wavelength_m,
                   const PathlossModel& pl);

// Scattered matrix: gain(d_mn) * w_mn with w_mn iid CN(0, 1), drawn
// row-major from Rng(seed).
CMatrix nlos_matrix(const RealMatrix& d, const PathlossModel& pl,
                    std::uint64_t seed);

struct ChannelRealization {
  CMatrix h_los;
  CMatrix h_nlos;
  CMatrix h;  // sqrt(k/(k+1)) h_los + sqrt(1/(k+1)) h_nlos
  double kappa = 0.0;
  RealMatrix distances;
  std::vector<double> column_scales;  // normalization divisors, empty if unused
};

// Mixes the two components with Rician factor kappa >= 0. The metadata
// fields (distances, column_scales) are left empty; generate_channel fills
// them.
ChannelRealization rician_combine(CMatrix h_los, CMatrix h_nlos, double kappa);

// Full pipeline: distances, both components, mixture, metadata.
ChannelRealization generate_channel(const Geometry& g, const PathlossModel& pl,
                                    double kappa, std::uint64_t seed);

}  // namespace elaa
