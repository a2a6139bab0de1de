#pragma once

#include <Eigen/Core>
#include <vector>

#include "sheetcas/numerics.hpp"
#include "sheetcas/scattering.hpp"

namespace sheetcas {

/// Round-trip matrix M restricted to one azimuthal index m at one imaginary
/// wavenumber kappa. Rows and columns are ordered (l ascending) x (TE, TM),
/// polarization fastest, with l = max(1, |m|) .. l_max.
///
/// The block is stored in the balanced form D^{-1} M D with D = diag|T|^{1/2};
/// the similarity leaves det(I - M) unchanged, makes the stored matrix
/// symmetric positive semidefinite, and keeps every entry representable even
/// where T and the Legendre factors individually over- or underflow.
struct RoundTripBlock {
  int m = 0;
  double kappa = 0.0;
  int l_min = 1;
  int l_max = 1;
  Eigen::MatrixXd matrix;
  /// ln D_i, one per row; physical M_ij = exp(s_i - s_j) matrix(i, j).
  std::vector<double> log_scale;
  bool symmetric = true;
  int theta_nodes_used = 0;
  double theta_error = 0.0;

  int dimension() const { return static_cast<int>(matrix.rows()); }
  static int index(int l, Polarization pol, int l_min) {
    return 2 * (l - l_min) + (pol == Polarization::TM ? 1 : 0);
  }
  /// Physical entry M_ij; zero for rows whose T factor vanishes.
  double entry(int i, int j) const;
};

/// Builds blocks for several m at one kappa, sharing the sphere T-matrix.
class RoundTripAssembler {
 public:
  RoundTripAssembler(double kappa, const SphereSheet& sphere, const PlaneSheet& plane,
                     const NumericsSpec& numerics, int l_max);

  RoundTripBlock block(int m) const;

  double kappa() const { return kappa_; }
  int l_max() const { return l_max_; }

 private:
  struct NodeData;
  NodeData nodes(int count) const;
  Eigen::MatrixXd gram_factor(int m, const NodeData& nd) const;

  double kappa_;
  SphereSheet sphere_;
  PlaneSheet plane_;
  NumericsSpec numerics_;
  int l_max_;
  bool zero_;
  std::vector<SphereLogT> log_t_;  // index l
};

/// The 2x2 polarization block M_{lm,l'm} (rows TE, TM) by direct per-node
/// summation, doubling the node count until the entries settle to rel_tol.
Eigen::Matrix2d m_element(int l, int l_prime, int m, double kappa, const SphereSheet& sphere,
                          const PlaneSheet& plane, const NumericsSpec& numerics = {});

/// Requires numerics.l_max to be set.
RoundTripBlock assemble_block(int m, double kappa, const SphereSheet& sphere,
                              const PlaneSheet& plane, const NumericsSpec& numerics);

}  // namespace sheetcas
