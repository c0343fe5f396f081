#pragma once

// Builders for the standard examples: truncated disk algebra, Basener's
// circle bundle over an annulus, the DFP distinguished-point extension, the
// tensor disk, and the contraction of a closed set to a point.

#include <string>
#include <vector>

#include "uaext/group.hpp"

namespace uaext {

struct DiskGridSpec {
  std::size_t boundary = 32;
  std::size_t rings = 3;
  std::size_t ring_size = 16;
  double inner_radius = 0.2;
  double outer_radius = 0.7;
};

/// Circle samples, the centre, and `rings` interior rings evenly spaced in
/// radius; odd rings are rotated by half a step.
SpacePtr disk_grid(const DiskGridSpec& spec = {});

/// n equally spaced real points on [-1, 1].
SpacePtr diameter_grid(std::size_t n);

struct DiskAlgebra {
  FunctionSystem system;
  std::vector<std::string> warnings;
};

DiskAlgebra build_disk_algebra(const DiskGridSpec& spec, int degree_cap);
/// The system generated by the first coordinate on an arbitrary planar grid;
/// warns when no point lies on the unit circle.
DiskAlgebra build_disk_algebra(const SpacePtr& grid, int degree_cap);

struct BasenerSpec {
  double r0 = 0.4;
  double r1 = 0.7;
  std::size_t n_r = 5;
  std::size_t n_theta = 24;
  std::size_t m = 64;
  int cap = 4;
};

struct GalleryBuild {
  ExtensionBundle bundle;
  GroupAction action;
};

/// K = annulus grid, A generated by z and 1/z, Y the circles of radius
/// sqrt(1 - |z|^2) sampled at M points, B generated by p, 1/p, z, 1/z, T the
/// fiber average and Z_M rotating every fiber by one step.
GalleryBuild build_basener(const BasenerSpec& spec = {});

struct DfpSpec {
  std::size_t m = 32;
  /// 0 selects the base cap.
  int cap = 0;
};

/// f_n = z g_n for the fixed polynomials g_1..g_8 = 1, z, z^2, z^3,
/// (1+z)/2, (1-z)/2, (1+iz^2)/2, (1-z^3)/2; the first `count` of them.
std::vector<FunctionTable> default_dfp_functions(const SpacePtr& disk, std::size_t count = 8);

/// Triples (x, (z_n), w) with z_n w = f_n(x), |w| = max_n |f_n(x)|^{1/2},
/// |z_n|^2 <= |f_n(x)|. Base generators weigh 1, z_n and w weigh 2.
GalleryBuild build_dfp(const FunctionSystem& base, std::size_t x0, const std::vector<FunctionTable>& f,
                       const DfpSpec& spec = {});

/// Y = grid x (M circle points), B generated by z and w, T = evaluation on
/// the section w = 1.
ExtensionBundle build_tensor_disk(const SpacePtr& grid, std::size_t m, int cap);

/// X = Y with the points of K identified (the class takes the label and
/// coordinates of K's first point), A = C(X), B = {f : f|K in A0}; no T.
ExtensionBundle build_contraction(const SpacePtr& y, const IndexList& k_set, const FunctionSystem& a0);

}  // namespace uaext
