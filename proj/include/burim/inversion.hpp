#pragma once

#include <map>
#include <string>
#include <vector>

#include "burim/elliptic.hpp"
#include "burim/fields.hpp"
#include "burim/forward.hpp"
#include "burim/partition.hpp"
#include "burim/preprocess.hpp"

namespace burim {

// Gradient of the field logarithm at the top wavenumber, with its
// divergence kept consistent with the stored gradient by construction.
struct TailField {
  std::array<ComplexVolume, 3> grad;
  ComplexVolume div;

  static TailField from_gradient(std::array<ComplexVolume, 3> g);
};

// Per-sweep q fields and the running weighted sum Q = h Σ q_j together
// with its accumulated gradient.
struct QSequence {
  double h = 0.0;
  ComplexVolume q_sum;                  // Q_{n-1}
  std::array<ComplexVolume, 3> grad_sum;  // ∇Q_{n-1}
  ComplexVolume div_sum;                // ΔQ_{n-1}
  std::vector<ComplexVolume> q_fields;  // q_1 .. q_n

  explicit QSequence(const Grid3D& g, double step);
  void append(const ComplexVolume& q, const std::array<ComplexVolume, 3>& grad_q);
};

struct StoppingConfig {
  double inner_tol = 1e-6;  // stop inner iterations when e_{n,2} falls below
  int inner_cap = 3;
  double outer_tol = 5e-4;  // level for the consecutive-element rule
  int outer_run = 3;        // how many consecutive elements must sit below
  int outer_cap = 5;        // hard cap on sweeps
};

// Append-only record of the relative-error sequence, including the bridge
// errors between consecutive sweeps.
struct StoppingState {
  struct Entry {
    int sweep = 0;
    int inner = 0;
    bool bridge = false;
    double value = 0.0;
  };
  std::vector<Entry> entries;

  void add_inner(int sweep, int inner, double value);
  void add_bridge(int sweep, double value);

  // Errors attached to the sweep pair (n-1, n), in chronological order.
  std::vector<Entry> pair_sequence(int n) const;
  // First index (into pair_sequence) of a qualifying run, or -1.
  int outer_window(int n, const StoppingConfig& cfg) const;
  bool inner_should_stop(int sweep, int inner, const StoppingConfig& cfg) const;
};

// Completed multi-wavenumber boundary data on the inversion domain.
struct CompletedData {
  Grid3D omega;
  WavenumberPartition partition;
  WaveConvention convention = WaveConvention::Minus;
  std::vector<BoundaryField> g;  // one per partition node, index 0 = k_max

  void validate() const;
};

struct InversionConfig {
  StoppingConfig stopping;
  LSConfig ls;
  double bvp_tol = 1e-8;
  double smooth_sigma = 0.65;
  double search_z_hi = 1.0;  // coefficient support is confined to z in (z*, search_z_hi)
  double c_max = Coefficient::kDefaultMax;
  double tail_guard_rel = 1e-6;  // |u| guard for the tail division
};

struct SweepRecord {
  int sweep = 0;
  int inner = 0;
  bool bridge = false;
  double error = -1.0;  // negative when undefined (first inner of first sweep)
  double bvp_residual = 0.0;
  int bvp_iterations = 0;
  double ls_residual = 0.0;
  int ls_iterations = 0;
  double min_abs_u = 0.0;
  double max_c = 0.0;
  double imag_residual_max = 0.0;
  bool clamped = false;
};

struct InversionResult {
  Coefficient c;
  double reported_max = 1.0;
  bool converged = false;
  int sweeps_done = 0;
  std::string stop_reason;
  double avg_of_maxima = 0.0;  // alternative reduction, for comparison only
  std::vector<SweepRecord> records;
  StoppingState stopping;
};

// Boundary condition for the sweep-n problem from the completed data:
// q_n = (g(k_n) - g(k_{n+1})) / (h g(k_n)) on the boundary. Valid for
// 0 <= n <= N-1; a vanishing denominator is reported with its location.
BoundaryField boundary_q(const CompletedData& data, int n);

// Harmonic extension of prescribed gradient boundary data.
TailField tail_from_boundary(const Grid3D& omega, const std::array<BoundaryField, 3>& r,
                             double rel_tol = 1e-8);

// Initial tail: gradient boundary data assembled from the completed data at
// the top wavenumber, then componentwise harmonic extension.
TailField initial_tail(const CompletedData& data, double rel_tol = 1e-8);

// One linearized sweep problem (convection-diffusion with Dirichlet data).
EllipticResult solve_q_bvp(const TailField& tail, const QSequence& qseq, double k_n,
                           const BoundaryField& psi, double rel_tol = 1e-8);

struct VCUpdate {
  std::array<ComplexVolume, 3> grad_v;
  ComplexVolume c_raw;  // complex coefficient before truncation
};

// Gradient of v from the current q, the accumulated sum and the previous
// tail, and the raw coefficient -(Δv + (∇v)^2)/k_n^2.
VCUpdate update_v_and_c(const ComplexVolume& q, const QSequence& qseq, const TailField& tail,
                        double k_n);

// Coefficient truncation: max(|c|,1) on footprint x (z*, z_hi), unit
// background elsewhere, then Gaussian smoothing. Values above c_max are
// clamped (flagged via *clamped when given).
Coefficient truncate_c(const ComplexVolume& c_raw, const TargetFootprint& footprint,
                       double z_hi = 1.0, double smooth_sigma = 0.65,
                       double c_max = Coefficient::kDefaultMax, bool* clamped = nullptr);

// Tail update from a forward solve at the top wavenumber: ∇u/u with a
// relative guard on |u| (guarded nodes inherit the nearest valid value).
struct TailUpdate {
  TailField tail;
  double ls_residual = 0.0;
  int ls_iterations = 0;
  double min_abs_u = 0.0;
};
TailUpdate update_tail(const Coefficient& c, double k_top, WaveConvention conv,
                       const LSConfig& cfg, double guard_rel = 1e-6);

// Full sweep iteration over the partition with the inner/outer stopping
// rules; the final coefficient is the pointwise average of the fields in
// the first qualifying error window.
InversionResult run_inversion(const CompletedData& data, const TargetFootprint& footprint,
                              const InversionConfig& cfg);

// Relative L2 distance of two coefficient fields on the same grid.
double relative_l2(const Coefficient& a, const Coefficient& b);

}  // namespace burim
