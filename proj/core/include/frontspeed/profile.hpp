#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frontspeed/halfplane.hpp"
#include "frontspeed/model.hpp"

namespace frontspeed {

struct ProfileOptions {
  double u_lo = 1e-6;             // window [u_lo, 1 - u_lo] in level space
  double plateau_threshold = 1e-14;
  std::size_t plateau_min_cells = 3;
  double cell_width = 1e-3;       // quadrature cell width in the bulk
  int cells_per_decade = 24;      // geometric grading toward 0, 1 and span ends
};

/// G(u) = int_{u0}^u h_reciprocal(d, V(d)) dd on [u_lo, 1 - u_lo], tabulated
/// at cell boundaries; the value inside a cell is recomputed by quadrature.
class GMap {
 public:
  struct Plateau {
    double mu = 0.0;
    double nu = 0.0;
    double xi = 0.0;  // G on the plateau
  };

  double sigma() const { return sigma_; }
  double anchor() const { return anchor_; }
  double u_front() const { return knots_.front(); }
  double u_back() const { return knots_.back(); }
  double G_front() const { return G_.front(); }
  double G_back() const { return G_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return G_; }
  const std::vector<Plateau>& plateaus() const { return plateaus_; }
  /// Interior plateaus only; those touching the window ends are edges of
  /// finite support, not jumps.
  std::vector<Plateau> jumps() const;
  bool diverges_low() const { return diverges_low_; }
  bool diverges_high() const { return diverges_high_; }

  double integrand(double u) const;
  /// G(u), clamped to the window.
  double operator()(double u) const;
  /// Level with G(u) = xi for xi strictly inside the table range; a plateau
  /// value maps to its upper end.
  double level(double xi) const;
  /// Same inversion carried out in long double, for finite differencing.
  long double level_extended(long double xi) const;

 private:
  friend GMap build_G(const FluxModel& m, const SpeedSolution& sol, double u0, const ProfileOptions& opts);

  std::size_t cell(double u) const;

  std::optional<FluxModel> flux_;
  SpeedSolution sol_;
  double sigma_ = 0.0;
  double anchor_ = 0.5;
  std::vector<double> knots_;
  std::vector<double> G_;
  std::vector<char> flat_;  // cell i = [knots_[i], knots_[i+1]] is part of a plateau
  std::vector<Plateau> plateaus_;
  bool diverges_low_ = false;
  bool diverges_high_ = false;
};

/// Throws AnchorOnPlateau, and InvalidArgument when V does not vanish at
/// the terminal level.
GMap build_G(const FluxModel& m, const SpeedSolution& sol, double u0 = 0.5, const ProfileOptions& opts = {});

/// 0.5 unless that level is saturated or totally degenerate; otherwise the
/// midpoint of the widest level gap free of both.
double default_anchor(const FluxModel& m, const SpeedSolution& sol);

enum class ProfileKind { classic, flux_saturated };
std::string to_string(ProfileKind kind);

struct SaturationPoint {
  double xi = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

struct WaveProfile {
  double sigma = 0.0;
  double anchor = 0.5;
  ProfileKind kind = ProfileKind::classic;
  std::vector<double> xi;
  std::vector<double> u;
  std::vector<char> is_jump;  // 1 at the first grid point past a jump
  std::vector<SaturationPoint> saturation_points;
};

WaveProfile invert_profile(const GMap& G, const std::vector<double>& xi_grid);

/// Uniform grid on [lo, hi] with spacing h (the last point is hi rounded down).
std::vector<double> uniform_grid(double lo, double hi, double h);

struct JumpCheck {
  double xi = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double rh_residual = 0.0;
  double bdp_margin = 0.0;
  double h_residual = 0.0;
};

struct JumpCheckReport {
  std::vector<JumpCheck> jumps;
  double tol = 1e-9;
  bool rh_ok = true;
  bool bdp_ok = true;
  bool h_ok = true;
};

/// |sigma (nu - mu) - (a+(nu) - a+(mu))| per jump. Throws UnboundedAPlus.
std::vector<double> check_rankine_hugoniot(const WaveProfile& p, const FluxModel& m, double sigma);
/// max over u in (mu, nu] of the chord slope from mu minus the jump chord
/// slope. Throws UnboundedAPlus.
std::vector<double> check_bertsch_dalpasso(const WaveProfile& p, const FluxModel& m, double sigma,
                                           std::size_t samples = 2000);
/// |(a+(mu) - sigma mu) - (a+(nu) - sigma nu)| per jump. Throws UnboundedAPlus.
std::vector<double> check_h_continuity(const WaveProfile& p, const FluxModel& m, double sigma);

JumpCheckReport check_jumps(const WaveProfile& p, const FluxModel& m, double sigma, double tol = 1e-9);

struct ClassicResidual {
  double max_abs = 0.0;
  double worst_xi = 0.0;
  std::size_t points = 0;
};

/// Max of |(a(u,u'))' - sigma u' + f(u)| by central differences on the
/// grid points with u in [window, 1 - window].
ClassicResidual residual_classic(const WaveProfile& p, const FluxModel& m, const ReactionModel& r,
                                 double sigma, double window = 1e-4);

/// Same residual on the grid xi_lo + i h, with levels taken from G in long
/// double. Rounding u to double puts a floor of about 4 ulp / h^2 under the
/// profile-based residual, which hides second-order convergence once the
/// truncation error of a smooth profile drops below ~1e-8.
ClassicResidual residual_classic(const GMap& G, const FluxModel& m, const ReactionModel& r, double xi_lo,
                                 double xi_hi, double h, double window = 1e-4);

}  // namespace frontspeed
