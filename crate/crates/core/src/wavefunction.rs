//! Piecewise assembly of the two-component bound-state spinor.
//!
//! On the right half-line, with `xi = (m + gx)/sqrt(g)`,
//!
//! ```text
//! psi1 = C  H_nu(xi) e^{-xi^2/2},        psi2 = C (E/sqrt g) H_{nu-1}(xi) e^{-xi^2/2},
//! ```
//!
//! and on the left half-line, with `xi' = (m - gx)/sqrt(g)`, the roles of the
//! components swap (`C'` in place of `C`). Only the decaying branch appears:
//! the growing solution is excluded by square integrability for every order.
//! `C` is anchored to 1, `C'` follows from continuity of `psi2` at the origin
//! (or of `psi1` when `H_nu(alpha) = 0`), and both are rescaled to unit
//! L2 norm with `C > 0`. At a true eigenvalue the remaining component is
//! automatically continuous; off an eigenvalue the mismatch survives and the
//! continuity defect measures it.

use crate::error::{Error, Result};
use crate::specfun::{hermite_fn, HermiteOrder, SeriesConfig};
use crate::spectral::{EigenvalueRecord, PhysicalParams};

/// Residual level above which a record is refused as input to assembly.
/// Refined roots come in around 1e-12; anything above this is not a root.
pub const EIGENVALUE_RESIDUAL_TOL: f64 = 1e-8;

/// Envelope ratio above which the normalization quadrature refuses the grid.
const TAIL_ENVELOPE_TOL: f64 = 1e-10;

/// Default grid size: odd, origin included, and (n-1)/2 even so each
/// half-line gets a plain composite Simpson rule.
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// Sign of the energy branch; both give the same `|psi|` profile, the sign
/// only flips `psi2` against `psi1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySign {
    Plus,
    Minus,
}

impl EnergySign {
    fn signum(self) -> f64 {
        match self {
            EnergySign::Plus => 1.0,
            EnergySign::Minus => -1.0,
        }
    }
}

/// One sampled point of the profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub x: f64,
    pub psi1: f64,
    pub psi2: f64,
}

/// A normalized piecewise bound-state profile on `[-x_max, x_max]`.
///
/// The grid is strictly increasing except for a doubled node at the origin:
/// the row at `0^-` carries the left-branch limit and the row at `0^+` the
/// right-branch limit, so the continuity defect is readable off the grid.
#[derive(Debug, Clone)]
pub struct WavefunctionProfile {
    pub nu: f64,
    pub e_sign: EnergySign,
    /// Signed energy of this branch.
    pub energy: f64,
    /// Matching constant of the right half-line after normalization.
    pub c_right: f64,
    /// Matching constant of the left half-line after normalization.
    pub c_left: f64,
    pub grid: Vec<GridPoint>,
    /// L2 norm recomputed from the normalized grid.
    pub norm: f64,
    /// Continuity defect at the origin relative to the peak amplitude.
    pub continuity_defect: f64,
    params: PhysicalParams,
}

impl WavefunctionProfile {
    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Index of the `0^-` row; the `0^+` row follows it.
    pub fn origin_pair(&self) -> (usize, usize) {
        let left = self.grid.len() / 2 - 1;
        (left, left + 1)
    }
}

/// Default half-width of the sampling box: eight envelope widths past the
/// origin, i.e. `xi(x_max) = alpha + 8`, where the Gaussian factor has
/// fallen below 1e-13 of its origin value for any `alpha >= 0`.
pub fn default_x_max(params: &PhysicalParams) -> f64 {
    8.0 / params.coupling().sqrt()
}

/// Assemble the normalized two-component profile for a refined eigenvalue
/// record.
///
/// `n_points` is the number of distinct grid abscissas (odd, at least 3);
/// the stored grid has one extra row because the origin is doubled.
pub fn assemble(
    record: &EigenvalueRecord,
    params: &PhysicalParams,
    e_sign: EnergySign,
    x_max: f64,
    n_points: usize,
) -> Result<WavefunctionProfile> {
    if !(record.residual.is_finite() && record.residual <= EIGENVALUE_RESIDUAL_TOL) {
        return Err(Error::NotAnEigenvalue {
            residual: record.residual,
        });
    }
    if !(record.nu.is_finite() && record.nu > 0.0) {
        return Err(Error::InvalidInput("record.nu must be positive"));
    }
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(Error::InvalidInput("x_max must be finite and positive"));
    }
    if n_points < 3 || n_points % 2 == 0 {
        return Err(Error::InvalidInput("n_points must be odd and at least 3"));
    }

    let nu = record.nu;
    let g = params.coupling();
    let sqrt_g = g.sqrt();
    let alpha = params.alpha();
    let energy = e_sign.signum() * (2.0 * nu * g).sqrt();
    let e_over_sqrt_g = energy / sqrt_g;
    let cfg = SeriesConfig::default();

    let order_nu = HermiteOrder::new(nu)?;
    let order_lower = HermiteOrder::new(nu - 1.0)?;
    let h_nu_origin = hermite_fn(order_nu, alpha, &cfg)?;
    let h_lower_origin = hermite_fn(order_lower, alpha, &cfg)?;

    // psi2 continuity fixes C'; fall back to psi1 continuity when H_nu(alpha)
    // vanishes. Both denominators vanishing leaves nothing to match.
    let c_right = 1.0;
    let c_left = if h_nu_origin != 0.0 {
        c_right * e_over_sqrt_g * h_lower_origin / h_nu_origin
    } else if h_lower_origin != 0.0 {
        c_right * h_nu_origin / (e_over_sqrt_g * h_lower_origin)
    } else {
        return Err(Error::DegenerateMatch);
    };

    let half = (n_points - 1) / 2;
    let dx = x_max / half as f64;
    let mut grid = Vec::with_capacity(n_points + 1);

    // left branch, x <= 0: components swapped, xi' = alpha - sqrt(g) x
    for i in 0..=half {
        let x = -dx * (half - i) as f64;
        let xi = alpha - sqrt_g * x;
        let envelope = (-0.5 * xi * xi).exp();
        let h_nu = hermite_fn(order_nu, xi, &cfg)?;
        let h_lower = hermite_fn(order_lower, xi, &cfg)?;
        grid.push(GridPoint {
            x,
            psi1: c_left * e_over_sqrt_g * h_lower * envelope,
            psi2: c_left * h_nu * envelope,
        });
    }
    // right branch, x >= 0: xi = alpha + sqrt(g) x
    for i in 0..=half {
        let x = dx * i as f64;
        let xi = alpha + sqrt_g * x;
        let envelope = (-0.5 * xi * xi).exp();
        let h_nu = hermite_fn(order_nu, xi, &cfg)?;
        let h_lower = hermite_fn(order_lower, xi, &cfg)?;
        grid.push(GridPoint {
            x,
            psi1: c_right * h_nu * envelope,
            psi2: c_right * e_over_sqrt_g * h_lower * envelope,
        });
    }

    let mut profile = WavefunctionProfile {
        nu,
        e_sign,
        energy,
        c_right,
        c_left,
        grid,
        norm: 0.0,
        continuity_defect: 0.0,
        params: *params,
    };

    let raw_norm = norm(&profile)?;
    let scale = 1.0 / raw_norm.sqrt();
    profile.c_right *= scale;
    profile.c_left *= scale;
    for point in &mut profile.grid {
        point.psi1 *= scale;
        point.psi2 *= scale;
    }
    profile.norm = norm(&profile)?;
    profile.continuity_defect = continuity_defect(&profile);
    Ok(profile)
}

/// Continuity defect: the larger component jump across the origin, relative
/// to the peak amplitude of the profile.
pub fn continuity_defect(profile: &WavefunctionProfile) -> f64 {
    let (il, ir) = profile.origin_pair();
    let left = profile.grid[il];
    let right = profile.grid[ir];
    let jump = (right.psi1 - left.psi1)
        .abs()
        .max((right.psi2 - left.psi2).abs());
    let peak = profile
        .grid
        .iter()
        .map(|p| p.psi1.abs().max(p.psi2.abs()))
        .fold(0.0_f64, f64::max);
    if peak == 0.0 {
        0.0
    } else {
        jump / peak
    }
}

/// L2 norm of the profile by composite Simpson quadrature per half-line.
///
/// Fails with [`Error::TailTruncation`] when the Gaussian envelope at the
/// grid ends exceeds 1e-10 of its origin value, since the quadrature then
/// cannot vouch for the missing tail mass.
pub fn norm(profile: &WavefunctionProfile) -> Result<f64> {
    let params = &profile.params;
    let alpha = params.alpha();
    let x_end = profile.grid.last().map(|p| p.x).unwrap_or(0.0);
    let xi_end = alpha + params.coupling().sqrt() * x_end;
    let ratio = (-0.5 * (xi_end * xi_end - alpha * alpha)).exp();
    if ratio > TAIL_ENVELOPE_TOL {
        return Err(Error::TailTruncation { ratio });
    }

    let (il, ir) = profile.origin_pair();
    let density: Vec<f64> = profile
        .grid
        .iter()
        .map(|p| p.psi1 * p.psi1 + p.psi2 * p.psi2)
        .collect();
    let dx = profile.grid[ir + 1].x - profile.grid[ir].x;
    Ok(simpson(&density[..=il], dx) + simpson(&density[ir..], dx))
}

/// Composite Simpson rule on equally spaced samples; a 3/8 block covers the
/// last three panels when the panel count is odd, and a single panel falls
/// back to the trapezoid.
fn simpson(values: &[f64], dx: f64) -> f64 {
    let panels = values.len().saturating_sub(1);
    match panels {
        0 => 0.0,
        1 => 0.5 * dx * (values[0] + values[1]),
        _ if panels % 2 == 0 => simpson_even(values, dx),
        _ => {
            let split = values.len() - 4;
            simpson_even(&values[..=split], dx) + three_eighths(&values[split..], dx)
        }
    }
}

fn simpson_even(values: &[f64], dx: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n >= 2 && n % 2 == 0);
    let mut acc = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * dx / 3.0
}

fn three_eighths(values: &[f64], dx: f64) -> f64 {
    debug_assert_eq!(values.len(), 4);
    0.375 * dx * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3])
}
