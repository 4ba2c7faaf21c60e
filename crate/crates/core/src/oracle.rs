//! Independent verification path: bound-state energies by shooting
//! integration of the coupled first-order system
//!
//! ```text
//! psi1' = -W(x) psi1 + E psi2,      psi2' = W(x) psi2 - E psi1,
//! ```
//!
//! with `W(x) = m + g|x|`. Eliminating `psi2` gives
//! `psi1'' + [E^2 + g - (m + gx)^2] psi1 = 0` on `x > 0`, the equation whose
//! decaying solution the spectral module expresses through Hermite functions
//! with `nu = E^2/2g` — the substitution test in this module checks that
//! correspondence numerically, so the two routes share no code.
//!
//! Integration runs inward from both box edges: outward integration is
//! dominated by the discarded growing solution, while inward integration
//! makes the decaying branch attracting. The state is renormalized each step
//! (the equations are linear, so only the ray matters), and an eigenvalue is
//! flagged where the 2x2 matching determinant of the left and right unit
//! states vanishes at the origin.

use crate::error::{Error, Result};
use crate::spectral::PhysicalParams;

/// Energy scan step, in units of `sqrt(g)`.
const SCAN_STEP_FACTOR: f64 = 0.02;

/// Bisection tolerance on the energy, in units of `sqrt(g)`.
const ENERGY_TOL_FACTOR: f64 = 1e-8;

/// `|mismatch|` level below which a refined energy is marked converged.
const MISMATCH_TOL: f64 = 1e-5;

/// An eigenvalue located by the shooting integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    /// Positive energy of the level (the spectrum is symmetric in E).
    pub energy: f64,
    /// Matching determinant at the refined energy.
    pub mismatch: f64,
    /// Whether `|mismatch|` ended below the oracle tolerance.
    pub converged: bool,
}

/// Right-hand side of the first-order system.
pub fn dirac_rhs(x: f64, psi1: f64, psi2: f64, e: f64, params: &PhysicalParams) -> (f64, f64) {
    debug_assert!(e != 0.0, "the system is written for E != 0");
    let w = params.mass() + params.coupling() * x.abs();
    (-w * psi1 + e * psi2, w * psi2 - e * psi1)
}

/// Default integration box: twelve envelope widths past the turning point.
pub fn default_x_max(e: f64, params: &PhysicalParams) -> f64 {
    let sqrt_g = params.coupling().sqrt();
    (e.abs() + 12.0 * sqrt_g) / params.coupling()
}

/// Default integration step.
pub fn default_step(params: &PhysicalParams) -> f64 {
    1e-3 / params.coupling().sqrt()
}

/// Matching determinant at the origin for trial energy `e`.
///
/// Both half-line solutions start from the locally decaying eigendirection
/// of the system at `+/- x_max` (the seed direction is not critical: any
/// component along the decaying branch survives the inward sweep) and are
/// integrated to `x = 0` by fixed-step fourth-order Runge-Kutta with
/// per-step renormalization. The determinant of the two unit states is
/// returned; it vanishes exactly at eigenvalues.
pub fn shoot_mismatch(e: f64, params: &PhysicalParams, x_max: f64, h: f64) -> Result<f64> {
    if !(e.is_finite() && e != 0.0) {
        return Err(Error::InvalidInput("energy must be finite and non-zero"));
    }
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(Error::InvalidInput("x_max must be finite and positive"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidInput("step must be finite and positive"));
    }
    let w_edge = params.mass() + params.coupling() * x_max;
    let lambda = (w_edge * w_edge - e * e).max(0.0).sqrt();
    // decaying eigendirection at the right edge; its component swap decays
    // toward the left edge (W is even in x)
    let seed = (1.0, (w_edge - lambda) / e);
    let right = integrate_inward(x_max, seed.0, seed.1, e, params, h)?;
    let left = integrate_inward(-x_max, seed.1, seed.0, e, params, h)?;
    Ok(left.0 * right.1 - right.0 * left.1)
}

/// RK4 sweep from `x_start` to the origin, renormalizing the state after
/// every step. Returns the final unit state.
fn integrate_inward(
    x_start: f64,
    mut psi1: f64,
    mut psi2: f64,
    e: f64,
    params: &PhysicalParams,
    h: f64,
) -> Result<(f64, f64)> {
    let steps = (x_start.abs() / h).round().max(1.0) as usize;
    let dx = -x_start / steps as f64;
    let mut x = x_start;
    for _ in 0..steps {
        let (k1a, k1b) = dirac_rhs(x, psi1, psi2, e, params);
        let (k2a, k2b) = dirac_rhs(
            x + 0.5 * dx,
            psi1 + 0.5 * dx * k1a,
            psi2 + 0.5 * dx * k1b,
            e,
            params,
        );
        let (k3a, k3b) = dirac_rhs(
            x + 0.5 * dx,
            psi1 + 0.5 * dx * k2a,
            psi2 + 0.5 * dx * k2b,
            e,
            params,
        );
        let (k4a, k4b) = dirac_rhs(x + dx, psi1 + dx * k3a, psi2 + dx * k3b, e, params);
        psi1 += dx / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        psi2 += dx / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        x += dx;
        let norm = psi1.hypot(psi2);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Overflow);
        }
        psi1 /= norm;
        psi2 /= norm;
    }
    Ok((psi1, psi2))
}

/// The `count` lowest positive energies via a mismatch sign-change scan at
/// the default step.
pub fn shoot_eigenvalues(params: &PhysicalParams, count: usize) -> Result<Vec<OracleResult>> {
    shoot_eigenvalues_with_step(params, count, default_step(params))
}

/// As [`shoot_eigenvalues`] with an explicit integration step, scanning
/// `E > 0` in increments of `0.02 sqrt(g)` and bisecting each sign change of
/// the mismatch down to `1e-8 sqrt(g)`.
pub fn shoot_eigenvalues_with_step(
    params: &PhysicalParams,
    count: usize,
    h: f64,
) -> Result<Vec<OracleResult>> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1"));
    }
    let sqrt_g = params.coupling().sqrt();
    let de = SCAN_STEP_FACTOR * sqrt_g;
    let e_tol = ENERGY_TOL_FACTOR * sqrt_g;
    let alpha = params.alpha();
    // generous level-counting bound: nu_n < alpha^2 + 2(n+1) + 2
    let e_cap = sqrt_g * (2.0 * (alpha * alpha + 2.0 * count as f64 + 4.0)).sqrt();

    let mismatch_at = |e: f64| shoot_mismatch(e, params, default_x_max(e, params), h);

    let mut results = Vec::with_capacity(count);
    let mut e_prev = de;
    let mut m_prev = mismatch_at(e_prev)?;
    while results.len() < count {
        let e = e_prev + de;
        if e > e_cap {
            return Err(Error::ScanFailure { at: e });
        }
        let m = mismatch_at(e)?;
        if (m_prev < 0.0) != (m < 0.0) {
            let (mut lo, mut hi, mut m_lo) = (e_prev, e, m_prev);
            while hi - lo > e_tol {
                let mid = 0.5 * (lo + hi);
                let m_mid = mismatch_at(mid)?;
                if (m_mid < 0.0) == (m_lo < 0.0) {
                    lo = mid;
                    m_lo = m_mid;
                } else {
                    hi = mid;
                }
            }
            let energy = 0.5 * (lo + hi);
            let mismatch = mismatch_at(energy)?;
            results.push(OracleResult {
                energy,
                mismatch,
                converged: mismatch.abs() < MISMATCH_TOL,
            });
        }
        e_prev = e;
        m_prev = m;
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{hermite_fn, HermiteOrder, SeriesConfig};
    use approx::assert_relative_eq;

    fn params(alpha: f64) -> PhysicalParams {
        PhysicalParams::from_alpha(alpha).unwrap()
    }

    #[test]
    fn rhs_has_even_potential_swap_symmetry() {
        let p = params(1.3);
        let e = 0.9;
        for &(x, a, b) in &[(0.7, 0.3, -0.5), (2.1, 1.0, 0.2), (0.0, 0.4, 0.4)] {
            let (d1, d2) = dirac_rhs(x, b, a, e, &p);
            let (m1, m2) = dirac_rhs(-x, a, b, e, &p);
            // the swap map phi(x) = (psi2, psi1)(-x) solves the same system
            assert_relative_eq!(m1, -d2, epsilon = 1e-15);
            assert_relative_eq!(m2, -d1, epsilon = 1e-15);
        }
        // W(0) = m
        let (d1, _) = dirac_rhs(0.0, 1.0, 0.0, e, &p);
        assert_relative_eq!(d1, -p.mass(), epsilon = 1e-15);
    }

    #[test]
    fn rhs_energy_reflection_flips_second_component() {
        let p = params(0.5);
        let (d1, d2) = dirac_rhs(1.2, 0.7, -0.4, 1.1, &p);
        let (f1, f2) = dirac_rhs(1.2, 0.7, 0.4, -1.1, &p);
        assert_relative_eq!(f1, d1, epsilon = 1e-15);
        assert_relative_eq!(f2, -d2, epsilon = 1e-15);
    }

    #[test]
    fn hermite_solution_satisfies_the_system() {
        // Substitute psi1 = H_nu(xi) e^{-xi^2/2}, psi2 = (E/sqrt g)
        // H_{nu-1}(xi) e^{-xi^2/2} with nu = E^2/2g and differentiate
        // numerically: both equations must close. This pins the
        // reconstructed first-order system to the Hermite representation.
        let p = params(0.0);
        let nu = 1.3_f64;
        let e = (2.0 * nu).sqrt();
        let cfg = SeriesConfig::default();
        let psi = |x: f64| {
            let xi = x; // alpha = 0, g = 1
            let env = (-0.5 * xi * xi).exp();
            let h_nu = hermite_fn(HermiteOrder::new(nu).unwrap(), xi, &cfg).unwrap();
            let h_lo = hermite_fn(HermiteOrder::new(nu - 1.0).unwrap(), xi, &cfg).unwrap();
            (h_nu * env, e * h_lo * env)
        };
        let fd = 1e-5;
        let mut x = 0.1;
        while x <= 3.0 {
            let (p1, p2) = psi(x);
            let (p1p, p2p) = psi(x + fd);
            let (p1m, p2m) = psi(x - fd);
            let (d1, d2) = dirac_rhs(x, p1, p2, e, &p);
            let scale = p1.abs().max(p2.abs()).max(1e-3);
            assert!(
                ((p1p - p1m) / (2.0 * fd) - d1).abs() / scale < 1e-8,
                "psi1' residual at x={x}"
            );
            assert!(
                ((p2p - p2m) / (2.0 * fd) - d2).abs() / scale < 1e-8,
                "psi2' residual at x={x}"
            );
            x += 0.29;
        }
    }

    #[test]
    fn mismatch_vanishes_at_reference_root_only() {
        let p = params(0.0);
        let h = default_step(&p);
        let e0 = (2.0_f64 * 0.345_459).sqrt();
        let m = shoot_mismatch(e0, &p, default_x_max(e0, &p), h).unwrap();
        assert!(m.abs() < 1e-5, "mismatch {m} at the tabulated root");

        let e_mid = 0.5 * (e0 + (2.0_f64 * 1.548_571).sqrt());
        let m = shoot_mismatch(e_mid, &p, default_x_max(e_mid, &p), h).unwrap();
        assert!(m.abs() > 1e-2, "mismatch {m} between levels");
    }

    #[test]
    fn mismatch_is_symmetric_in_energy_up_to_sign() {
        let p = params(1.0);
        let h = default_step(&p);
        for &e in &[0.9, 1.671, 2.3] {
            let x_max = default_x_max(e, &p);
            let plus = shoot_mismatch(e, &p, x_max, h).unwrap();
            let minus = shoot_mismatch(-e, &p, x_max, h).unwrap();
            assert_relative_eq!(plus.abs(), minus.abs(), max_relative = 1e-9);
        }
    }

    #[test]
    fn mismatch_rejects_bad_arguments() {
        let p = params(0.0);
        assert!(shoot_mismatch(0.0, &p, 10.0, 1e-3).is_err());
        assert!(shoot_mismatch(1.0, &p, -1.0, 1e-3).is_err());
        assert!(shoot_mismatch(1.0, &p, 10.0, 0.0).is_err());
        assert!(shoot_eigenvalues(&p, 0).is_err());
    }

    #[test]
    fn first_massless_level_matches_spectral_route() {
        let p = params(0.0);
        let found = shoot_eigenvalues(&p, 1).unwrap();
        assert_eq!(found.len(), 1);
        let expected = (2.0_f64 * 0.345_459).sqrt();
        assert!(found[0].converged);
        assert_relative_eq!(found[0].energy, expected, max_relative = 1e-5);
    }
}
