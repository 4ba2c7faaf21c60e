//! The quantization condition and its root search.
//!
//! Bound states of the massless-or-massive fermion in the scalar potential
//! `g|x|` occur where
//!
//! ```text
//! f(nu; alpha) = H_nu(alpha)^2 - 2 nu H_{nu-1}(alpha)^2 = 0,
//! ```
//!
//! with `alpha = m / sqrt(g)`, `nu = E^2 / 2g` and `H` the Hermite function
//! of real order. No integrality is imposed on `nu`: the roots are generic
//! reals, and the energies are `E = +/- sqrt(2 nu g)`. Roots are located by a
//! sign-change scan in `nu` followed by bracketed Brent refinement.
//!
//! Completeness caveat: per-interval uniqueness of the massless roots has an
//! analytic basis, but for `alpha != 0` completeness rests on the scan
//! resolution (default step 0.05, refined to 0.01 when two brackets touch).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{hermite_fn, HermiteOrder, SeriesConfig};

/// Default scan step in `nu`; the lowest root spacing in the supported
/// window is around 0.9.
pub const DEFAULT_SCAN_STEP: f64 = 0.05;

/// Fallback step used when a scan produces touching brackets.
const FINE_SCAN_STEP: f64 = 0.01;

/// Default refinement tolerance on `nu`. Tight enough that matching-constant
/// ratios built from a refined root are accurate to ~1e-12, which the
/// wavefunction symmetry diagnostics depend on.
pub const DEFAULT_REFINE_TOL: f64 = 1e-12;

const MAX_REFINE_ITERATIONS: usize = 200;

/// Hard ceiling on the auto-extended scan window.
const NU_WINDOW_LIMIT: f64 = 1e6;

/// Mass and coupling of the problem, with the dimensionless combination
/// `alpha = m / sqrt(g)` cached. The roots `nu_n` depend on the parameters
/// only through `alpha`; `g` sets the energy scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    m: f64,
    g: f64,
    alpha: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, g: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::InvalidInput("mass must be finite and non-negative"));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidInput("coupling must be finite and positive"));
        }
        Ok(Self {
            m,
            g,
            alpha: m / g.sqrt(),
        })
    }

    /// Parameters with unit coupling, so `m = alpha`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn coupling(&self) -> f64 {
        self.g
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A `nu`-interval with a confirmed sign change of the spectral function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub nu_lo: f64,
    pub nu_hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(nu_lo: f64, nu_hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(nu_lo < nu_hi) {
            return Err(Error::InvalidInput("bracket endpoints must be ordered"));
        }
        if f_lo == 0.0 || f_hi == 0.0 || (f_lo < 0.0) == (f_hi < 0.0) {
            return Err(Error::InvalidInput(
                "bracket endpoints must carry a strict sign change",
            ));
        }
        Ok(Self {
            nu_lo,
            nu_hi,
            f_lo,
            f_hi,
        })
    }

    pub fn width(&self) -> f64 {
        self.nu_hi - self.nu_lo
    }
}

/// How an eigenvalue was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    SpectralCondition,
    ShootingOracle,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveMethod::SpectralCondition => f.write_str("spectral-condition"),
            SolveMethod::ShootingOracle => f.write_str("shooting-oracle"),
        }
    }
}

/// One bound-state level: the root `nu_n`, the symmetric energy pair
/// `+/- sqrt(2 nu g)` and the refinement residual.
///
/// `residual` is `|f(nu_n; alpha)|` normalized by the positive companion sum
/// `H_nu^2 + 2 nu H_{nu-1}^2`, which makes it scale-free: the raw `f` grows
/// like `H^2` (about `1e10` already at `alpha = 2`, level 4), so only the
/// normalized residual can be compared against tolerances uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub index: usize,
    pub nu: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub residual: f64,
    pub method: SolveMethod,
}

/// The spectral function `f(nu; alpha) = H_nu(alpha)^2 - 2 nu H_{nu-1}(alpha)^2`.
pub fn spectral_fn(nu: f64, alpha: f64) -> Result<f64> {
    spectral_fn_parts(nu, alpha).map(|(f, _)| f)
}

/// Spectral function together with its cancellation-free companion
/// `H_nu^2 + |2 nu| H_{nu-1}^2`, used to normalize residuals.
pub(crate) fn spectral_fn_parts(nu: f64, alpha: f64) -> Result<(f64, f64)> {
    let cfg = SeriesConfig::default();
    let h_nu = hermite_fn(HermiteOrder::new(nu)?, alpha, &cfg)?;
    let h_lower = hermite_fn(HermiteOrder::new(nu - 1.0)?, alpha, &cfg)?;
    let square = h_nu * h_nu;
    let weighted = 2.0 * nu * h_lower * h_lower;
    Ok((square - weighted, square + weighted.abs()))
}

pub(crate) fn normalized_residual(nu: f64, alpha: f64) -> Result<f64> {
    let (f, scale) = spectral_fn_parts(nu, alpha)?;
    if f == 0.0 {
        Ok(0.0)
    } else {
        Ok(f.abs() / scale)
    }
}

/// Scan `(0, nu_max]` for sign changes of `f(.; alpha)`.
///
/// The scan starts from the known `f(0; alpha) = 1 > 0`, samples at
/// `step, 2 step, ...` and records every sign change. A sample that lands
/// exactly on a root is nudged by `step * 1e-3` and re-evaluated. If two
/// brackets share a node the whole scan is redone at step 0.01.
pub fn bracket_roots(alpha: f64, nu_max: f64, step: f64) -> Result<Vec<Bracket>> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidInput("alpha must be finite and non-negative"));
    }
    if !(nu_max.is_finite() && nu_max > 0.0) {
        return Err(Error::InvalidInput("nu_max must be finite and positive"));
    }
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidInput("step must lie in (0, 0.5]"));
    }
    let brackets = scan(alpha, nu_max, step)?;
    if step > FINE_SCAN_STEP && has_touching_pair(&brackets) {
        return scan(alpha, nu_max, FINE_SCAN_STEP);
    }
    Ok(brackets)
}

fn scan(alpha: f64, nu_max: f64, step: f64) -> Result<Vec<Bracket>> {
    let mut out = Vec::new();
    let mut prev_nu = 0.0_f64;
    let mut prev_f = 1.0_f64; // f(0; alpha) = 1: H_0 = 1 and the second term vanishes
    let mut i = 0u64;
    loop {
        i += 1;
        let mut nu = (i as f64 * step).min(nu_max);
        let mut f = spectral_fn(nu, alpha)?;
        if !f.is_finite() {
            return Err(Error::ScanFailure { at: nu });
        }
        if f == 0.0 {
            // measure-zero event: move off the node and rebracket
            nu += step * 1e-3;
            f = spectral_fn(nu, alpha)?;
            if !f.is_finite() || f == 0.0 {
                return Err(Error::ScanFailure { at: nu });
            }
        }
        if (prev_f < 0.0) != (f < 0.0) {
            out.push(Bracket::new(prev_nu, nu, prev_f, f)?);
        }
        if nu >= nu_max {
            return Ok(out);
        }
        prev_nu = nu;
        prev_f = f;
    }
}

fn has_touching_pair(brackets: &[Bracket]) -> bool {
    brackets.windows(2).any(|w| w[0].nu_hi == w[1].nu_lo)
}

/// Refine a bracketed root of `f(.; alpha)` with Brent's method (bisection
/// hybridized with inverse quadratic interpolation).
///
/// Returns a point strictly inside the initial bracket with
/// `|f|` at the level implied by `tol` and the local slope; the bracket is
/// narrowed below `tol`.
pub fn refine_root(bracket: &Bracket, alpha: f64, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput("tol must be finite and positive"));
    }
    let mut a = bracket.nu_lo;
    let mut b = bracket.nu_hi;
    let mut fa = bracket.f_lo;
    let mut fb = bracket.f_hi;
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iteration in 0..MAX_REFINE_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        // Convergence is only honored after the first step so the result is
        // interior to the caller's bracket even for loose tolerances (the
        // bracket endpoints are guaranteed off the root).
        if fb == 0.0 || (xm.abs() <= tol1 && iteration > 0) {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation (secant when a == c)
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            // minimum step, capped at the midpoint so convergence checks
            // deferred past the first iteration cannot push b out of the
            // bracket when tol is loose
            b += xm.signum() * tol1.min(xm.abs());
        }
        fb = spectral_fn(b, alpha)?;
    }
    Err(Error::MaxIterations)
}

/// The `count` lowest levels for the given parameters, by scanning and
/// refining the quantization condition at the default tolerance.
pub fn eigenvalues(params: &PhysicalParams, count: usize) -> Result<Vec<EigenvalueRecord>> {
    eigenvalues_with_tol(params, count, DEFAULT_REFINE_TOL)
}

/// As [`eigenvalues`], with an explicit refinement tolerance on `nu`. The
/// scan window starts near `2 count + alpha^2` and doubles until `count`
/// brackets are found.
pub fn eigenvalues_with_tol(
    params: &PhysicalParams,
    count: usize,
    tol: f64,
) -> Result<Vec<EigenvalueRecord>> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1"));
    }
    let alpha = params.alpha();
    let mut nu_max = 2.0 * count as f64 + alpha * alpha + 1.0;
    loop {
        let brackets = bracket_roots(alpha, nu_max, DEFAULT_SCAN_STEP)?;
        if brackets.len() >= count {
            let mut records = Vec::with_capacity(count);
            for (index, bracket) in brackets.iter().take(count).enumerate() {
                let nu = refine_root(bracket, alpha, tol)?;
                let residual = normalized_residual(nu, alpha)?;
                let e = (2.0 * nu * params.coupling()).sqrt();
                records.push(EigenvalueRecord {
                    index,
                    nu,
                    e_plus: e,
                    e_minus: -e,
                    residual,
                    method: SolveMethod::SpectralCondition,
                });
            }
            return Ok(records);
        }
        nu_max *= 2.0;
        if nu_max > NU_WINDOW_LIMIT {
            return Err(Error::ScanFailure { at: nu_max });
        }
    }
}

/// Residuals of the integer-level conditions
/// `H_{n+1}(alpha) -/+ sqrt(2(n+1)) H_n(alpha)`.
///
/// Both vanish only if level `n` of the integer spectrum survives; their
/// product equals `f(n+1; alpha)` identically (difference of squares), which
/// ties the integer conditions to the quantization condition.
pub fn br_condition_residual(n: u32, alpha: f64) -> Result<(f64, f64)> {
    let cfg = SeriesConfig::default();
    let upper = f64::from(n) + 1.0;
    let h_upper = hermite_fn(HermiteOrder::new(upper)?, alpha, &cfg)?;
    let h_lower = hermite_fn(HermiteOrder::new(f64::from(n))?, alpha, &cfg)?;
    let shift = (2.0 * upper).sqrt() * h_lower;
    Ok((h_upper - shift, h_upper + shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference roots printed to six decimals.
    const TABLE_ALPHA0: [f64; 5] = [0.345_459, 1.548_571, 2.468_573, 3.522_295, 4.482_395];
    const TABLE_ALPHA1: [f64; 5] = [1.396_274, 3.056_760, 4.306_277, 5.615_211, 6.804_771];
    const TABLE_ALPHA2: [f64; 5] = [3.338_595, 5.452_161, 7.006_087, 8.568_946, 9.978_608];

    #[test]
    fn params_invariants() {
        let p = PhysicalParams::new(2.0, 4.0).unwrap();
        assert_eq!(p.alpha(), 1.0);
        assert!(PhysicalParams::new(-1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, -2.0).is_err());
        assert_eq!(PhysicalParams::from_alpha(1.5).unwrap().mass(), 1.5);
    }

    #[test]
    fn bracket_requires_sign_change() {
        assert!(Bracket::new(0.3, 0.4, -1.0, 2.0).is_ok());
        assert!(Bracket::new(0.4, 0.3, -1.0, 2.0).is_err());
        assert!(Bracket::new(0.3, 0.4, 1.0, 2.0).is_err());
        assert!(Bracket::new(0.3, 0.4, 0.0, 2.0).is_err());
    }

    #[test]
    fn spectral_fn_closed_form_points() {
        for &alpha in &[0.0, 0.5, 1.0, 2.0] {
            assert_relative_eq!(spectral_fn(0.0, alpha).unwrap(), 1.0, max_relative = 1e-12);
        }
        // H_1(0) = 0 exactly, H_0 = 1: f(1; 0) = -2.
        assert_relative_eq!(spectral_fn(1.0, 0.0).unwrap(), -2.0, max_relative = 1e-14);
        // H_2(0) = -2, H_1(0) = 0: f(2; 0) = 4.
        assert_relative_eq!(spectral_fn(2.0, 0.0).unwrap(), 4.0, max_relative = 1e-14);
        // ground-state root from the reference table
        assert!(spectral_fn(0.345_459, 0.0).unwrap().abs() < 1e-5);
    }

    #[test]
    fn massless_sign_pattern_is_exact() {
        for k in 0..=10 {
            let f = spectral_fn(2.0 * k as f64, 0.0).unwrap();
            assert!(f > 0.0, "f({}; 0) = {f} not positive", 2 * k);
        }
        for k in 0..=9 {
            let f = spectral_fn(2.0 * k as f64 + 1.0, 0.0).unwrap();
            assert!(f < 0.0, "f({}; 0) = {f} not negative", 2 * k + 1);
        }
    }

    #[test]
    fn bracket_scan_massless() {
        let brackets = bracket_roots(0.0, 5.0, 0.05).unwrap();
        assert_eq!(brackets.len(), 5);
        for (n, b) in brackets.iter().enumerate() {
            assert!(b.nu_lo > n as f64 && b.nu_hi < (n + 1) as f64 + 1e-9);
            assert!(b.width() <= 0.05 + 1e-12);
        }
    }

    #[test]
    fn bracket_scan_alpha2_finds_nothing_below_first_root() {
        assert!(bracket_roots(2.0, 3.0, 0.05).unwrap().is_empty());
    }

    #[test]
    fn bracket_scan_alpha1() {
        // All five tabulated alpha = 1 roots sit below nu = 7.
        let brackets = bracket_roots(1.0, 7.0, 0.05).unwrap();
        assert_eq!(brackets.len(), 5);
        for (b, root) in brackets.iter().zip(&TABLE_ALPHA1) {
            assert!(b.nu_lo < *root && *root < b.nu_hi);
        }
        // The first three are isolated by a window up to nu = 5.
        assert_eq!(bracket_roots(1.0, 5.0, 0.05).unwrap().len(), 3);
    }

    #[test]
    fn bracket_scan_rejects_bad_arguments() {
        assert!(bracket_roots(-1.0, 5.0, 0.05).is_err());
        assert!(bracket_roots(0.0, 0.0, 0.05).is_err());
        assert!(bracket_roots(0.0, 5.0, 0.0).is_err());
        assert!(bracket_roots(0.0, 5.0, 0.7).is_err());
    }

    fn bracket_at(lo: f64, hi: f64, alpha: f64) -> Bracket {
        Bracket::new(
            lo,
            hi,
            spectral_fn(lo, alpha).unwrap(),
            spectral_fn(hi, alpha).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn refine_reference_roots() {
        let b = bracket_at(0.3, 0.4, 0.0);
        let root = refine_root(&b, 0.0, 1e-9).unwrap();
        assert!((root - 0.345_459).abs() < 1e-6);
        assert!(root > 0.3 && root < 0.4);

        let b = bracket_at(1.5, 1.6, 0.0);
        let root = refine_root(&b, 0.0, 1e-9).unwrap();
        assert!((root - 1.548_571).abs() < 1e-6);

        let b = bracket_at(9.5, 10.1, 2.0);
        let root = refine_root(&b, 2.0, 1e-9).unwrap();
        assert!((root - 9.978_608).abs() < 1e-6);
    }

    #[test]
    fn refine_with_loose_tolerance_stays_interior() {
        let b = bracket_at(0.3, 0.4, 0.0);
        let root = refine_root(&b, 0.0, 0.5).unwrap();
        assert!(root > 0.3 && root < 0.4);
    }

    #[test]
    fn eigenvalues_match_reference_table() {
        for (alpha, table) in [
            (0.0, &TABLE_ALPHA0),
            (1.0, &TABLE_ALPHA1),
            (2.0, &TABLE_ALPHA2),
        ] {
            let params = PhysicalParams::from_alpha(alpha).unwrap();
            let records = eigenvalues(&params, 5).unwrap();
            for (record, reference) in records.iter().zip(table.iter()) {
                assert!(
                    (record.nu - reference).abs() <= 5e-6,
                    "alpha={alpha}: nu={} vs reference {reference}",
                    record.nu
                );
            }
        }
    }

    #[test]
    fn eigenvalue_records_are_ordered_with_small_residuals() {
        let params = PhysicalParams::from_alpha(2.0).unwrap();
        let records = eigenvalues(&params, 5).unwrap();
        for pair in records.windows(2) {
            assert!(pair[0].nu < pair[1].nu);
        }
        for r in &records {
            assert!(r.nu > 0.0);
            assert!(r.residual < 1e-10, "normalized residual {}", r.residual);
            assert_eq!(r.method, SolveMethod::SpectralCondition);
            assert_relative_eq!(r.e_plus, (2.0 * r.nu).sqrt(), max_relative = 1e-15);
            assert_eq!(r.e_plus, -r.e_minus);
        }
    }

    #[test]
    fn energies_scale_with_coupling() {
        // nu depends only on alpha; E scales as sqrt(g).
        let massless_g2 = PhysicalParams::new(0.0, 2.0).unwrap();
        let records = eigenvalues(&massless_g2, 1).unwrap();
        assert!((records[0].nu - 0.345_459).abs() < 5e-6);
        assert_relative_eq!(
            records[0].e_plus,
            (4.0 * records[0].nu).sqrt(),
            max_relative = 1e-14
        );

        let heavy = PhysicalParams::new(2.0, 1.0).unwrap();
        let first = &eigenvalues(&heavy, 1).unwrap()[0];
        assert!((first.nu - 3.338_595).abs() < 5e-6);
        assert_relative_eq!(first.e_plus, (2.0 * 3.338_595_f64).sqrt(), epsilon = 1e-5);
    }

    #[test]
    fn alpha_invariance_of_roots() {
        let a = eigenvalues(&PhysicalParams::new(1.0, 1.0).unwrap(), 4).unwrap();
        let b = eigenvalues(&PhysicalParams::new(2.0, 4.0).unwrap(), 4).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            assert!((ra.nu - rb.nu).abs() <= 1e-9);
        }
    }

    #[test]
    fn eigenvalues_reject_zero_count() {
        let params = PhysicalParams::from_alpha(0.0).unwrap();
        assert!(eigenvalues(&params, 0).is_err());
    }

    #[test]
    fn integer_condition_residuals_at_origin() {
        // H_1(0) = 0, H_0(0) = 1: residuals (-sqrt 2, +sqrt 2).
        let (r_plus, r_minus) = br_condition_residual(0, 0.0).unwrap();
        assert_relative_eq!(r_plus, -std::f64::consts::SQRT_2, max_relative = 1e-13);
        assert_relative_eq!(r_minus, std::f64::consts::SQRT_2, max_relative = 1e-13);
    }

    #[test]
    fn integer_condition_factorizes_spectral_fn() {
        for &alpha in &[0.0, 1.0, 2.0] {
            for n in 0..=6 {
                let (r_plus, r_minus) = br_condition_residual(n, alpha).unwrap();
                let f = spectral_fn(f64::from(n) + 1.0, alpha).unwrap();
                assert_relative_eq!(r_plus * r_minus, f, max_relative = 1e-10, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn no_integer_level_survives_at_alpha_one() {
        for n in 0..=4 {
            let (r_plus, r_minus) = br_condition_residual(n, 1.0).unwrap();
            assert!(
                r_plus.abs().min(r_minus.abs()) > 0.01,
                "integer level n={n} nearly satisfied at alpha=1"
            );
        }
    }
}
