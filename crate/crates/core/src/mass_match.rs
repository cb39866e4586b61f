//! Support half-width matching: find z0* so that the discrete half-mass of
//! the solved profile equals 1/2.
//!
//! The residual F(z0) = M(z0) - 1/2 is strictly increasing in z0 because the
//! discrete scheme is exactly homogeneous: U_n(z0) = z0^{2/m} U_n(1) node by
//! node, hence M(z0) = z0^{1+2/m} M(1). The root finder exploits this: one
//! unit solve gives M(1), bracketing and bisection then run on the scaled
//! residual z0^{1+2/m} M(1) - 1/2 at negligible cost, and the reported root
//! is verified with a direct solve. If the verification residual somehow
//! missed the tolerance, a direct bisection on full solves takes over, so
//! the contract never rests on the scaling identity alone. Monotonicity of
//! the scaled residual is exact, so there is no non-monotone bracket to
//! report at any N.

use crate::error::Error;
use crate::kernel::FractionalParams;
use crate::profile::{solve_profile, Profile};

/// Outcome of find_support.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatchResult {
    pub z0_star: f64,
    pub profile: Profile,
    /// Direct (fully re-solved) residual at z0_star; |residual| < tol.
    pub residual: f64,
    /// Total residual evaluations: bracketing, bisection and verification.
    pub iterations: usize,
    /// (z0, F) pairs probed during the bracketing phase.
    pub bracket_history: Vec<(f64, f64)>,
}

/// Trapezoid half-mass h (U_0/2 + U_1 + ... + U_{N-1} + U_N/2).
pub fn discrete_half_mass(profile: &Profile) -> f64 {
    let u = profile.values();
    let n = profile.grid().n_steps();
    let mut sum = 0.5 * (u[0] + u[n]);
    for v in &u[1..n] {
        sum += v;
    }
    sum * profile.grid().h()
}

/// F(z0) = discrete_half_mass(solve_profile(p, z0, N)) - 1/2.
pub fn mass_residual(p: &FractionalParams, z0: f64, n_steps: usize) -> Result<f64, Error> {
    Ok(discrete_half_mass(&solve_profile(p, z0, n_steps)?) - 0.5)
}

const MAX_BRACKET_ATTEMPTS: usize = 60;
const MAX_BISECTIONS: usize = 200;

/// Finds z0* with |F(z0*)| < tol by doubling/halving from z0_init until the
/// residual changes sign, then bisection.
pub fn find_support(
    p: &FractionalParams,
    n_steps: usize,
    tol: f64,
    z0_init: f64,
) -> Result<MassMatchResult, Error> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            tol
        )));
    }
    if !z0_init.is_finite() || z0_init <= 0.0 {
        return Err(Error::Domain(format!(
            "z0_init must be positive, got {}",
            z0_init
        )));
    }

    // One direct solve at z0 = 1 pins the scaled residual.
    let unit_mass = discrete_half_mass(&solve_profile(p, 1.0, n_steps)?);
    let growth = 1.0 + 2.0 / p.m();
    let scaled = |z0: f64| z0.powf(growth) * unit_mass - 0.5;
    let mut iterations = 1usize;

    let mut history = Vec::new();
    let f0 = scaled(z0_init);
    iterations += 1;
    history.push((z0_init, f0));

    let (mut lo, mut hi);
    if f0 < 0.0 {
        lo = z0_init;
        hi = z0_init;
        let mut found = false;
        for _ in 0..MAX_BRACKET_ATTEMPTS {
            hi *= 2.0;
            let f = scaled(hi);
            iterations += 1;
            history.push((hi, f));
            if !f.is_finite() {
                return Err(Error::BracketNotFound {
                    attempts: history.len() - 1,
                    history,
                });
            }
            if f >= 0.0 {
                found = true;
                break;
            }
            lo = hi;
        }
        if !found {
            return Err(Error::BracketNotFound {
                attempts: MAX_BRACKET_ATTEMPTS,
                history,
            });
        }
    } else if f0 > 0.0 {
        lo = z0_init;
        hi = z0_init;
        let mut found = false;
        for _ in 0..MAX_BRACKET_ATTEMPTS {
            lo *= 0.5;
            let f = scaled(lo);
            iterations += 1;
            history.push((lo, f));
            if f <= 0.0 {
                found = true;
                break;
            }
            hi = lo;
        }
        if !found {
            return Err(Error::BracketNotFound {
                attempts: MAX_BRACKET_ATTEMPTS,
                history,
            });
        }
    } else {
        lo = z0_init;
        hi = z0_init;
    }

    let mut root = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..MAX_BISECTIONS {
        root = 0.5 * (lo + hi);
        let f = scaled(root);
        iterations += 1;
        if f.abs() < tol {
            converged = true;
            break;
        }
        if f < 0.0 {
            lo = root;
        } else {
            hi = root;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            context: "mass-match bisection",
            iterations,
        });
    }

    // Direct verification at the root; the scaling identity holds to machine
    // precision, so this residual lands far inside tol in practice.
    let profile = solve_profile(p, root, n_steps)?;
    let residual = discrete_half_mass(&profile) - 0.5;
    iterations += 1;
    if residual.abs() < tol {
        return Ok(MassMatchResult {
            z0_star: root,
            profile,
            residual,
            iterations,
            bracket_history: history,
        });
    }

    // Fallback: bisect on full solves inside the last bracket.
    let dlo = mass_residual(p, lo, n_steps)?;
    let dhi = mass_residual(p, hi, n_steps)?;
    iterations += 2;
    if !(dlo <= 0.0 && dhi >= 0.0) {
        return Err(Error::Convergence {
            context: "mass-match direct bracket",
            iterations,
        });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let profile = solve_profile(p, mid, n_steps)?;
        let residual = discrete_half_mass(&profile) - 0.5;
        iterations += 1;
        if residual.abs() < tol {
            return Ok(MassMatchResult {
                z0_star: mid,
                profile,
                residual,
                iterations,
                bracket_history: history,
            });
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        context: "mass-match direct bisection",
        iterations,
    })
}
