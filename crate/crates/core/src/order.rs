//! Empirical convergence-order estimation by grid halving.
//!
//! Three solves at N, 2N, 4N with identical parameters and support width;
//! the order is p = log2 of the ratio of successive max shared-node
//! differences. z0 is deliberately held fixed across the three grids (no
//! re-matching), so the extrapolation sees one continuous limit and the
//! root-finder error stays out of the estimate.

use crate::error::Error;
use crate::kernel::FractionalParams;
use crate::profile::{solve_profile, Profile};

#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub params: FractionalParams,
    pub z0: f64,
    pub base_n: usize,
    /// max_n |U^(N)_n - U^(2N)_{2n}|
    pub diff_coarse: f64,
    /// max_n |U^(2N)_n - U^(4N)_{2n}|
    pub diff_fine: f64,
    /// log2(diff_coarse / diff_fine)
    pub p_estimate: f64,
}

/// Max over coarse nodes of |U^coarse_n - U^fine_{2n}|. The fine grid must
/// have exactly twice the steps of the coarse one, on the same support.
pub fn shared_node_difference(coarse: &Profile, fine: &Profile) -> Result<f64, Error> {
    let nc = coarse.grid().n_steps();
    if fine.grid().n_steps() != 2 * nc {
        return Err(Error::GridMismatch(format!(
            "fine grid must have exactly twice the coarse steps: {} vs {}",
            fine.grid().n_steps(),
            nc
        )));
    }
    if fine.grid().z0() != coarse.grid().z0() {
        return Err(Error::GridMismatch(format!(
            "grids cover different supports: z0 = {} vs {}",
            fine.grid().z0(),
            coarse.grid().z0()
        )));
    }
    let mut max = 0.0f64;
    for n in 0..=nc {
        max = max.max((coarse.value(n) - fine.value(2 * n)).abs());
    }
    Ok(max)
}

/// Runs the three solves and assembles the report. base_n must be at least
/// 2^6 so that the coarse grid is already in the asymptotic regime.
pub fn estimate_order(p: &FractionalParams, z0: f64, base_n: usize) -> Result<OrderReport, Error> {
    if base_n < 64 {
        return Err(Error::Domain(format!(
            "base_n must be at least 64, got {}",
            base_n
        )));
    }
    let coarse = solve_profile(p, z0, base_n)?;
    let mid = solve_profile(p, z0, 2 * base_n)?;
    let fine = solve_profile(p, z0, 4 * base_n)?;
    let diff_coarse = shared_node_difference(&coarse, &mid)?;
    let diff_fine = shared_node_difference(&mid, &fine)?;
    if diff_fine == 0.0 || diff_coarse == 0.0 {
        return Err(Error::Domain(
            "degenerate order estimate: grid refinement produced identical profiles".to_string(),
        ));
    }
    Ok(OrderReport {
        params: p.clone(),
        z0,
        base_n,
        diff_coarse,
        diff_fine,
        p_estimate: (diff_coarse / diff_fine).log2(),
    })
}
