//! Space-time assembly of the source solution
//! u(x, t) = t^{-a} U(-|x| t^{-a}) with a = alpha/(2+m), plus tabular export.
//!
//! The profile is solved on the negative half-axis; the solution is even in
//! x, supported on |x| <= z0 t^a. Exports are plain text, '#'-prefixed
//! metadata lines followed by a header and 17-significant-digit rows, so
//! that repeated runs are byte-identical and rows re-parse to the same bits.

use crate::error::Error;
use crate::kernel::FractionalParams;
use crate::profile::Profile;

const WEIGHT_NORMALIZATION: &str = "w[n,i] = (m+1)/(Gamma(1-alpha)*h) * GL16 panel integral of K";

/// Similarity exponent a = alpha/(2+m).
pub fn similarity_exponent(p: &FractionalParams) -> f64 {
    p.coeff_b()
}

/// Immutable space-time solution; all evaluation is read-only.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeSolution {
    params: FractionalParams,
    profile: Profile,
    similarity_exponent: f64,
}

impl SpaceTimeSolution {
    pub fn new(params: FractionalParams, profile: Profile) -> Self {
        let similarity_exponent = similarity_exponent(&params);
        SpaceTimeSolution {
            params,
            profile,
            similarity_exponent,
        }
    }

    pub fn params(&self) -> &FractionalParams {
        &self.params
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn similarity_exponent(&self) -> f64 {
        self.similarity_exponent
    }

    /// Support radius z0 t^a at time t.
    pub fn support_radius(&self, t: f64) -> Result<f64, Error> {
        check_time(t)?;
        Ok(self.profile.grid().z0() * t.powf(self.similarity_exponent))
    }

    /// u(x, t) = t^{-a} U(-|x| t^{-a}), zero outside the support. Off-grid
    /// points use linear interpolation of the profile.
    pub fn evaluate_u(&self, x: f64, t: f64) -> Result<f64, Error> {
        check_time(t)?;
        if x.is_nan() {
            return Err(Error::Domain("x must not be NaN".to_string()));
        }
        let ta = t.powf(self.similarity_exponent);
        let z = -(x.abs() / ta);
        if z < -self.profile.grid().z0() {
            return Ok(0.0);
        }
        Ok(self.profile.interpolate(z) / ta)
    }

    /// 2 * trapezoid of u over the mapped grid x_j = z_j t^a. Change of
    /// variables makes the value t-independent up to interpolation error.
    pub fn total_mass(&self, t: f64) -> Result<f64, Error> {
        check_time(t)?;
        let ta = t.powf(self.similarity_exponent);
        let grid = self.profile.grid();
        let n = grid.n_steps();
        let mut sum = 0.0;
        let mut x_prev = grid.node(0) * ta;
        let mut v_prev = self.evaluate_u(x_prev, t)?;
        for j in 1..=n {
            let x = grid.node(j) * ta;
            let v = self.evaluate_u(x, t)?;
            sum += (x - x_prev) * 0.5 * (v_prev + v);
            x_prev = x;
            v_prev = v;
        }
        Ok(2.0 * sum)
    }
}

fn check_time(t: f64) -> Result<(), Error> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!("time must be positive, got {}", t)));
    }
    Ok(())
}

fn metadata(sol: &SpaceTimeSolution, tol: f64, kind: &str) -> String {
    let p = sol.params();
    let grid = sol.profile().grid();
    format!(
        "# barenblatt {}\n# version = {}\n# alpha = {:.16e}\n# m = {:.16e}\n# z0_star = {:.16e}\n# n_steps = {}\n# tol = {:.16e}\n# weights = {}\n",
        kind,
        env!("CARGO_PKG_VERSION"),
        p.alpha(),
        p.m(),
        grid.z0(),
        grid.n_steps(),
        tol,
        WEIGHT_NORMALIZATION
    )
}

/// (z, U) node pairs, optionally with the even reflection onto (0, z0].
fn profile_rows(profile: &Profile, reflected: bool) -> Vec<(f64, f64)> {
    let grid = profile.grid();
    let n = grid.n_steps();
    let mut rows = Vec::with_capacity(if reflected { 2 * n + 1 } else { n + 1 });
    for i in 0..=n {
        rows.push((grid.node(i), profile.value(i)));
    }
    if reflected {
        for i in (0..n).rev() {
            rows.push((-grid.node(i), profile.value(i)));
        }
    }
    rows
}

/// CSV profile table: metadata, "z,U" header, then N+1 rows (2N+1 when
/// reflected).
pub fn export_profile_csv(sol: &SpaceTimeSolution, tol: f64, reflected: bool) -> String {
    let mut out = metadata(sol, tol, "profile");
    out.push_str("z,U\n");
    for (z, u) in profile_rows(sol.profile(), reflected) {
        out.push_str(&format!("{:.16e},{:.16e}\n", z, u));
    }
    out
}

/// JSON profile export: one flat object, metadata fields plus parallel node
/// arrays.
pub fn export_profile_json(sol: &SpaceTimeSolution, tol: f64, reflected: bool) -> String {
    let rows = profile_rows(sol.profile(), reflected);
    let p = sol.params();
    let value = serde_json::json!({
        "kind": "profile",
        "version": env!("CARGO_PKG_VERSION"),
        "alpha": p.alpha(),
        "m": p.m(),
        "z0_star": sol.profile().grid().z0(),
        "n_steps": sol.profile().grid().n_steps(),
        "tol": tol,
        "weights": WEIGHT_NORMALIZATION,
        "z": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        "u": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
    });
    let mut s = value.to_string();
    s.push('\n');
    s
}

fn solution_rows(sol: &SpaceTimeSolution, times: &[f64]) -> Result<Vec<(f64, f64, f64)>, Error> {
    if times.is_empty() {
        return Err(Error::Domain("at least one time is required".to_string()));
    }
    let mut rows = Vec::new();
    for &t in times {
        check_time(t)?;
        let ta = t.powf(sol.similarity_exponent());
        for (z, u) in profile_rows(sol.profile(), true) {
            rows.push((z * ta, t, u / ta));
        }
    }
    Ok(rows)
}

/// CSV space-time table: for each requested time, the reflected profile
/// mapped to x = z t^a, so 2N+1 rows per time.
pub fn export_solution_csv(
    sol: &SpaceTimeSolution,
    times: &[f64],
    tol: f64,
) -> Result<String, Error> {
    let rows = solution_rows(sol, times)?;
    let mut out = metadata(sol, tol, "solution");
    out.push_str("x,t,u\n");
    for (x, t, u) in rows {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", x, t, u));
    }
    Ok(out)
}

/// JSON space-time export: flat object with parallel x, t, u arrays.
pub fn export_solution_json(
    sol: &SpaceTimeSolution,
    times: &[f64],
    tol: f64,
) -> Result<String, Error> {
    let rows = solution_rows(sol, times)?;
    let p = sol.params();
    let value = serde_json::json!({
        "kind": "solution",
        "version": env!("CARGO_PKG_VERSION"),
        "alpha": p.alpha(),
        "m": p.m(),
        "z0_star": sol.profile().grid().z0(),
        "n_steps": sol.profile().grid().n_steps(),
        "tol": tol,
        "weights": WEIGHT_NORMALIZATION,
        "times": times.to_vec(),
        "x": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        "t": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
        "u": rows.iter().map(|r| r.2).collect::<Vec<_>>(),
    });
    let mut s = value.to_string();
    s.push('\n');
    Ok(s)
}
