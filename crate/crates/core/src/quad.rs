//! Fixed-order Gauss rules and a small globally adaptive Gauss-Kronrod driver.
//!
//! The panel quadrature for the scheme weights uses the 16-point
//! Gauss-Legendre rule; oracles and the kernel's definitional integral use
//! adaptive 7-15 Gauss-Kronrod with absolute-error control.

use crate::error::Error;

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
const GL16: [(f64, f64); 16] = [
    (-9.89400934991649939e-01, 2.71524594117540374e-02),
    (-9.44575023073232600e-01, 6.22535239386477063e-02),
    (-8.65631202387831755e-01, 9.51585116824925914e-02),
    (-7.55404408355002999e-01, 1.24628971255534030e-01),
    (-6.17876244402643771e-01, 1.49595988816576764e-01),
    (-4.58016777657227370e-01, 1.69156519395002619e-01),
    (-2.81603550779258915e-01, 1.82603415044923612e-01),
    (-9.50125098376374544e-02, 1.89450610455068585e-01),
    (9.50125098376374544e-02, 1.89450610455068585e-01),
    (2.81603550779258915e-01, 1.82603415044923612e-01),
    (4.58016777657227370e-01, 1.69156519395002619e-01),
    (6.17876244402643771e-01, 1.49595988816576764e-01),
    (7.55404408355002999e-01, 1.24628971255534030e-01),
    (8.65631202387831755e-01, 9.51585116824925914e-02),
    (9.44575023073232600e-01, 6.22535239386477063e-02),
    (9.89400934991649939e-01, 2.71524594117540374e-02),
];

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae;
// the rule is symmetric). Even indices of XGK are the embedded Gauss points.
const XGK: [f64; 8] = [
    9.914553711208126e-01,
    9.491079123427585e-01,
    8.648644233597691e-01,
    7.415311855993944e-01,
    5.860872354676911e-01,
    4.058451513773972e-01,
    2.077849550078985e-01,
    0.0,
];
const WGK: [f64; 8] = [
    2.293532201052922e-02,
    6.309209262997855e-02,
    1.047900103222502e-01,
    1.406532597155259e-01,
    1.690047266392679e-01,
    1.903505780647854e-01,
    2.044329400752989e-01,
    2.094821410847278e-01,
];
const WG: [f64; 4] = [
    1.294849661688697e-01,
    2.797053914892767e-01,
    3.818300505051189e-01,
    4.179591836734694e-01,
];

/// 16-point Gauss-Legendre approximation of the integral of `f` over [a, b].
pub fn gauss_legendre_16<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in GL16.iter() {
        acc += w * f(c + d * x);
    }
    acc * d
}

/// One Gauss-Kronrod 7-15 evaluation on [a, b]; returns (estimate, error estimate).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = d * XGK[j];
        let fsum = f(c - x) + f(c + x);
        kron += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kron * d, ((kron - gauss) * d).abs())
}

/// Globally adaptive Gauss-Kronrod integration with absolute tolerance `tol`.
///
/// The segment with the largest error estimate is bisected until the summed
/// error estimate drops below `tol` or the number of segments exceeds
/// `max_segments`.
pub fn adaptive_gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_segments: usize,
) -> Result<f64, Error> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "quadrature tolerance must be positive, got {}",
            tol
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let (val, err) = gk15(&mut f, a, b);
    let mut segments = vec![(a, b, val, err)];
    loop {
        let total_err: f64 = segments.iter().map(|s| s.3).sum();
        if total_err <= tol {
            return Ok(segments.iter().map(|s| s.2).sum());
        }
        if segments.len() >= max_segments {
            return Err(Error::QuadratureTolerance {
                requested: tol,
                achieved: total_err,
                subdivisions: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}
