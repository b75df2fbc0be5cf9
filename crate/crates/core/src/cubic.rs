//! Trigonometric solution of real cubics with three real roots.
//!
//! Both the normal-mode frequencies and the symplectic eigenvalues of a
//! three-mode covariance matrix come from characteristic polynomials of
//! real symmetric (or similar-to-symmetric) 3×3 matrices, so all roots are
//! real and the Viète cosine form applies. Solving in that form, rather
//! than through a general eigensolver, keeps the labeling of the roots
//! tied to a fixed phase convention instead of to an arbitrary sort order.

use crate::{Error, Result};

/// Roots of `μ³ − b μ² + c μ − d = 0`, all real, in the fixed labeling
///
/// ```text
/// μ_k = ( b + 2 √p cos(Φ + φ_k) ) / 3 ,   φ = (0, +2π/3, −2π/3)
/// p = b² − 3c ,   q = b³ − (9/2) b c + (27/2) d ,
/// Φ = atan2( √(p³ − q²), q ) / 3 .
/// ```
///
/// With this phase choice `μ₁ ≥ μ₃ ≥ μ₂`. The labels are part of the
/// contract: callers rely on them and must not re-sort.
///
/// Returns an error when the discriminant `p³ − q²` or `p` is negative
/// beyond roundoff, which signals a complex conjugate pair.
pub(crate) fn roots(b: f64, c: f64, d: f64) -> Result<[f64; 3]> {
    let p = b * b - 3.0 * c;
    let q = b * b * b - 4.5 * b * c + 13.5 * d;

    // Scale for roundoff decisions: coefficient sizes in the units of p^3.
    let scale = (b * b).max(c.abs()).max(d.abs().powf(2.0 / 3.0)).max(1.0);
    let p_tol = 1e-12 * scale;
    if p < -p_tol {
        return Err(Error::Domain {
            context: "cubic::roots",
            detail: format!("p = {p:e} < 0, complex root pair"),
        });
    }
    let p = p.max(0.0);

    let disc = p.powi(3) - q * q;
    let d_tol = 1e-10 * scale.powi(3);
    if disc < -d_tol {
        return Err(Error::Domain {
            context: "cubic::roots",
            detail: format!("discriminant {disc:e} < 0, complex root pair"),
        });
    }
    let phi = f64::atan2(disc.max(0.0).sqrt(), q) / 3.0;

    let sp = p.sqrt();
    let third = 2.0 * std::f64::consts::FRAC_PI_3;
    Ok([
        polish_root((b + 2.0 * sp * phi.cos()) / 3.0, b, c, d),
        polish_root((b + 2.0 * sp * (phi + third).cos()) / 3.0, b, c, d),
        polish_root((b + 2.0 * sp * (phi - third).cos()) / 3.0, b, c, d),
    ])
}

/// Newton cleanup of a trig-form root. Near a repeated root the cosine
/// form only resolves the roots to about √ε (the discriminant is
/// computed with absolute roundoff), so plain Newton would stall there
/// too; estimating the multiplicity from `L = f f″ / f′²` and stepping
/// `m f / f′` restores quadratic convergence for simple, double, and
/// triple roots alike. Steps are capped so a root can never wander to a
/// different one and break the labeling.
fn polish_root(mut x: f64, b: f64, c: f64, d: f64) -> f64 {
    for _ in 0..3 {
        let f = ((x - b) * x + c) * x - d;
        let fp = (3.0 * x - 2.0 * b) * x + c;
        if f == 0.0 || fp == 0.0 {
            break;
        }
        let l = f * (6.0 * x - 2.0 * b) / (fp * fp);
        let m = if l.is_finite() {
            (1.0 / (1.0 - l)).round().clamp(1.0, 3.0)
        } else {
            1.0
        };
        let m = if m.is_finite() { m } else { 1.0 };
        let step = m * f / fp;
        if !step.is_finite() || step.abs() > 1e-3 * (1.0 + x.abs()) {
            break;
        }
        x -= step;
    }
    x
}

/// Roots labeled as in [`roots`], for the characteristic polynomial of a
/// real symmetric 3×3 matrix given by its trace, the sum of its 2×2
/// principal minors, and its determinant.
pub(crate) fn roots_from_invariants(tr: f64, minor_sum: f64, det: f64) -> Result<[f64; 3]> {
    roots(tr, minor_sum, det)
}
