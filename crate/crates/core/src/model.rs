//! System parameters and normal-mode data.
//!
//! The Hamiltonian in position/momentum form is
//!
//! ```text
//! H = ½ Σ_j (p_j² + ω_j² x_j²) + Σ_{j<k} J_jk x_j x_k ,
//! ```
//!
//! i.e. a quadratic form `½ pᵀp + ½ xᵀ 𝕍 x` with the potential matrix `𝕍`
//! holding `ω_j²` on the diagonal and the couplings `J_jk` off it. The
//! spectrum is bound (all normal frequencies real) exactly when `𝕍` is
//! positive definite. Diagonalizing `𝕍 = R diag(Ω²) Rᵀ` yields the normal
//! frequencies `Ω_j`, the mode rotation `R` (encoded as z-y-z Euler
//! angles), and per-mode squeeze parameters `r_j = ½ ln(Ω_j/ω_j)`; these
//! feed the symplectic factorization of the propagator.

use nalgebra::Matrix3;

use crate::{cubic, Error, Result};

/// Model parameters: bare frequencies, couplings, decoherence rate.
///
/// Couplings are stored in the fixed bond order `(J₁₂, J₁₃, J₂₃)`; the same
/// order is used everywhere a per-bond triple appears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Bare frequencies `(ω₁, ω₂, ω₃)`, all positive.
    pub omega: [f64; 3],
    /// Position-position couplings `(J₁₂, J₁₃, J₂₃)`.
    pub coupling: [f64; 3],
    /// Intrinsic decoherence rate `Γ` (positive; ignored in the
    /// Schrödinger limit).
    pub gamma: f64,
    /// When set, evolve unitarily (the formal `Γ → ∞` limit).
    pub schrodinger_limit: bool,
}

impl SystemParams {
    pub fn new(omega: [f64; 3], coupling: [f64; 3], gamma: f64) -> Result<Self> {
        let p = Self {
            omega,
            coupling,
            gamma,
            schrodinger_limit: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn schrodinger(omega: [f64; 3], coupling: [f64; 3]) -> Result<Self> {
        let p = Self {
            omega,
            coupling,
            gamma: 1.0,
            schrodinger_limit: true,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks finiteness and positivity constraints (not boundness; see
    /// [`validate_bound_state`]).
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.omega.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidParameter(format!("omega{} = {w}", i + 1)));
            }
        }
        for (name, j) in ["J12", "J13", "J23"].iter().zip(&self.coupling) {
            if !j.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {j}")));
            }
        }
        if !self.schrodinger_limit && (!self.gamma.is_finite() || self.gamma <= 0.0) {
            return Err(Error::InvalidParameter(format!("gamma = {}", self.gamma)));
        }
        Ok(())
    }

    /// Coupling on the bond between modes `j` and `k` (0-based, `j != k`).
    pub fn j(&self, j: usize, k: usize) -> f64 {
        match (j.min(k), j.max(k)) {
            (0, 1) => self.coupling[0],
            (0, 2) => self.coupling[1],
            (1, 2) => self.coupling[2],
            _ => panic!("bad bond ({j},{k})"),
        }
    }
}

/// The potential matrix `𝕍` (`ω_j²` on the diagonal, `J_jk` off it).
pub fn potential_matrix(p: &SystemParams) -> Matrix3<f64> {
    let [w1, w2, w3] = p.omega;
    let [j12, j13, j23] = p.coupling;
    Matrix3::new(
        w1 * w1,
        j12,
        j13, //
        j12,
        w2 * w2,
        j23, //
        j13,
        j23,
        w3 * w3,
    )
}

/// Leading principal minors of `𝕍`, the Sylvester data for positive
/// definiteness.
pub fn leading_minors(v: &Matrix3<f64>) -> [f64; 3] {
    let m1 = v[(0, 0)];
    let m2 = v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)];
    let m3 = v.determinant();
    [m1, m2, m3]
}

/// Whether the parameters describe a bound system (`𝕍 ≻ 0`).
pub fn validate_bound_state(p: &SystemParams) -> bool {
    leading_minors(&potential_matrix(p))
        .iter()
        .all(|m| *m > 0.0)
}

/// Normal frequencies `(Ω₁, Ω₂, Ω₃)` from the closed trigonometric
/// solution of the characteristic cubic of `𝕍`.
///
/// The labeling is the cosine-phase convention of the cubic solver
/// (`Ω₁ ≥ Ω₃ ≥ Ω₂`), not a sort; callers must preserve it.
pub fn normal_frequencies(p: &SystemParams) -> Result<[f64; 3]> {
    p.validate()?;
    let v = potential_matrix(p);
    if !validate_bound_state(p) {
        return Err(Error::Unbound(format!(
            "leading minors {:?}",
            leading_minors(&v)
        )));
    }
    let tr = v[(0, 0)] + v[(1, 1)] + v[(2, 2)];
    let minor_sum = v[(0, 0)] * v[(1, 1)] + v[(0, 0)] * v[(2, 2)] + v[(1, 1)] * v[(2, 2)]
        - v[(0, 1)].powi(2)
        - v[(0, 2)].powi(2)
        - v[(1, 2)].powi(2);
    let det = v.determinant();
    let mut mu = cubic::roots_from_invariants(tr, minor_sum, det)?;

    // The characteristic coefficients only pin a (near-)repeated root to
    // about √ε, but the symmetric matrix itself pins every eigenvalue to
    // ε. When roots nearly collide, refine each against 𝕍 directly; the
    // labeling is kept because the refinement moves roots by far less
    // than the trigger distance.
    let scale = mu.iter().fold(1e-30f64, |a, m| a.max(m.abs()));
    let min_gap = (mu[0] - mu[1])
        .abs()
        .min((mu[0] - mu[2]).abs())
        .min((mu[1] - mu[2]).abs());
    if min_gap < 1e-5 * scale {
        for m in &mut mu {
            *m = rayleigh_refined(&v, *m, scale);
        }
    }

    let mut omega_n = [0.0; 3];
    for (o, m) in omega_n.iter_mut().zip(&mu) {
        if *m <= 0.0 {
            return Err(Error::Unbound(format!("non-positive Ω² = {m:e}")));
        }
        *o = m.sqrt();
    }
    Ok(omega_n)
}

fn adjugate(a: &Matrix3<f64>) -> Matrix3<f64> {
    Matrix3::new(
        a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)],
        a[(0, 2)] * a[(2, 1)] - a[(0, 1)] * a[(2, 2)],
        a[(0, 1)] * a[(1, 2)] - a[(0, 2)] * a[(1, 1)],
        a[(1, 2)] * a[(2, 0)] - a[(1, 0)] * a[(2, 2)],
        a[(0, 0)] * a[(2, 2)] - a[(0, 2)] * a[(2, 0)],
        a[(0, 2)] * a[(1, 0)] - a[(0, 0)] * a[(1, 2)],
        a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)],
        a[(0, 1)] * a[(2, 0)] - a[(0, 0)] * a[(2, 1)],
        a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
    )
}

/// Shifted inverse iteration through the adjugate (no factorization
/// needed at 3×3) followed by a Rayleigh quotient. The small offset
/// keeps the shifted matrix nonsingular even at an exact eigenvalue; a
/// repeated eigenvalue is then recovered exactly because any vector of
/// its eigenspace gives the same quotient.
fn rayleigh_refined(v: &Matrix3<f64>, mu: f64, scale: f64) -> f64 {
    let mut mu = mu;
    for _ in 0..2 {
        let a = v - Matrix3::identity() * (mu + 1e-9 * scale);
        let adj = adjugate(&a);
        let (mut best, mut best_norm) = (0, -1.0);
        for c in 0..3 {
            let n = adj.column(c).norm();
            if n > best_norm {
                best = c;
                best_norm = n;
            }
        }
        if best_norm <= 0.0 {
            break;
        }
        let x = adj.column(best).into_owned();
        let den = x.norm_squared();
        if den == 0.0 || !den.is_finite() {
            break;
        }
        mu = x.dot(&(v * x)) / den;
    }
    mu
}

/// z-y-z Euler angles of the mode rotation, `R = R_z(α) R_y(β) R_z(γ)`
/// with `β ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

fn rot_z(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

impl EulerAngles {
    /// Extracts the angles of a proper rotation. At the gimbal points
    /// (`sin β ≈ 0`) only `α ± γ` is defined; the convention here is
    /// `γ = 0`.
    pub fn from_rotation(r: &Matrix3<f64>) -> Self {
        let sy = f64::hypot(r[(0, 2)], r[(1, 2)]);
        if sy > 1e-12 {
            EulerAngles {
                alpha: f64::atan2(r[(1, 2)], r[(0, 2)]),
                beta: f64::atan2(sy, r[(2, 2)]),
                gamma: f64::atan2(r[(2, 1)], -r[(2, 0)]),
            }
        } else if r[(2, 2)] > 0.0 {
            // R = R_z(α + γ)
            EulerAngles {
                alpha: f64::atan2(r[(1, 0)], r[(0, 0)]),
                beta: 0.0,
                gamma: 0.0,
            }
        } else {
            // R = R_z(α − γ) R_y(π)
            EulerAngles {
                alpha: f64::atan2(-r[(0, 1)], -r[(0, 0)]),
                beta: std::f64::consts::PI,
                gamma: 0.0,
            }
        }
    }

    /// Rebuilds `R_z(α) R_y(β) R_z(γ)`.
    pub fn rotation(&self) -> Matrix3<f64> {
        rot_z(self.alpha) * rot_y(self.beta) * rot_z(self.gamma)
    }
}

/// Everything derived from diagonalizing `𝕍`, with a consistent labeling.
#[derive(Debug, Clone)]
pub struct NormalModeData {
    /// Normal frequencies in the cubic-phase labeling.
    pub omega_normal: [f64; 3],
    /// Proper rotation `R` with `R column j` the eigenvector for `Ω_j²`
    /// and `det R = +1`, so `Rᵀ 𝕍 R = diag(Ω²)`.
    pub mode_matrix: Matrix3<f64>,
    /// z-y-z angles of `mode_matrix`.
    pub euler: EulerAngles,
    /// Per-mode squeeze parameters `r_j = ½ ln(Ω_j / ω_j)`.
    pub squeeze: [f64; 3],
    /// Rescaled couplings `g_jk = J_jk / (2 √(ω_j ω_k))`, bond order
    /// `(12, 13, 23)`.
    pub coupling_g: [f64; 3],
    /// Effective dressed frequencies `Ω̃_j = ½ (Ω_j²/ω_j + ω_j)`.
    pub omega_tilde: [f64; 3],
    /// Counter-rotating weights `𝔤_j = ¼ (Ω_j²/ω_j − ω_j)`.
    pub g_weight: [f64; 3],
    /// Set when two normal frequencies coincide within `1e-12`
    /// (relative); the rotation is then canonicalized rather than taken
    /// raw from the eigensolver.
    pub degenerate: bool,
}

/// Squeeze parameters `r_j = ½ ln(Ω_j / ω_j)`.
pub fn squeeze_parameters(p: &SystemParams, omega_normal: &[f64; 3]) -> [f64; 3] {
    let mut r = [0.0; 3];
    for j in 0..3 {
        r[j] = 0.5 * (omega_normal[j] / p.omega[j]).ln();
    }
    r
}

/// Rescaled ladder-basis couplings `g_jk = J_jk / (2 √(ω_j ω_k))` in bond
/// order `(12, 13, 23)`.
pub fn coupling_strengths(p: &SystemParams) -> [f64; 3] {
    let [w1, w2, w3] = p.omega;
    let [j12, j13, j23] = p.coupling;
    [
        j12 / (2.0 * (w1 * w2).sqrt()),
        j13 / (2.0 * (w1 * w3).sqrt()),
        j23 / (2.0 * (w2 * w3).sqrt()),
    ]
}

/// Dressed frequencies and counter-rotating weights
/// `(Ω̃_j, 𝔤_j) = (½ (Ω_j²/ω_j + ω_j), ¼ (Ω_j²/ω_j − ω_j))`.
pub fn quadrature_coefficients(p: &SystemParams, omega_normal: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut tilde = [0.0; 3];
    let mut weight = [0.0; 3];
    for j in 0..3 {
        let ratio = omega_normal[j] * omega_normal[j] / p.omega[j];
        tilde[j] = 0.5 * (ratio + p.omega[j]);
        weight[j] = 0.25 * (ratio - p.omega[j]);
    }
    (tilde, weight)
}

/// Relative tolerance for matching eigensolver eigenvalues to the cubic
/// labels and for the diagonalization residual.
const MATCH_TOL: f64 = 1e-8;
/// Relative gap below which two normal frequencies count as degenerate.
const DEGENERACY_TOL: f64 = 1e-12;

/// Mode rotation matched to a given frequency labeling.
///
/// Columns come from a symmetric eigensolve of `𝕍`, permuted so column `j`
/// belongs to `Ω_j²`, sign-fixed (largest-magnitude entry positive), and
/// if `det < 0` the third column is flipped to make the rotation proper.
/// Degenerate eigenspaces are re-spanned by Gram-Schmidt on projected
/// coordinate axes so the result does not depend on eigensolver internals.
///
/// Returns the rotation and the degeneracy flag.
pub fn mode_rotation(p: &SystemParams, omega_normal: &[f64; 3]) -> Result<(Matrix3<f64>, bool)> {
    let v = potential_matrix(p);
    let scale = v.norm().max(1.0);
    let eig = nalgebra::SymmetricEigen::new(v);

    // Match each label to an unused eigenvalue.
    let targets = [
        omega_normal[0] * omega_normal[0],
        omega_normal[1] * omega_normal[1],
        omega_normal[2] * omega_normal[2],
    ];
    let mut used = [false; 3];
    let mut perm = [0usize; 3];
    for (j, t) in targets.iter().enumerate() {
        let mut best = usize::MAX;
        let mut best_err = f64::INFINITY;
        for i in 0..3 {
            if used[i] {
                continue;
            }
            let err = (eig.eigenvalues[i] - t).abs();
            if err < best_err {
                best_err = err;
                best = i;
            }
        }
        if best_err > MATCH_TOL * scale {
            return Err(Error::Domain {
                context: "model::mode_rotation",
                detail: format!(
                    "cubic root {t:e} does not match any eigenvalue of the potential \
                     (best miss {best_err:e})"
                ),
            });
        }
        used[best] = true;
        perm[j] = best;
    }

    let mut r = Matrix3::zeros();
    for j in 0..3 {
        r.set_column(j, &eig.eigenvectors.column(perm[j]));
    }

    // Degeneracy detection on the frequencies themselves.
    let wmax = omega_normal.iter().cloned().fold(1.0f64, f64::max);
    let close = |a: f64, b: f64| (a - b).abs() <= DEGENERACY_TOL * wmax;
    let degenerate = close(omega_normal[0], omega_normal[1])
        || close(omega_normal[0], omega_normal[2])
        || close(omega_normal[1], omega_normal[2]);

    if degenerate {
        canonicalize_degenerate(&mut r, omega_normal, wmax);
    }

    // Sign convention: largest-magnitude entry of each column positive
    // (first such entry on ties).
    for j in 0..3 {
        let col = r.column(j);
        let mut arg = 0;
        for i in 1..3 {
            if col[i].abs() > col[arg].abs() + 1e-14 {
                arg = i;
            }
        }
        if col[arg] < 0.0 {
            r.set_column(j, &(-col));
        }
    }
    if r.determinant() < 0.0 {
        let c = -r.column(2);
        r.set_column(2, &c);
    }

    // Diagonalization residual, relative to the scale of 𝕍.
    let mut resid: f64 = 0.0;
    let d = r.transpose() * v * r;
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { targets[i] } else { 0.0 };
            resid = resid.max((d[(i, j)] - want).abs());
        }
    }
    if resid > MATCH_TOL * scale {
        return Err(Error::Domain {
            context: "model::mode_rotation",
            detail: format!("diagonalization residual {resid:e}"),
        });
    }

    Ok((r, degenerate))
}

/// Re-spans each degenerate eigenspace by Gram-Schmidt on the projections
/// of the coordinate axes, taken in order of decreasing projected norm.
fn canonicalize_degenerate(r: &mut Matrix3<f64>, omega_normal: &[f64; 3], wmax: f64) {
    let mut grouped = [false; 3];
    for a in 0..3 {
        if grouped[a] {
            continue;
        }
        let mut cluster = vec![a];
        for b in (a + 1)..3 {
            if !grouped[b] && (omega_normal[a] - omega_normal[b]).abs() <= DEGENERACY_TOL * wmax {
                cluster.push(b);
                grouped[b] = true;
            }
        }
        if cluster.len() < 2 {
            continue;
        }
        // Projector onto the cluster's eigenspace.
        let mut proj = Matrix3::zeros();
        for &j in &cluster {
            let u = r.column(j);
            proj += u * u.transpose();
        }
        // Seed axes sorted by projected norm, descending.
        let mut seeds: Vec<usize> = (0..3).collect();
        let norms: Vec<f64> = (0..3).map(|k| proj.column(k).norm()).collect();
        seeds.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

        let mut basis: Vec<nalgebra::Vector3<f64>> = Vec::new();
        for &k in &seeds {
            if basis.len() == cluster.len() {
                break;
            }
            let mut w = proj.column(k).into_owned();
            for b in &basis {
                w -= b * b.dot(&w);
            }
            let n = w.norm();
            if n > 1e-6 {
                basis.push(w / n);
            }
        }
        for (slot, b) in cluster.iter().zip(&basis) {
            r.set_column(*slot, b);
        }
    }
}

/// Independent closed forms for the cosines of the doubled Euler angles,
/// compared against the extracted angles.
///
/// For symmetric `𝕍 = R diag(Ω²) Rᵀ` the squared eigenvector components
/// obey the cofactor identity `R_ik² = C_ii(Ω_k²) / Π_{l≠k}(Ω_k² − Ω_l²)`,
/// where `C_ii(μ)` is the i-th diagonal cofactor of `μI − 𝕍`. Combined
/// with the z-y-z entry layout this gives `cos 2β` from `R₃₃²`, `cos 2γ`
/// from the third components of columns 1 and 2, and `cos 2α` from the
/// first two components of column 3 — all without ever computing an
/// eigenvector.
///
/// Returns `|cos 2·(extracted) − closed form|` for `(α, β, γ)`; `None`
/// where a closed form's denominator falls below `1e-8` of scale
/// (degenerate frequencies or gimbal alignment make it indeterminate).
pub fn doubled_angle_residuals(p: &SystemParams, nm: &NormalModeData) -> [Option<f64>; 3] {
    let [w1, w2, w3] = p.omega;
    let (w1s, w2s, w3s) = (w1 * w1, w2 * w2, w3 * w3);
    let [j12, j13, j23] = p.coupling;
    let o = [
        nm.omega_normal[0] * nm.omega_normal[0],
        nm.omega_normal[1] * nm.omega_normal[1],
        nm.omega_normal[2] * nm.omega_normal[2],
    ];
    // Diagonal cofactors of (μI − 𝕍).
    let c11 = |mu: f64| (mu - w2s) * (mu - w3s) - j23 * j23;
    let c22 = |mu: f64| (mu - w1s) * (mu - w3s) - j13 * j13;
    let c33 = |mu: f64| (mu - w1s) * (mu - w2s) - j12 * j12;

    let scale = potential_matrix(p).norm().max(1.0);
    let tol = 1e-8 * scale * scale;

    // cos 2α = (R₁₃² − R₂₃²)/(R₁₃² + R₂₃²)
    let alpha = {
        let (na, nb) = (c11(o[2]), c22(o[2]));
        ((na + nb).abs() > tol)
            .then(|| ((2.0 * nm.euler.alpha).cos() - (na - nb) / (na + nb)).abs())
    };
    // cos 2β = 2 R₃₃² − 1
    let beta = {
        let den = (o[2] - o[0]) * (o[2] - o[1]);
        (den.abs() > tol)
            .then(|| ((2.0 * nm.euler.beta).cos() - (2.0 * c33(o[2]) / den - 1.0)).abs())
    };
    // cos 2γ = (R₃₁² − R₃₂²)/(R₃₁² + R₃₂²), via ρ = R₃₂²/R₃₁²
    let gamma = {
        let den = c33(o[0]) * (o[2] - o[1]);
        if den.abs() > tol * scale {
            let rho = c33(o[1]) * (o[0] - o[2]) / den;
            (rho + 1.0 > 1e-8)
                .then(|| ((2.0 * nm.euler.gamma).cos() - (1.0 - rho) / (1.0 + rho)).abs())
        } else {
            None
        }
    };
    [alpha, beta, gamma]
}

impl NormalModeData {
    /// Full normal-mode solve: frequencies, matched rotation, Euler
    /// angles, squeeze and quadrature coefficients.
    pub fn compute(p: &SystemParams) -> Result<Self> {
        let omega_normal = normal_frequencies(p)?;
        let (mode_matrix, degenerate) = mode_rotation(p, &omega_normal)?;
        let euler = EulerAngles::from_rotation(&mode_matrix);
        let (omega_tilde, g_weight) = quadrature_coefficients(p, &omega_normal);
        Ok(NormalModeData {
            omega_normal,
            mode_matrix,
            euler,
            squeeze: squeeze_parameters(p, &omega_normal),
            coupling_g: coupling_strengths(p),
            omega_tilde,
            g_weight,
            degenerate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(j: f64) -> SystemParams {
        SystemParams::new([1.0, 1.0, 1.0], [j, j, j], 1.0).unwrap()
    }

    #[test]
    fn bound_state_criterion() {
        assert!(validate_bound_state(&iso(0.1)));
        assert!(validate_bound_state(&iso(0.9)));
        // J = ω² = 1 is the isotropic unbinding threshold: the doubly
        // degenerate Ω² = ω² − J crosses zero.
        assert!(!validate_bound_state(&iso(1.0)));
        assert!(!validate_bound_state(&iso(1.2)));
        // Strong negative coupling also unbinds (Ω₁² = ω² + 2J < 0 first
        // shows up through the determinant).
        assert!(!validate_bound_state(&iso(-0.5)));
        assert!(!validate_bound_state(&iso(-1.0)));
    }

    #[test]
    fn isotropic_frequencies() {
        // ω = 1, J = 0.1: Ω₁² = 1 + 2J = 1.2, Ω₂² = Ω₃² = 1 − J = 0.9.
        let w = normal_frequencies(&iso(0.1)).unwrap();
        assert!((w[0] - 1.2f64.sqrt()).abs() < 1e-12);
        assert!((w[1] - 0.9f64.sqrt()).abs() < 1e-12);
        assert!((w[2] - 0.9f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn uncoupled_frequencies_keep_phase_labels() {
        // Diagonal 𝕍 = diag(1, 4, 9): the phase labeling puts the largest
        // root first and the smallest second.
        let p = SystemParams::new([1.0, 2.0, 3.0], [0.0; 3], 1.0).unwrap();
        let w = normal_frequencies(&p).unwrap();
        assert!((w[0] - 3.0).abs() < 1e-12);
        assert!((w[1] - 1.0).abs() < 1e-12);
        assert!((w[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_diagonalizes_potential() {
        let p = SystemParams::new([1.0, 1.1, 0.9], [0.12, 0.07, -0.05], 1.0).unwrap();
        let nm = NormalModeData::compute(&p).unwrap();
        let v = potential_matrix(&p);
        let d = nm.mode_matrix.transpose() * v * nm.mode_matrix;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    nm.omega_normal[i] * nm.omega_normal[i]
                } else {
                    0.0
                };
                assert!((d[(i, j)] - want).abs() < 1e-10, "{i},{j}: {}", d[(i, j)]);
            }
        }
        assert!((nm.mode_matrix.determinant() - 1.0).abs() < 1e-12);
        assert!(!nm.degenerate);
    }

    #[test]
    fn euler_roundtrip() {
        let p = SystemParams::new([1.0, 1.1, 0.9], [0.12, 0.07, -0.05], 1.0).unwrap();
        let nm = NormalModeData::compute(&p).unwrap();
        let rebuilt = nm.euler.rotation();
        assert!((rebuilt - nm.mode_matrix).norm() < 1e-12);
        assert!(nm.euler.beta >= 0.0 && nm.euler.beta <= std::f64::consts::PI);
    }

    #[test]
    fn euler_gimbal_cases() {
        for &(b, expect_beta) in &[(0.0, 0.0), (std::f64::consts::PI, std::f64::consts::PI)] {
            let r = rot_z(0.7) * rot_y(b) * rot_z(0.0);
            let e = EulerAngles::from_rotation(&r);
            assert!((e.beta - expect_beta).abs() < 1e-12);
            assert!(e.gamma == 0.0);
            assert!((e.rotation() - r).norm() < 1e-12);
        }
    }

    #[test]
    fn squeeze_example_values() {
        let p = SystemParams::new([1.0, 1.0, 1.0], [0.1, 0.1, 0.1], 1.0).unwrap();
        let w = normal_frequencies(&p).unwrap();
        let r = squeeze_parameters(&p, &w);
        // r₁ = ½ ln √1.2, r₂ = r₃ = ½ ln √0.9
        assert!((r[0] - 0.25 * 1.2f64.ln()).abs() < 1e-12);
        assert!((r[1] - 0.25 * 0.9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_rotation_is_canonical_and_proper() {
        let p = iso(0.1);
        let nm = NormalModeData::compute(&p).unwrap();
        assert!(nm.degenerate);
        let v = potential_matrix(&p);
        let d = nm.mode_matrix.transpose() * v * nm.mode_matrix;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    nm.omega_normal[i] * nm.omega_normal[i]
                } else {
                    0.0
                };
                assert!((d[(i, j)] - want).abs() < 1e-9);
            }
        }
        assert!((nm.mode_matrix.determinant() - 1.0).abs() < 1e-12);
        // The Ω₁ = √(1+2J) eigenvector is the symmetric combination.
        let c0 = nm.mode_matrix.column(0);
        let s = 1.0 / 3.0f64.sqrt();
        assert!(
            (c0[0] - s).abs() < 1e-10 && (c0[1] - s).abs() < 1e-10 && (c0[2] - s).abs() < 1e-10
        );
    }

    #[test]
    fn coupling_and_quadrature_coefficients() {
        let p = SystemParams::new([1.0, 4.0, 0.25], [0.2, 0.1, 0.05], 1.0).unwrap();
        let g = coupling_strengths(&p);
        assert!((g[0] - 0.2 / (2.0 * 2.0)).abs() < 1e-15);
        assert!((g[1] - 0.1 / (2.0 * 0.5)).abs() < 1e-15);
        assert!((g[2] - 0.05 / (2.0 * 1.0)).abs() < 1e-15);

        let w = normal_frequencies(&p).unwrap();
        let (tilde, weight) = quadrature_coefficients(&p, &w);
        for j in 0..3 {
            // Ω̃ + 2𝔤 = Ω²/ω and Ω̃ − 2𝔤 = ω reconstruct both inputs.
            assert!((tilde[j] + 2.0 * weight[j] - w[j] * w[j] / p.omega[j]).abs() < 1e-12);
            assert!((tilde[j] - 2.0 * weight[j] - p.omega[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn unbound_is_an_error() {
        let e = normal_frequencies(&iso(1.2));
        assert!(matches!(e, Err(Error::Unbound(_))));
    }

    #[test]
    fn doubled_angle_closed_forms_agree() {
        for p in [
            SystemParams::new([1.0, 1.1, 0.9], [0.12, 0.07, -0.05], 1.0).unwrap(),
            SystemParams::new([0.7, 1.9, 1.2], [0.2, 0.15, 0.1], 1.0).unwrap(),
            SystemParams::new([1.0, 1.2, 0.9], [0.05, 0.02, 0.03], 1.0).unwrap(),
        ] {
            let nm = NormalModeData::compute(&p).unwrap();
            let res = doubled_angle_residuals(&p, &nm);
            for (i, r) in res.iter().enumerate() {
                let r = r.expect("non-degenerate case must evaluate");
                assert!(r < 1e-8, "angle {i}: residual {r:e}");
            }
        }
    }

    #[test]
    fn frequencies_are_continuous_in_couplings() {
        let base = SystemParams::new([1.0, 1.2, 0.9], [0.05, 0.02, 0.03], 1.0).unwrap();
        let w0 = normal_frequencies(&base).unwrap();
        for b in 0..3 {
            let mut p = base;
            p.coupling[b] += 1e-6;
            let w = normal_frequencies(&p).unwrap();
            for j in 0..3 {
                assert!((w[j] - w0[j]).abs() < 1e-4, "bond {b}, mode {j}");
            }
        }
    }
}
