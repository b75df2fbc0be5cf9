//! Symplectic factors of the propagator in the ladder basis.
//!
//! Vectors are ordered `ξ = (a₁, a₁†, a₂, a₂†, a₃, a₃†)`. The central
//! object is the factor `A` relating normal-mode ladder operators `ζ` to
//! bare ones, `ξ = A ζ`. It can be assembled two ways:
//!
//! * directly, from the mode rotation `R` and the bare/normal frequency
//!   pairs ([`compose_factor`]);
//! * as a product of two-mode rotations and single-mode squeezes driven by
//!   the Euler angles, `A = 𝕊₁₂(α) 𝕊₁₃(β) 𝕊₁₂(γ) 𝕊(−r₁,−r₂,−r₃)`
//!   ([`compose_factor_euler`]).
//!
//! Both routes are kept and must agree; together with the reconstruction
//! of the ladder-basis Hamiltonian matrix from `A diag(λ) A⁻¹` this pins
//! every sign convention in the chain.
//!
//! A ladder-basis matrix `S` is a valid transform when it satisfies
//!
//! ```text
//! S K Sᵀ = K ,  K = ⊕ [[0, 1], [−1, 0]]   (commutation relations)
//! S Z S† = Z ,  Z = ⊕ diag(1, −1)          (adjoint pairing)
//! ```
//!
//! together with the reality structure `S[2j+1, 2k+1] = conj(S[2j, 2k])`,
//! `S[2j+1, 2k] = conj(S[2j, 2k+1])` and `det S = 1`. Note the transpose
//! in the first condition: for complex ladder matrices the familiar
//! dagger form holds only in the second, conjugation, sense.

use nalgebra::{Matrix3, Matrix6};

use crate::model::{NormalModeData, SystemParams};
use crate::{Error, Result, C64};

/// 6×6 complex ladder-basis matrix.
pub type Mat6 = Matrix6<C64>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The frequency-mixing pair `c± = ½(√(a/b) ± √(b/a))`.
fn cpair(a: f64, b: f64) -> (f64, f64) {
    let s = (a / b).sqrt();
    (0.5 * (s + 1.0 / s), 0.5 * (s - 1.0 / s))
}

/// Ladder-basis image of the quadrature point transformation `x → M X`
/// between mode sets with frequencies `row_freq` (output side, rows) and
/// `col_freq` (input side, columns):
///
/// ```text
/// block (j,k) = M_jk · [[c⁺, c⁻], [c⁻, c⁺]] ,
/// c± = ½ (√(row_j/col_k) ± √(col_k/row_j)) .
/// ```
///
/// With equal frequency sets this is the ladder representation of an
/// orthogonal mode rotation; with `M = I` and different frequencies it is
/// a tensor product of single-mode squeezes. The map is a homomorphism in
/// `M` when the inner frequencies match, which is what makes the direct
/// and Euler-factored compositions below agree.
pub fn ladder_point_transform(m: &Matrix3<f64>, row_freq: &[f64; 3], col_freq: &[f64; 3]) -> Mat6 {
    let mut s = Mat6::zeros();
    for j in 0..3 {
        for k in 0..3 {
            let (cp, cm) = cpair(row_freq[j], col_freq[k]);
            let v = m[(j, k)];
            s[(2 * j, 2 * k)] = re(v * cp);
            s[(2 * j, 2 * k + 1)] = re(v * cm);
            s[(2 * j + 1, 2 * k)] = re(v * cm);
            s[(2 * j + 1, 2 * k + 1)] = re(v * cp);
        }
    }
    s
}

/// Ladder image of a mode rotation `M` at fixed frequencies `ω`.
pub fn rotation_map(m: &Matrix3<f64>, omega: &[f64; 3]) -> Mat6 {
    ladder_point_transform(m, omega, omega)
}

fn rot_z(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Two-mode mixing of modes 1 and 2 by `angle` (a z-axis rotation of the
/// quadratures), at bare frequencies `ω`.
pub fn rotation_12(angle: f64, omega: &[f64; 3]) -> Mat6 {
    rotation_map(&rot_z(angle), omega)
}

/// Two-mode mixing of modes 1 and 3 by `angle` (a y-axis rotation of the
/// quadratures), at bare frequencies `ω`.
pub fn rotation_13(angle: f64, omega: &[f64; 3]) -> Mat6 {
    rotation_map(&rot_y(angle), omega)
}

/// Independent single-mode squeezes: block `j` is
/// `[[cosh r_j, sinh r_j], [sinh r_j, cosh r_j]]`.
pub fn squeeze_123(r: &[f64; 3]) -> Mat6 {
    let mut s = Mat6::zeros();
    for j in 0..3 {
        let (ch, sh) = (r[j].cosh(), r[j].sinh());
        s[(2 * j, 2 * j)] = re(ch);
        s[(2 * j, 2 * j + 1)] = re(sh);
        s[(2 * j + 1, 2 * j)] = re(sh);
        s[(2 * j + 1, 2 * j + 1)] = re(ch);
    }
    s
}

/// Commutator eigenvalues of the normal-mode ladder vector:
/// `λ = (−Ω₁, +Ω₁, −Ω₂, +Ω₂, −Ω₃, +Ω₃)`, so that `[H, ζ_n] = λ_n ζ_n`.
pub fn mode_eigenvalues(omega_normal: &[f64; 3]) -> [f64; 6] {
    let o = omega_normal;
    [-o[0], o[0], -o[1], o[1], -o[2], o[2]]
}

/// Diagonal phase matrix `diag(e^{i λ_n τ})`.
///
/// `λ` must carry the alternating `(−Ω, +Ω)` pattern of
/// [`mode_eigenvalues`]; anything else indicates a labeling bug upstream.
pub fn phase_diagonal(lambda: &[f64; 6], tau: f64) -> Result<Mat6> {
    for j in 0..3 {
        let (lo, hi) = (lambda[2 * j], lambda[2 * j + 1]);
        if !(hi > 0.0) || (lo + hi).abs() > 1e-12 * hi.abs() {
            return Err(Error::InvalidParameter(format!(
                "mode eigenvalues for mode {} are not an alternating ± pair: ({lo}, {hi})",
                j + 1
            )));
        }
    }
    let mut d = Mat6::zeros();
    for (n, l) in lambda.iter().enumerate() {
        d[(n, n)] = C64::new(0.0, l * tau).exp();
    }
    Ok(d)
}

/// Ladder-basis matrix of the Hamiltonian's adjoint action,
/// `[H, ξ_n] = Σ_m h_nm ξ_m`, written directly from the bare parameters:
/// diagonal blocks `diag(−ω_j, +ω_j)`, off-diagonal blocks
/// `∓ g_jk` filling the whole 2×2 block (upper row −, lower row +).
pub fn hamiltonian_ladder_matrix(p: &SystemParams) -> Mat6 {
    let g = crate::model::coupling_strengths(p);
    let bond = |j: usize, k: usize| match (j.min(k), j.max(k)) {
        (0, 1) => g[0],
        (0, 2) => g[1],
        _ => g[2],
    };
    let mut h = Mat6::zeros();
    for j in 0..3 {
        h[(2 * j, 2 * j)] = re(-p.omega[j]);
        h[(2 * j + 1, 2 * j + 1)] = re(p.omega[j]);
        for k in 0..3 {
            if k == j {
                continue;
            }
            let gjk = bond(j, k);
            h[(2 * j, 2 * k)] = re(-gjk);
            h[(2 * j, 2 * k + 1)] = re(-gjk);
            h[(2 * j + 1, 2 * k)] = re(gjk);
            h[(2 * j + 1, 2 * k + 1)] = re(gjk);
        }
    }
    h
}

/// The propagator factor `A` (with `ξ = A ζ`) and its inverse, built in
/// one step from the mode rotation and the two frequency sets:
/// `A_(j,k) = R_jk C(ω_j, Ω_k)`, `A⁻¹_(k,j) = R_jk C(Ω_k, ω_j)`.
pub fn compose_factor(nm: &NormalModeData, p: &SystemParams) -> (Mat6, Mat6) {
    let a = ladder_point_transform(&nm.mode_matrix, &p.omega, &nm.omega_normal);
    let a_inv = ladder_point_transform(&nm.mode_matrix.transpose(), &nm.omega_normal, &p.omega);
    (a, a_inv)
}

/// The same factor assembled from Euler-angle factors:
/// `A = 𝕊₁₂(α) 𝕊₁₃(β) 𝕊₁₂(γ) 𝕊(−r)`. Used to cross-check
/// [`compose_factor`] and the angle extraction.
pub fn compose_factor_euler(nm: &NormalModeData, p: &SystemParams) -> (Mat6, Mat6) {
    let e = &nm.euler;
    let w = &p.omega;
    let neg_r = [-nm.squeeze[0], -nm.squeeze[1], -nm.squeeze[2]];
    let a = rotation_12(e.alpha, w)
        * rotation_13(e.beta, w)
        * rotation_12(e.gamma, w)
        * squeeze_123(&neg_r);
    let a_inv = squeeze_123(&nm.squeeze)
        * rotation_12(-e.gamma, w)
        * rotation_13(-e.beta, w)
        * rotation_12(-e.alpha, w);
    (a, a_inv)
}

/// The canonical antisymmetric form `K = ⊕ [[0, 1], [−1, 0]]`.
pub fn omega_form() -> Mat6 {
    let mut k = Mat6::zeros();
    for j in 0..3 {
        k[(2 * j, 2 * j + 1)] = re(1.0);
        k[(2 * j + 1, 2 * j)] = re(-1.0);
    }
    k
}

/// The adjoint-pairing form `Z = ⊕ diag(1, −1)`.
pub fn parity_form() -> Mat6 {
    let mut z = Mat6::zeros();
    for j in 0..3 {
        z[(2 * j, 2 * j)] = re(1.0);
        z[(2 * j + 1, 2 * j + 1)] = re(-1.0);
    }
    z
}

/// Max-abs residuals of the four ladder-symplectic conditions.
#[derive(Debug, Clone, Copy)]
pub struct SymplecticResiduals {
    /// `max |S K Sᵀ − K|`.
    pub commutation: f64,
    /// `max |S Z S† − Z|`.
    pub conjugation: f64,
    /// Deviation from the paired-conjugate entry structure.
    pub reality: f64,
    /// `|det S − 1|`.
    pub determinant: f64,
}

impl SymplecticResiduals {
    pub fn max(&self) -> f64 {
        self.commutation
            .max(self.conjugation)
            .max(self.reality)
            .max(self.determinant)
    }
}

fn max_abs(m: &Mat6) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Evaluates all four conditions on `s`.
pub fn symplectic_residuals(s: &Mat6) -> SymplecticResiduals {
    let k = omega_form();
    let z = parity_form();
    let commutation = max_abs(&(s * k * s.transpose() - k));
    let conjugation = max_abs(&(s * z * s.adjoint() - z));
    let mut reality: f64 = 0.0;
    for j in 0..3 {
        for l in 0..3 {
            let d1 = (s[(2 * j + 1, 2 * l + 1)] - s[(2 * j, 2 * l)].conj()).norm();
            let d2 = (s[(2 * j + 1, 2 * l)] - s[(2 * j, 2 * l + 1)].conj()).norm();
            reality = reality.max(d1).max(d2);
        }
    }
    let determinant = (s.determinant() - re(1.0)).norm();
    SymplecticResiduals {
        commutation,
        conjugation,
        reality,
        determinant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NormalModeData;

    fn anis() -> SystemParams {
        SystemParams::new([1.0, 1.3, 0.8], [0.15, -0.07, 0.1], 1.0).unwrap()
    }

    fn assert_close(a: &Mat6, b: &Mat6, tol: f64, what: &str) {
        let d = max_abs(&(a - b));
        assert!(d < tol, "{what}: max deviation {d:e}");
    }

    #[test]
    fn rotations_form_one_parameter_groups() {
        let w = [1.0, 1.4, 0.7];
        let id = Mat6::identity();
        assert_close(&rotation_12(0.0, &w), &id, 1e-15, "rot12(0)");
        assert_close(&rotation_13(0.0, &w), &id, 1e-15, "rot13(0)");
        let prod = rotation_12(0.3, &w) * rotation_12(0.5, &w);
        assert_close(&prod, &rotation_12(0.8, &w), 1e-14, "rot12 group law");
        let prod = rotation_13(-0.2, &w) * rotation_13(0.9, &w);
        assert_close(&prod, &rotation_13(0.7, &w), 1e-14, "rot13 group law");
        let prod = squeeze_123(&[0.1, -0.2, 0.3]) * squeeze_123(&[0.05, 0.1, -0.3]);
        assert_close(
            &prod,
            &squeeze_123(&[0.15, -0.1, 0.0]),
            1e-14,
            "squeeze group law",
        );
    }

    #[test]
    fn factors_satisfy_symplectic_conditions() {
        let w = [1.0, 1.4, 0.7];
        for s in [
            rotation_12(0.37, &w),
            rotation_13(-1.21, &w),
            squeeze_123(&[0.4, -0.1, 0.25]),
            rotation_12(0.37, &w) * rotation_13(2.0, &w) * squeeze_123(&[0.2, 0.0, -0.5]),
        ] {
            let r = symplectic_residuals(&s);
            assert!(r.max() < 1e-12, "residuals {r:?}");
        }
        // Phase diagonals satisfy them too (the complex case that breaks
        // the naive dagger form of the commutation condition).
        let lam = mode_eigenvalues(&[1.2, 0.8, 1.0]);
        let d = phase_diagonal(&lam, 0.77).unwrap();
        let r = symplectic_residuals(&d);
        assert!(r.max() < 1e-12, "phase diag residuals {r:?}");
    }

    #[test]
    fn direct_and_euler_compositions_agree() {
        let p = anis();
        let nm = NormalModeData::compute(&p).unwrap();
        let (a, a_inv) = compose_factor(&nm, &p);
        let (ae, ae_inv) = compose_factor_euler(&nm, &p);
        assert_close(&a, &ae, 1e-12, "A direct vs Euler");
        assert_close(&a_inv, &ae_inv, 1e-12, "A⁻¹ direct vs Euler");
        assert_close(&(a * a_inv), &Mat6::identity(), 1e-12, "A A⁻¹");
        // A is real in this convention.
        let im: f64 = a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert_eq!(im, 0.0);
        let r = symplectic_residuals(&a);
        assert!(r.max() < 1e-12, "A residuals {r:?}");
    }

    #[test]
    fn factor_reconstructs_hamiltonian_matrix() {
        // A diag(λ) A⁻¹ must reproduce the adjoint-action matrix of H in
        // the bare ladder basis. This single identity pins the cubic
        // labeling, the rotation/squeeze sign conventions, and the R vs Rᵀ
        // orientation all at once.
        for p in [
            anis(),
            SystemParams::new([1.0, 1.0, 1.0], [0.1, 0.1, 0.1], 1.0).unwrap(),
            SystemParams::new([0.6, 2.0, 1.1], [0.0, 0.3, -0.2], 1.0).unwrap(),
            SystemParams::new([1.0, 2.0, 3.0], [0.0, 0.0, 0.0], 1.0).unwrap(),
        ] {
            let nm = NormalModeData::compute(&p).unwrap();
            let (a, a_inv) = compose_factor(&nm, &p);
            let lam = mode_eigenvalues(&nm.omega_normal);
            let mut d = Mat6::zeros();
            for n in 0..6 {
                d[(n, n)] = C64::new(lam[n], 0.0);
            }
            let h = hamiltonian_ladder_matrix(&p);
            assert_close(&(a * d * a_inv), &h, 1e-10, "A diag(λ) A⁻¹ vs h");
        }
    }

    #[test]
    fn phase_diagonal_rejects_bad_labeling() {
        assert!(phase_diagonal(&[1.0, -1.0, -2.0, 2.0, -3.0, 3.0], 0.1).is_err());
        assert!(phase_diagonal(&[-1.0, 1.0, -2.0, 2.1, -3.0, 3.0], 0.1).is_err());
        assert!(phase_diagonal(&mode_eigenvalues(&[1.0, 2.0, 3.0]), 0.1).is_ok());
    }
}
