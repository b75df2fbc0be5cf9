//! Brute-force oracle in a truncated three-mode Fock space.
//!
//! Everything here is deliberately independent of the Gaussian
//! machinery: the Hamiltonian is built from raw ladder matrix elements,
//! evolved by the exact eigenbasis form of the decoherence kernel, and
//! observables are read off the full density matrix. Agreement with the
//! covariance pipeline is then a genuine cross-check, not a tautology.
//!
//! The evolution exploits the same Poisson resummation that powers the
//! covariance kernel, but at the density-matrix level: with
//! `ρ(0) = |ψ⟩⟨ψ|` expanded in the eigenbasis of `H` as coefficients
//! `c_a`, the entries of `ρ(t)` in that basis are
//!
//! ```text
//! ρ_ab(t) = c_a c_b · exp( Γt ( e^{−i(E_a−E_b)/Γ} − 1 ) ) ,
//! ```
//!
//! so one diagonalization serves every `(t, Γ)` pair, and no `k`
//! truncation is involved. Only the Fock cutoff remains as an
//! approximation.
//!
//! One physical subtlety the oracle exposes: the decohered state is a
//! Poisson-weighted mixture of Gaussian pure states, which is *not*
//! Gaussian at finite `Γ`. Second moments still evolve exactly as the
//! covariance pipeline predicts, but fourth moments pick up an `O(1/Γ)`
//! Wick-factorization violation, and the exact log-negativity sits
//! slightly above the Gaussian-formula value computed from the same
//! covariance. Both effects are cutoff-stable and vanish in the
//! Schrödinger limit; see [`wick_fourth_moment_residual`].

use nalgebra::{DMatrix, DVector};

use crate::model::{coupling_strengths, SystemParams};
use crate::symplectic::{rotation_12, rotation_13, squeeze_123, Mat6};
use crate::{Error, Result, C64};

/// Hard ceiling on the total Fock dimension `d³`.
pub const MAX_DIM: usize = 4096;

/// Truncation and tolerance settings for the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    /// Per-mode Fock dimension `d` (total dimension `d³`).
    pub cutoff: usize,
    /// Tail mass at which the explicit Poisson sum (used for
    /// cross-checks of the resummed kernel) stops.
    pub k_tail_epsilon: f64,
    /// Allowed observable drift when the cutoff is increased.
    pub convergence_tol: f64,
}

impl FockConfig {
    pub fn new(cutoff: usize, k_tail_epsilon: f64, convergence_tol: f64) -> Result<Self> {
        let cfg = Self {
            cutoff,
            k_tail_epsilon,
            convergence_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff < 2 {
            return Err(Error::InvalidParameter(format!(
                "Fock cutoff must be at least 2, got {}",
                self.cutoff
            )));
        }
        let dim = self.cutoff.pow(3);
        if dim > MAX_DIM {
            return Err(Error::Dimension { dim, max: MAX_DIM });
        }
        for (name, e) in [
            ("k_tail_epsilon", self.k_tail_epsilon),
            ("convergence_tol", self.convergence_tol),
        ] {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {e}")));
            }
        }
        Ok(())
    }
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            cutoff: 8,
            k_tail_epsilon: 1e-12,
            convergence_tol: 1e-6,
        }
    }
}

/// Flat index of `|n₁ n₂ n₃⟩` is `n₁ d² + n₂ d + n₃`.
fn stride(mode: usize, d: usize) -> usize {
    match mode {
        0 => d * d,
        1 => d,
        _ => 1,
    }
}

fn digit(idx: usize, mode: usize, d: usize) -> usize {
    idx / stride(mode, d) % d
}

/// Hamiltonian matrix in the product Fock basis:
/// `H = Σ_j ω_j (a_j† a_j + ½) + Σ_{j<k} g_jk (a_j† + a_j)(a_k† + a_k)`
/// with `g_jk = J_jk / (2 √(ω_j ω_k))`; real symmetric by construction.
pub fn build_hamiltonian(p: &SystemParams, cfg: &FockConfig) -> Result<DMatrix<f64>> {
    p.validate()?;
    cfg.validate()?;
    let d = cfg.cutoff;
    let dim = d * d * d;
    let g = coupling_strengths(p);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        let n = [digit(i, 0, d), digit(i, 1, d), digit(i, 2, d)];
        h[(i, i)] = (0..3).map(|j| p.omega[j] * (n[j] as f64 + 0.5)).sum();
        for (bond, (j, k)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            if g[bond] == 0.0 {
                continue;
            }
            // (a_j† + a_j)(a_k† + a_k): four single-step moves from |n⟩.
            for dj in [-1i64, 1] {
                for dk in [-1i64, 1] {
                    let (nj, nk) = (n[j] as i64 + dj, n[k] as i64 + dk);
                    if nj < 0 || nk < 0 || nj >= d as i64 || nk >= d as i64 {
                        continue;
                    }
                    let amp_j = if dj > 0 {
                        (n[j] as f64 + 1.0).sqrt()
                    } else {
                        (n[j] as f64).sqrt()
                    };
                    let amp_k = if dk > 0 {
                        (n[k] as f64 + 1.0).sqrt()
                    } else {
                        (n[k] as f64).sqrt()
                    };
                    let target =
                        (i as i64 + dj * stride(j, d) as i64 + dk * stride(k, d) as i64) as usize;
                    h[(target, i)] += g[bond] * amp_j * amp_k;
                }
            }
        }
    }
    Ok(h)
}

/// The eigendecomposition of one Hamiltonian, reused across all `(t, Γ)`.
pub struct FockOracle {
    pub params: SystemParams,
    pub cfg: FockConfig,
    pub dim: usize,
    energies: DVector<f64>,
    /// Columns are the eigenvectors.
    vectors: DMatrix<f64>,
    /// Vacuum coefficients `c_a = ⟨E_a|000⟩`.
    coeffs: DVector<f64>,
}

impl FockOracle {
    pub fn new(params: SystemParams, cfg: FockConfig) -> Result<Self> {
        let h = build_hamiltonian(&params, &cfg)?;
        let dim = h.nrows();
        let eig = h.symmetric_eigen();
        let coeffs = eig.eigenvectors.row(0).transpose();
        Ok(Self {
            params,
            cfg,
            dim,
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
            coeffs,
        })
    }

    /// Smallest eigenvalue of the truncated Hamiltonian.
    pub fn ground_energy(&self) -> f64 {
        self.energies.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Density matrix at time `t` in the Fock basis, evolved from the
    /// bare vacuum `|000⟩` by the resummed decoherence kernel (or the
    /// plain unitary phase in the Schrödinger limit).
    ///
    /// The back-rotation `ρ = U K Uᵀ` is done as four real products via
    /// `W = U diag(c)`, so the entire step is dense real matrix algebra.
    pub fn milburn_density(&self, t: f64, gamma: f64) -> Result<DMatrix<C64>> {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t}")));
        }
        if !self.params.schrodinger_limit && (!gamma.is_finite() || gamma <= 0.0) {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        let n = self.dim;
        let mut k_re = DMatrix::<f64>::zeros(n, n);
        let mut k_im = DMatrix::<f64>::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let delta = self.energies[a] - self.energies[b];
                let z = if self.params.schrodinger_limit {
                    C64::new(0.0, -delta * t).exp()
                } else {
                    let w = C64::new(0.0, -delta / gamma).exp();
                    ((w - 1.0) * gamma * t).exp()
                };
                k_re[(a, b)] = z.re;
                k_im[(a, b)] = z.im;
            }
        }
        let mut w = self.vectors.clone();
        for a in 0..n {
            let c = self.coeffs[a];
            w.column_mut(a).scale_mut(c);
        }
        let re = &w * k_re * w.transpose();
        let im = &w * k_im * w.transpose();
        Ok(DMatrix::from_fn(n, n, |i, j| {
            C64::new(re[(i, j)], im[(i, j)])
        }))
    }

    /// Same state through the explicit Poisson sum over unitary
    /// conjugations, truncated when the remaining tail mass drops below
    /// `k_tail_epsilon`. Exists solely to cross-check the resummed
    /// kernel; cost grows with `Γt`, so keep it to small cutoffs.
    pub fn milburn_density_series(&self, t: f64, gamma: f64) -> Result<DMatrix<C64>> {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t}")));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        let n = self.dim;
        let gt = gamma * t;
        // Poisson weights in log space, as in the covariance series.
        let mut ln_w = -gt;
        let mut mass = 0.0;
        // Phase factors e^{−ikE_a/Γ} updated recursively.
        let mut phase: Vec<C64> = vec![C64::new(1.0, 0.0); n];
        let step: Vec<C64> = (0..n)
            .map(|a| C64::new(0.0, -self.energies[a] / gamma).exp())
            .collect();
        let mut k_acc = DMatrix::<C64>::zeros(n, n);
        let k_max = (gt + 40.0 * gt.sqrt() + 60.0) as usize;
        for k in 0..=k_max {
            let wk = ln_w.exp();
            mass += wk;
            for a in 0..n {
                for b in 0..n {
                    k_acc[(a, b)] += phase[a] * phase[b].conj() * wk;
                }
            }
            if 1.0 - mass <= self.cfg.k_tail_epsilon {
                let mut w = self.vectors.clone();
                for a in 0..n {
                    let c = self.coeffs[a];
                    w.column_mut(a).scale_mut(c);
                }
                let wc = w.map(|x| C64::new(x, 0.0));
                return Ok(&wc * k_acc * wc.transpose());
            }
            ln_w += (gt).ln() - ((k + 1) as f64).ln();
            for (p, s) in phase.iter_mut().zip(&step) {
                *p *= *s;
            }
        }
        Err(Error::Convergence {
            context: "fock::milburn_density_series",
            detail: format!("tail mass {:e} after {k_max} terms", 1.0 - mass),
        })
    }
}

/// `tr(ρ ∘ product)` for a product of ladder operators, given left to
/// right; `(mode, true)` is a creation operator. Each monomial maps a
/// basis ket to at most one other, so the trace is a single sweep.
pub fn expect_product(rho: &DMatrix<C64>, d: usize, ops: &[(usize, bool)]) -> C64 {
    let dim = d * d * d;
    let mut acc = C64::new(0.0, 0.0);
    'state: for i in 0..dim {
        let mut idx = i;
        let mut amp = 1.0;
        for &(mode, dag) in ops.iter().rev() {
            let n = digit(idx, mode, d);
            if dag {
                if n + 1 >= d {
                    continue 'state;
                }
                amp *= (n as f64 + 1.0).sqrt();
                idx += stride(mode, d);
            } else {
                if n == 0 {
                    continue 'state;
                }
                amp *= (n as f64).sqrt();
                idx -= stride(mode, d);
            }
        }
        acc += rho[(i, idx)] * amp;
    }
    acc
}

/// Mean occupation numbers from the diagonal of `ρ`.
pub fn occupations(rho: &DMatrix<C64>, d: usize) -> [f64; 3] {
    let dim = d * d * d;
    let mut n = [0.0; 3];
    for i in 0..dim {
        let p = rho[(i, i)].re;
        for (j, out) in n.iter_mut().enumerate() {
            *out += p * digit(i, j, d) as f64;
        }
    }
    n
}

/// The 6×6 ladder covariance `σ_nm = ⟨ξ_n ξ_m† + ξ_m† ξ_n⟩` with
/// `ξ = (a₁, a₁†, a₂, a₂†, a₃, a₃†)`, measured entry by entry on `ρ`.
pub fn covariance(rho: &DMatrix<C64>, d: usize) -> Mat6 {
    let xi = |n: usize| (n / 2, n % 2 == 1);
    let dag = |(m, f): (usize, bool)| (m, !f);
    Mat6::from_fn(|r, c| {
        expect_product(rho, d, &[xi(r), dag(xi(c))]) + expect_product(rho, d, &[dag(xi(c)), xi(r)])
    })
}

/// Reduced two-mode density matrix on modes `(k, l)`, indexed
/// `n_k d + n_l`.
pub fn partial_trace_pair(rho: &DMatrix<C64>, d: usize, k: usize, l: usize) -> DMatrix<C64> {
    let spectator = 3 - k - l;
    let flat = |nk: usize, nl: usize, ns: usize| {
        nk * stride(k, d) + nl * stride(l, d) + ns * stride(spectator, d)
    };
    DMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (row / d, row % d);
        let (ap, bp) = (col / d, col % d);
        (0..d).map(|m| rho[(flat(a, b, m), flat(ap, bp, m))]).sum()
    })
}

/// Eigenvalues of a Hermitian complex matrix through the real symmetric
/// embedding `[[X, −Y], [Y, X]]`, whose spectrum is that of `X + iY`
/// doubled.
fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let n = m.nrows();
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            big[(i, j)] = z.re;
            big[(n + i, n + j)] = z.re;
            big[(i, n + j)] = -z.im;
            big[(n + i, j)] = z.im;
        }
    }
    let ev = big.symmetric_eigen().eigenvalues;
    let mut v: Vec<f64> = ev.iter().cloned().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Keep one copy of each doubled eigenvalue.
    v.into_iter().step_by(2).collect()
}

/// Logarithmic negativity `ln ‖ρ^{T_first}‖₁` of a two-mode density
/// matrix indexed `n_first d + n_second`.
pub fn log_negativity_two_mode(rho2: &DMatrix<C64>, d: usize) -> f64 {
    let pt = DMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (row / d, row % d);
        let (ap, bp) = (col / d, col % d);
        rho2[(ap * d + b, a * d + bp)]
    });
    let sum: f64 = hermitian_eigenvalues(&pt).iter().map(|l| l.abs()).sum();
    sum.ln().max(0.0)
}

/// Everything the Gaussian pipeline is checked against.
#[derive(Debug, Clone)]
pub struct FockObservables {
    pub n: [f64; 3],
    pub covariance: Mat6,
    /// Pairwise log-negativities in the order `(ab, ac, bc)`.
    pub e_pair: [f64; 3],
}

/// Occupations, ladder covariance, and pairwise negativities of `ρ`.
pub fn observables(rho: &DMatrix<C64>, d: usize) -> FockObservables {
    let mut e_pair = [0.0; 3];
    for (slot, (k, l)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let reduced = partial_trace_pair(rho, d, k, l);
        e_pair[slot] = log_negativity_two_mode(&reduced, d);
    }
    FockObservables {
        n: occupations(rho, d),
        covariance: covariance(rho, d),
        e_pair,
    }
}

/// Wick-factorization residual of the fourth moment of mode `j`:
/// `|⟨a†a a†a⟩ − (2n² + n + |⟨aa⟩|²)|`. Zero for any Gaussian state
/// (up to truncation), so it measures non-Gaussianity directly. The
/// decohered states here give a residual `∝ 1/Γ` that no cutoff growth
/// removes: the evolution maps the vacuum to a mixture of distinct
/// Gaussians, which is Gaussian only in the Schrödinger limit.
pub fn wick_fourth_moment_residual(rho: &DMatrix<C64>, d: usize, j: usize) -> f64 {
    let fourth = expect_product(rho, d, &[(j, true), (j, false), (j, true), (j, false)]);
    let n = expect_product(rho, d, &[(j, true), (j, false)]).re;
    let aa = expect_product(rho, d, &[(j, false), (j, false)]);
    (fourth.re - (2.0 * n * n + n + aa.norm_sqr())).abs() + fourth.im.abs()
}

/// Basic state-validity residuals: `(|tr ρ − 1|, hermiticity, most
/// negative eigenvalue)`.
pub fn density_residuals(rho: &DMatrix<C64>) -> (f64, f64, f64) {
    let trace = (rho.trace() - C64::new(1.0, 0.0)).norm();
    let herm = (rho - rho.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let min_ev = hermitian_eigenvalues(rho)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    (trace, herm, min_ev.min(0.0))
}

/// One-parameter Gaussian unitaries with a known symplectic action,
/// used to validate the factor conventions against brute force.
#[derive(Debug, Clone, Copy)]
pub enum GaussianFactor {
    /// `exp(z (a₁†a₂ − a₂†a₁))`, the plane rotation of modes 1, 2.
    Rotation12(f64),
    /// `exp(z (a₃†a₁ − a₁†a₃))`, the plane rotation of modes 1, 3.
    Rotation13(f64),
    /// `exp(Σ_j r_j/2 (a_j² − a_j†²))`, independent squeezes.
    Squeeze([f64; 3]),
}

impl GaussianFactor {
    /// The symplectic matrix this unitary should conjugate `ξ` by.
    pub fn symplectic(&self) -> Mat6 {
        let unit = [1.0, 1.0, 1.0];
        match self {
            GaussianFactor::Rotation12(z) => rotation_12(*z, &unit),
            GaussianFactor::Rotation13(z) => rotation_13(*z, &unit),
            GaussianFactor::Squeeze(r) => squeeze_123(r),
        }
    }

    /// The (real, orthogonal) matrix of the unitary at cutoff `d`.
    pub fn unitary(&self, d: usize) -> DMatrix<f64> {
        let dim = d * d * d;
        let mut gen = DMatrix::<f64>::zeros(dim, dim);
        let mut add_quad = |j: usize, k: usize, both_up: bool, w: f64| {
            // w · a_j† a_k (or w · a_j† a_k† when both_up).
            for i in 0..dim {
                let (nj, nk) = (digit(i, j, d), digit(i, k, d));
                if both_up {
                    if j == k {
                        if nj + 2 >= d {
                            continue;
                        }
                        let amp = ((nj + 1) as f64 * (nj + 2) as f64).sqrt();
                        gen[(i + 2 * stride(j, d), i)] += w * amp;
                    }
                } else {
                    if nk == 0 || nj + usize::from(j != k) > d - 1 {
                        continue;
                    }
                    if j == k {
                        gen[(i, i)] += w * nj as f64;
                    } else {
                        if nj + 1 >= d {
                            continue;
                        }
                        let amp = ((nj + 1) as f64 * nk as f64).sqrt();
                        gen[(i + stride(j, d) - stride(k, d), i)] += w * amp;
                    }
                }
            }
        };
        match self {
            GaussianFactor::Rotation12(z) => {
                add_quad(0, 1, false, *z);
                add_quad(1, 0, false, -*z);
            }
            GaussianFactor::Rotation13(z) => {
                add_quad(2, 0, false, *z);
                add_quad(0, 2, false, -*z);
            }
            GaussianFactor::Squeeze(r) => {
                // a² − a†² = (a†²)ᵀ − a†²: build a†² and antisymmetrize.
                for (j, rj) in r.iter().enumerate() {
                    if *rj != 0.0 {
                        add_quad(j, j, true, -rj / 2.0);
                    }
                }
                let t = gen.transpose();
                gen -= t;
            }
        }
        real_matrix_exp(&gen)
    }
}

/// Scaling-and-squaring Taylor exponential; the generators here are
/// real with moderate norm, so plain Taylor after scaling is accurate.
fn real_matrix_exp(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let norm = g.iter().map(|x| x.abs()).fold(0.0, f64::max) * n as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 2;
    let scaled = g / 2f64.powi(squarings as i32);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut acc = DMatrix::<f64>::identity(n, n);
    for k in 1..=20 {
        term = (&term * &scaled) / k as f64;
        acc += &term;
        if term.iter().map(|x| x.abs()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// Maximum deviation of `U ξ_n U⁻¹` from `Σ_m S_nm ξ_m` over the six
/// ladder operators, measured on matrix entries whose *total* quanta
/// stay well below the cutoff. The total is the right quantity to
/// bound: the rotations conserve it, so every sector that fits inside
/// the truncated space is reproduced exactly, while a per-mode bound
/// would admit states (e.g. |6,6,0⟩ at d = 10) that rotate straight
/// out of the box. Squeezes do not conserve quanta, so their window
/// keeps extra headroom for the 2-quanta ladder leakage. `s` is the
/// claimed symplectic matrix, so feeding a corrupted one makes this a
/// negative control.
pub fn conjugation_residual_vs(s: &Mat6, f: GaussianFactor, d: usize) -> Result<f64> {
    if d < 6 {
        return Err(Error::InvalidParameter(format!(
            "conjugation check needs cutoff ≥ 6, got {d}"
        )));
    }
    let dim = d * d * d;
    if dim > MAX_DIM {
        return Err(Error::Dimension { dim, max: MAX_DIM });
    }
    let u = f.unitary(d);
    // Ladder matrices ξ_n in the full space.
    let ladder: Vec<DMatrix<f64>> = (0..6)
        .map(|n| {
            let (mode, dag) = (n / 2, n % 2 == 1);
            DMatrix::from_fn(dim, dim, |r, c| {
                let nc = digit(c, mode, d);
                if dag {
                    if nc + 1 < d && r == c + stride(mode, d) {
                        (nc as f64 + 1.0).sqrt()
                    } else {
                        0.0
                    }
                } else if nc > 0 && r + stride(mode, d) == c {
                    (nc as f64).sqrt()
                } else {
                    0.0
                }
            })
        })
        .collect();
    let n_safe = match f {
        GaussianFactor::Rotation12(_) | GaussianFactor::Rotation13(_) => d - 2,
        GaussianFactor::Squeeze(_) => 2,
    };
    let safe = |i: usize| (0..3).map(|m| digit(i, m, d)).sum::<usize>() <= n_safe;
    let mut worst: f64 = 0.0;
    for n in 0..6 {
        let conj = &u * &ladder[n] * u.transpose();
        let mut combo = DMatrix::<C64>::zeros(dim, dim);
        for m in 0..6 {
            let w = s[(n, m)];
            if w.norm() > 0.0 {
                combo += ladder[m].map(|x| w * x);
            }
        }
        for r in 0..dim {
            for c in 0..dim {
                if safe(r) && safe(c) {
                    let diff = (C64::new(conj[(r, c)], 0.0) - combo[(r, c)]).norm();
                    worst = worst.max(diff);
                }
            }
        }
    }
    Ok(worst)
}

/// [`conjugation_residual_vs`] against the factor's own symplectic
/// matrix; small values validate the factor conventions.
pub fn factor_conjugation_residual(f: GaussianFactor, d: usize) -> Result<f64> {
    conjugation_residual_vs(&f.symplectic(), f, d)
}

/// Drift of the headline observables when the cutoff grows by 2;
/// errors out when it exceeds `cfg.convergence_tol`.
pub fn cutoff_convergence(
    params: &SystemParams,
    t: f64,
    gamma: f64,
    cfg: &FockConfig,
) -> Result<f64> {
    let bigger = FockConfig {
        cutoff: cfg.cutoff + 2,
        ..*cfg
    };
    bigger.validate()?;
    let lo = FockOracle::new(*params, *cfg)?;
    let hi = FockOracle::new(*params, bigger)?;
    let obs_lo = observables(&lo.milburn_density(t, gamma)?, cfg.cutoff);
    let obs_hi = observables(&hi.milburn_density(t, gamma)?, bigger.cutoff);
    let mut drift: f64 = 0.0;
    for j in 0..3 {
        drift = drift.max((obs_lo.n[j] - obs_hi.n[j]).abs());
        drift = drift.max((obs_lo.e_pair[j] - obs_hi.e_pair[j]).abs());
    }
    if drift > cfg.convergence_tol {
        return Err(Error::Convergence {
            context: "fock::cutoff_convergence",
            detail: format!("observable drift {drift:e} at cutoff {}", cfg.cutoff),
        });
    }
    Ok(drift)
}
