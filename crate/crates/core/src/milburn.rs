//! Covariance dynamics under intrinsic decoherence.
//!
//! The evolution is a Poisson-weighted mixture of stroboscopic unitaries:
//! with weights `w_k = e^{−Γt} (Γt)^k / k!`, the state at time `t` is
//! `Σ_k w_k U^k ρ(0) U†^k`, `U = e^{−iH/Γ}`. Starting from the bare
//! vacuum (ladder covariance `σ(0) = I`), each unitary acts on the ladder
//! vector through `A diag(e^{iλ k/Γ}) A⁻¹`, and the Poisson sum collapses
//! entrywise to the closed kernel
//!
//! ```text
//! σ(t) = A Ξ(t) A† ,   Ξ_nm(t) = M_nm · exp[ Γt (e^{i(λ_n−λ_m)/Γ} − 1) ] ,
//! M = A⁻¹ (A⁻¹)† .
//! ```
//!
//! The `Γ → ∞` (ordinary Schrödinger) limit replaces the kernel by
//! `e^{i(λ_n−λ_m) t}`, and the `t → ∞` steady state keeps exactly the
//! entries with `λ_n = λ_m`. A direct truncated Poisson sum is kept as an
//! oracle for the resummation.

use crate::model::{NormalModeData, SystemParams};
use crate::symplectic::{self, Mat6};
use crate::{Error, Result, C64};

/// Ladder-basis covariance `σ_nm = ⟨ξ_n ξ_m† + ξ_m† ξ_n⟩` (vacuum = I),
/// labeled with the evolution that produced it. `gamma` is `+∞` for
/// unitary evolution and `t` is `+∞` for the steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub mat: Mat6,
    pub t: f64,
    pub gamma: f64,
}

impl CovarianceMatrix {
    /// Hermiticity residual, `max |σ − σ†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        (self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Precomputed normal-mode factorization of the dynamics for one
/// parameter set. Construction does the full diagonalization once; each
/// time point then costs two 6×6 multiplications.
#[derive(Debug, Clone)]
pub struct MilburnPropagator {
    params: SystemParams,
    normal: NormalModeData,
    a: Mat6,
    a_inv: Mat6,
    /// `M = A⁻¹ (A⁻¹)†`, the vacuum covariance in the normal-mode frame.
    m: Mat6,
    /// Commutator eigenvalues `(−Ω₁, +Ω₁, −Ω₂, +Ω₂, −Ω₃, +Ω₃)`.
    lambda: [f64; 6],
}

/// Relative tolerance for treating two mode eigenvalues as equal when
/// selecting the non-decaying entries of the steady-state kernel.
const STEADY_TOL: f64 = 1e-12;

impl MilburnPropagator {
    pub fn new(params: SystemParams) -> Result<Self> {
        let normal = NormalModeData::compute(&params)?;
        let (a, a_inv) = symplectic::compose_factor(&normal, &params);
        // Guard the factorization before it feeds every later result.
        let resid = (a * a_inv - Mat6::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if resid > 1e-9 {
            return Err(Error::Unphysical {
                context: "milburn::MilburnPropagator::new",
                residual: resid,
            });
        }
        let m = a_inv * a_inv.adjoint();
        let lambda = symplectic::mode_eigenvalues(&normal.omega_normal);
        Ok(MilburnPropagator {
            params,
            normal,
            a,
            a_inv,
            m,
            lambda,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn normal_modes(&self) -> &NormalModeData {
        &self.normal
    }

    /// The factor `A` with `ξ = A ζ`.
    pub fn factor(&self) -> &Mat6 {
        &self.a
    }

    pub fn factor_inv(&self) -> &Mat6 {
        &self.a_inv
    }

    pub fn mode_eigenvalues(&self) -> &[f64; 6] {
        &self.lambda
    }

    /// Assembles `σ = A (M ∘ kernel) A†` and symmetrizes roundoff.
    fn assemble(&self, t: f64, gamma: f64, kernel: impl Fn(f64) -> C64) -> CovarianceMatrix {
        let mut xi = Mat6::zeros();
        for n in 0..6 {
            for m in 0..6 {
                xi[(n, m)] = self.m[(n, m)] * kernel(self.lambda[n] - self.lambda[m]);
            }
        }
        let s = self.a * xi * self.a.adjoint();
        CovarianceMatrix {
            mat: (s + s.adjoint()).scale(0.5),
            t,
            gamma,
        }
    }

    /// Covariance at time `t` for decoherence rate `gamma`.
    pub fn covariance(&self, t: f64, gamma: f64) -> Result<CovarianceMatrix> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        let gt = gamma * t;
        Ok(self.assemble(t, gamma, |d| {
            let phase = C64::new(0.0, d / gamma).exp();
            ((phase - 1.0) * gt).exp()
        }))
    }

    /// Covariance at time `t` under purely unitary evolution.
    pub fn covariance_schrodinger(&self, t: f64) -> Result<CovarianceMatrix> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t}")));
        }
        Ok(self.assemble(t, f64::INFINITY, |d| C64::new(0.0, d * t).exp()))
    }

    /// The `t → ∞` covariance: kernel 1 on entries with `λ_n = λ_m`
    /// (within [`STEADY_TOL`] relative), 0 elsewhere.
    pub fn covariance_steady(&self) -> CovarianceMatrix {
        let scale = self.lambda.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        self.assemble(f64::INFINITY, self.params.gamma, |d| {
            if d.abs() <= STEADY_TOL * scale {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Dispatches on the parameter set's own `gamma` / Schrödinger flag.
    pub fn evolve(&self, t: f64) -> Result<CovarianceMatrix> {
        if self.params.schrodinger_limit {
            self.covariance_schrodinger(t)
        } else {
            self.covariance(t, self.params.gamma)
        }
    }

    /// Truncated Poisson-sum oracle for [`covariance`]: accumulates
    /// `Σ_k w_k D_k M D_k†` term by term until the neglected Poisson tail
    /// mass drops below `epsilon`, then applies `A … A†` once. The
    /// resulting matrix error is bounded by `epsilon · ‖A‖² ‖M‖`.
    ///
    /// Returns the covariance and the number of terms taken. This is the
    /// definition of the dynamics; agreement with the closed kernel
    /// validates the resummation.
    pub fn covariance_series(
        &self,
        t: f64,
        gamma: f64,
        epsilon: f64,
    ) -> Result<(CovarianceMatrix, usize)> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon}")));
        }
        let gt = gamma * t;
        // Phasor recurrence for D_k = diag(e^{iλ k/Γ}).
        let step: Vec<C64> = self
            .lambda
            .iter()
            .map(|l| C64::new(0.0, l / gamma).exp())
            .collect();
        let mut phase = [C64::new(1.0, 0.0); 6];

        let mut xi = Mat6::zeros();
        let mut ln_w = -gt; // ln w_0
        let mut mass = 0.0f64;
        // Poisson mass beyond k ≈ Γt + 40√(Γt) + 60 is far below any
        // useful epsilon; treat running past it as non-convergence.
        let k_max = (gt + 40.0 * gt.sqrt() + 60.0).ceil() as usize;
        for k in 0..=k_max {
            let w = ln_w.exp();
            if w > 0.0 {
                mass += w;
                for n in 0..6 {
                    for m in 0..6 {
                        xi[(n, m)] += self.m[(n, m)] * phase[n] * phase[m].conj() * w;
                    }
                }
            }
            if 1.0 - mass <= epsilon {
                let s = self.a * xi * self.a.adjoint();
                return Ok((
                    CovarianceMatrix {
                        mat: (s + s.adjoint()).scale(0.5),
                        t,
                        gamma,
                    },
                    k + 1,
                ));
            }
            ln_w += gt.ln() - ((k + 1) as f64).ln();
            for (p, s) in phase.iter_mut().zip(&step) {
                *p *= *s;
            }
        }
        Err(Error::Convergence {
            context: "milburn::covariance_series",
            detail: format!("tail {:.3e} after {k_max} terms", 1.0 - mass),
        })
    }
}

/// Time for the slowest decaying coherence to relax: the kernel damps the
/// `(a_j, a_j†)` coherence of normal mode `j` at rate `Γ(1 − cos(2Ω_j/Γ))`,
/// and the estimate is the largest of the three reciprocal rates.
/// Returns `+∞` when some rate vanishes (e.g. `2Ω_j/Γ` at a multiple of
/// `2π`).
pub fn steady_time(omega_normal: &[f64; 3], gamma: f64) -> f64 {
    let mut t: f64 = 0.0;
    for w in omega_normal {
        let rate = gamma * (1.0 - (2.0 * w / gamma).cos());
        if rate <= 0.0 {
            return f64::INFINITY;
        }
        t = t.max(1.0 / rate);
    }
    t
}
