//! Observables extracted from a ladder-basis covariance matrix: mean
//! virtual excitations, their bipartite/tripartite geometric-mean
//! measures with the polygamy trade-off, symplectic spectra, and
//! logarithmic negativity for every 1+1 and 1+2 split.

use nalgebra::{Matrix2, Matrix4};

use crate::milburn::CovarianceMatrix;
use crate::symplectic::Mat6;
use crate::{cubic, Error, Result, C64};

/// Mode labels; `A`, `B`, `C` are oscillators 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
    C,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::A, Mode::B, Mode::C];

    pub fn index(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 1,
            Mode::C => 2,
        }
    }

    /// The two modes on the other side of the 1+2 split.
    pub fn others(self) -> (Mode, Mode) {
        match self {
            Mode::A => (Mode::B, Mode::C),
            Mode::B => (Mode::A, Mode::C),
            Mode::C => (Mode::A, Mode::B),
        }
    }
}

/// Unordered mode pairs in the fixed reporting order `ab, ac, bc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModePair {
    AB,
    AC,
    BC,
}

impl ModePair {
    pub const ALL: [ModePair; 3] = [ModePair::AB, ModePair::AC, ModePair::BC];

    pub fn indices(self) -> (usize, usize) {
        match self {
            ModePair::AB => (0, 1),
            ModePair::AC => (0, 2),
            ModePair::BC => (1, 2),
        }
    }
}

/// Mean excitations and the geometric-mean sharing measures built from
/// them, in fixed label order (`pairwise` is `a|b, a|c, b|c`;
/// `one_vs_two` is `a|bc, b|ac, c|ab`; `delta` likewise per first label).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationReport {
    pub n: [f64; 3],
    pub pairwise: [f64; 3],
    pub one_vs_two: [f64; 3],
    pub delta: [f64; 3],
}

/// Logarithmic negativities: pairwise values with their minimal
/// partially-transposed symplectic eigenvalues, the 1+2 split values,
/// and the monogamy residuals `E_{k|lm} − E_kl − E_km`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub e_pair: [f64; 3],
    pub nu_tilde: [f64; 3],
    pub e_one_vs_two: [f64; 3],
    pub monogamy_residual: [f64; 3],
}

/// Populations this far below zero are roundoff from an exact zero and
/// are clamped; see [`mean_excitations`].
const CLAMP_TOL: f64 = 1e-6;
/// Hermiticity / reality tolerance on inputs that must be Hermitian.
const HERM_TOL: f64 = 1e-8;

/// Mean excitation numbers `⟨N_j⟩ = ½(σ_{2j-1,2j-1} − 1)` (1-based
/// a-row diagonal entries).
///
/// Small negative values are float noise around an exactly-empty mode and
/// are clamped to 0; anything below `−1e-6` signals a broken covariance
/// and errors out.
pub fn mean_excitations(sigma: &CovarianceMatrix) -> Result<[f64; 3]> {
    let mut n = [0.0; 3];
    for j in 0..3 {
        let d = sigma.mat[(2 * j, 2 * j)];
        if d.im.abs() > HERM_TOL {
            return Err(Error::Unphysical {
                context: "analysis::mean_excitations",
                residual: d.im.abs(),
            });
        }
        let v = 0.5 * (d.re - 1.0);
        if v < -CLAMP_TOL {
            return Err(Error::Unphysical {
                context: "analysis::mean_excitations",
                residual: v,
            });
        }
        n[j] = v.max(0.0);
    }
    Ok(n)
}

/// Geometric-mean sharing measures:
/// `N_{k|l} = √(N_k N_l)`, `N_{k|lm} = √(N_k · N_{l|m})`,
/// `δᵏ_{lm} = N_{k|l} + N_{k|m} − N_{k|lm}`.
pub fn excitation_measures(n: &[f64; 3]) -> ExcitationReport {
    let gm = |x: f64, y: f64| (x * y).sqrt();
    let pairwise = [gm(n[0], n[1]), gm(n[0], n[2]), gm(n[1], n[2])];
    let one_vs_two = [
        (n[0] * pairwise[2]).sqrt(),
        (n[1] * pairwise[1]).sqrt(),
        (n[2] * pairwise[0]).sqrt(),
    ];
    let delta = [
        pairwise[0] + pairwise[1] - one_vs_two[0],
        pairwise[0] + pairwise[2] - one_vs_two[1],
        pairwise[1] + pairwise[2] - one_vs_two[2],
    ];
    ExcitationReport {
        n: *n,
        pairwise,
        one_vs_two,
        delta,
    }
}

/// Polygamy of the excitation measure: all three `δ ≥ −1e-9`.
/// Returns the verdict and the raw residuals.
pub fn polygamy_check(report: &ExcitationReport) -> (bool, [f64; 3]) {
    let ok = report.delta.iter().all(|d| *d >= -1e-9);
    (ok, report.delta)
}

/// Mean excitations plus all derived sharing measures.
pub fn excitation_report(sigma: &CovarianceMatrix) -> Result<ExcitationReport> {
    Ok(excitation_measures(&mean_excitations(sigma)?))
}

/// The 4×4 covariance of two modes: rows/columns
/// `(a_k, a_k†, a_l, a_l†)` pulled out of the 6×6 matrix. Discarding a
/// mode of a Gaussian state is exactly this index restriction.
pub fn reduce_two_mode(sigma: &CovarianceMatrix, pair: ModePair) -> Matrix4<C64> {
    let (k, l) = pair.indices();
    let rows = [2 * k, 2 * k + 1, 2 * l, 2 * l + 1];
    Matrix4::from_fn(|i, j| sigma.mat[(rows[i], rows[j])])
}

/// Partial transposition of mode `k` in the ladder basis: swap the
/// `(a_k, a_k†)` row pair and column pair. (In quadratures this is the
/// momentum flip; on ladder indices it lands as a pure swap, with no
/// conjugation.)
pub fn partial_transpose(sigma: &CovarianceMatrix, mode: Mode) -> Mat6 {
    let k = mode.index();
    let mut m = sigma.mat;
    m.swap_rows(2 * k, 2 * k + 1);
    m.swap_columns(2 * k, 2 * k + 1);
    m
}

fn det2(m: Matrix2<C64>) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn real_part(z: C64, context: &'static str) -> Result<f64> {
    if z.im.abs() > HERM_TOL * (1.0 + z.re.abs()) {
        return Err(Error::Unphysical {
            context,
            residual: z.im.abs(),
        });
    }
    Ok(z.re)
}

/// Pairwise logarithmic negativity `(E_kl, ν̃_min)` of the reduced
/// two-mode state, through the determinant route:
///
/// ```text
/// Δ = det σ_k + det σ_l − 2 det σ_kl ,
/// ν̃_min = √( (Δ − √(Δ² − 4 det σ^{kl})) / 2 ) ,
/// E = max(0, −ln ν̃_min) ,
/// ```
///
/// where the −2 sign on the off-diagonal block determinant encodes the
/// partial transposition.
pub fn log_negativity_pair(sigma: &CovarianceMatrix, pair: ModePair) -> Result<(f64, f64)> {
    const CTX: &str = "analysis::log_negativity_pair";
    let s4 = reduce_two_mode(sigma, pair);
    let blk = |r: usize, c: usize| Matrix2::from_fn(|i, j| s4[(2 * r + i, 2 * c + j)]);
    let da = real_part(det2(blk(0, 0)), CTX)?;
    let db = real_part(det2(blk(1, 1)), CTX)?;
    let dc = real_part(det2(blk(0, 1)), CTX)?;
    let d4 = real_part(s4.determinant(), CTX)?;

    let delta = da + db - 2.0 * dc;
    let disc = delta * delta - 4.0 * d4;
    if disc < -1e-9 {
        return Err(Error::Unphysical {
            context: CTX,
            residual: disc,
        });
    }
    let nu_sq = 0.5 * (delta - disc.max(0.0).sqrt());
    if nu_sq < -1e-9 {
        return Err(Error::Unphysical {
            context: CTX,
            residual: nu_sq,
        });
    }
    // ν̃ = 0 would mean a singular reduced state, which no state in this
    // pipeline approaches; guard instead of returning E = ∞.
    if nu_sq.max(0.0).sqrt() < 1e-12 {
        return Err(Error::Unphysical {
            context: CTX,
            residual: nu_sq,
        });
    }
    let nu = nu_sq.max(0.0).sqrt();
    Ok(((-nu.ln()).max(0.0), nu))
}

/// Symplectic spectrum of a 6×6 covariance, descending.
///
/// The eigenvalues of `Zσ` (`Z = ⊕ diag(1, −1)`) come in `±ν` pairs and
/// equal those of the Hermitian similarity `σ^{1/2} Z σ^{1/2}`, so they
/// are read off a pair of Hermitian eigensolves. That keeps clustered
/// spectra accurate: near-pure states have all ν ≈ 1, where any
/// characteristic-polynomial route loses most of its digits at the
/// triple root while Hermitian eigenvalues stay perfectly conditioned.
/// The closed-form trace route survives as
/// [`symplectic_spectrum_traces`], cross-checked in the tests.
pub fn symplectic_spectrum_mat(sigma: &Mat6) -> Result<[f64; 3]> {
    const CTX: &str = "analysis::symplectic_spectrum";
    let herm = (sigma - sigma.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if herm > HERM_TOL {
        return Err(Error::Unphysical {
            context: CTX,
            residual: herm,
        });
    }
    let eig = nalgebra::SymmetricEigen::new(*sigma);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut d = Mat6::zeros();
    for i in 0..6 {
        let v = eig.eigenvalues[i];
        if v < -1e-9 * scale {
            return Err(Error::Unphysical {
                context: CTX,
                residual: v,
            });
        }
        d[(i, i)] = C64::new(v.max(0.0).sqrt(), 0.0);
    }
    let half = eig.eigenvectors * d * eig.eigenvectors.adjoint();
    let mut hz = half;
    for j in 0..3 {
        for r in 0..6 {
            hz[(r, 2 * j + 1)] = -hz[(r, 2 * j + 1)];
        }
    }
    let vals = nalgebra::SymmetricEigen::new(hz * half).eigenvalues;
    let mut mags: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok([mags[0], mags[2], mags[4]])
}

/// The same spectrum from the traces of powers of `T = (Zσ)²` via
/// Newton's identities and the trigonometric cubic, with no eigenvector
/// computation. A genuinely independent closed-form cross-check of
/// [`symplectic_spectrum_mat`], accurate while the three ν are well
/// separated; at coalescing roots the characteristic polynomial can
/// shed up to ~ε^(1/3) of accuracy, which is why it is the check and
/// not the default.
pub fn symplectic_spectrum_traces(sigma: &Mat6) -> Result<[f64; 3]> {
    const CTX: &str = "analysis::symplectic_spectrum_traces";
    let herm = (sigma - sigma.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if herm > HERM_TOL {
        return Err(Error::Unphysical {
            context: CTX,
            residual: herm,
        });
    }
    let mut zs = *sigma;
    for j in 0..3 {
        for c in 0..6 {
            zs[(2 * j + 1, c)] = -zs[(2 * j + 1, c)];
        }
    }
    let t = zs * zs;
    let t2 = t * t;
    let p1 = real_part(t.trace(), CTX)? / 2.0;
    let p2 = real_part(t2.trace(), CTX)? / 2.0;
    let p3 = real_part((t2 * t).trace(), CTX)? / 2.0;
    let e1 = p1;
    let e2 = 0.5 * (p1 * p1 - p2);
    let e3 = (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
    let mu = cubic::roots_from_invariants(e1, e2, e3)?;
    let scale = 1.0 + p1.abs();
    let mut nu = [0.0; 3];
    for (out, m) in nu.iter_mut().zip(&mu) {
        if *m < -1e-9 * scale {
            return Err(Error::Unphysical {
                context: CTX,
                residual: *m,
            });
        }
        *out = m.max(0.0).sqrt();
    }
    nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(nu)
}

/// [`symplectic_spectrum_mat`] on a covariance value.
pub fn symplectic_spectrum(sigma: &CovarianceMatrix) -> Result<[f64; 3]> {
    symplectic_spectrum_mat(&sigma.mat)
}

/// Deviation of `(Zσ)²` from the identity, max row-sum norm.
///
/// A Gaussian state is pure exactly when `(Zσ)² = I`, and every
/// eigenvalue of a matrix is bounded by any operator norm, so a
/// residual of `r` certifies `|ν − 1| ≤ |ν² − 1| ≤ r` for each
/// symplectic eigenvalue. Near purity this is far better conditioned
/// than the characteristic cubic, whose roots coalesce at `ν = 1`.
pub fn purity_residual(sigma: &CovarianceMatrix) -> f64 {
    let mut zs = sigma.mat;
    for j in 0..3 {
        for c in 0..6 {
            zs[(2 * j + 1, c)] = -zs[(2 * j + 1, c)];
        }
    }
    let mut t = zs * zs;
    for i in 0..6 {
        t[(i, i)] -= C64::new(1.0, 0.0);
    }
    (0..6)
        .map(|r| (0..6).map(|c| t[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Symplectic spectrum of a 4×4 two-mode covariance, descending; the
/// quadratic analogue of the three-mode trace method.
pub fn symplectic_spectrum_two_mode(sigma: &Matrix4<C64>) -> Result<[f64; 2]> {
    const CTX: &str = "analysis::symplectic_spectrum_two_mode";
    let herm = (sigma - sigma.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if herm > HERM_TOL {
        return Err(Error::Unphysical {
            context: CTX,
            residual: herm,
        });
    }
    let mut zs = *sigma;
    for j in 0..2 {
        for c in 0..4 {
            zs[(2 * j + 1, c)] = -zs[(2 * j + 1, c)];
        }
    }
    let t = zs * zs;
    let p1 = real_part(t.trace(), CTX)? / 2.0;
    let p2 = real_part((t * t).trace(), CTX)? / 2.0;
    let e1 = p1;
    let e2 = 0.5 * (p1 * p1 - p2);
    let disc = e1 * e1 - 4.0 * e2;
    if disc < -1e-9 * (1.0 + e1 * e1) {
        return Err(Error::Unphysical {
            context: CTX,
            residual: disc,
        });
    }
    let root = disc.max(0.0).sqrt();
    let scale = 1.0 + p1.abs();
    let mut nu = [0.0; 2];
    for (out, m) in nu.iter_mut().zip(&[0.5 * (e1 + root), 0.5 * (e1 - root)]) {
        if *m < -1e-9 * scale {
            return Err(Error::Unphysical {
                context: CTX,
                residual: *m,
            });
        }
        *out = m.max(0.0).sqrt();
    }
    Ok(nu)
}

/// Logarithmic negativity across the `k | lm` split: partial
/// transposition of mode `k` on the full state, then
/// `E = Σ_i max(0, −ln ν̃_i)` over the three symplectic eigenvalues.
pub fn log_negativity_one_vs_two(sigma: &CovarianceMatrix, mode: Mode) -> Result<f64> {
    let pt = partial_transpose(sigma, mode);
    let nu = symplectic_spectrum_mat(&pt)?;
    Ok(nu.iter().map(|v| (-v.ln()).max(0.0)).sum())
}

/// All negativity data for one state.
pub fn entanglement_report(sigma: &CovarianceMatrix) -> Result<EntanglementReport> {
    let mut e_pair = [0.0; 3];
    let mut nu_tilde = [0.0; 3];
    for (i, pair) in ModePair::ALL.iter().enumerate() {
        let (e, nu) = log_negativity_pair(sigma, *pair)?;
        e_pair[i] = e;
        nu_tilde[i] = nu;
    }
    let mut e_one_vs_two = [0.0; 3];
    for (i, mode) in Mode::ALL.iter().enumerate() {
        e_one_vs_two[i] = log_negativity_one_vs_two(sigma, *mode)?;
    }
    // E_{k|lm} − E_kl − E_km with the pairwise slots (ab, ac, bc).
    let monogamy_residual = [
        e_one_vs_two[0] - e_pair[0] - e_pair[1],
        e_one_vs_two[1] - e_pair[0] - e_pair[2],
        e_one_vs_two[2] - e_pair[1] - e_pair[2],
    ];
    Ok(EntanglementReport {
        e_pair,
        nu_tilde,
        e_one_vs_two,
        monogamy_residual,
    })
}

/// Smallest symplectic eigenvalue of the full state; physical Gaussian
/// states have `ν_min ≥ 1`.
pub fn min_symplectic_eigenvalue(sigma: &CovarianceMatrix) -> Result<f64> {
    Ok(symplectic_spectrum(sigma)?[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milburn::MilburnPropagator;
    use crate::model::SystemParams;
    use crate::symplectic::{rotation_12, squeeze_123};

    fn cov(mat: Mat6) -> CovarianceMatrix {
        CovarianceMatrix {
            mat,
            t: 0.0,
            gamma: 1.0,
        }
    }

    fn from_factor(s: Mat6) -> CovarianceMatrix {
        cov(s * s.adjoint())
    }

    #[test]
    fn vacuum_is_empty_and_separable() {
        let sigma = cov(Mat6::identity());
        assert_eq!(mean_excitations(&sigma).unwrap(), [0.0; 3]);
        let ent = entanglement_report(&sigma).unwrap();
        assert_eq!(ent.e_pair, [0.0; 3]);
        for nu in ent.nu_tilde {
            assert!((nu - 1.0).abs() < 1e-12);
        }
        assert_eq!(symplectic_spectrum(&sigma).unwrap(), [1.0; 3]);
    }

    #[test]
    fn excitation_measure_arithmetic() {
        let r = excitation_measures(&[1.0, 1.0, 1.0]);
        assert_eq!(r.pairwise, [1.0; 3]);
        assert_eq!(r.one_vs_two, [1.0; 3]);
        assert_eq!(r.delta, [1.0; 3]);

        let r = excitation_measures(&[4.0, 1.0, 0.0]);
        assert_eq!(r.pairwise, [2.0, 0.0, 0.0]);
        assert_eq!(r.one_vs_two, [0.0, 0.0, 0.0]);
        assert_eq!(r.delta, [2.0, 2.0, 0.0]);
        assert!(polygamy_check(&r).0);
    }

    #[test]
    fn squeezed_mode_population() {
        let r = 0.3f64;
        let sigma = from_factor(squeeze_123(&[r, 0.0, 0.0]));
        let n = mean_excitations(&sigma).unwrap();
        assert!((n[0] - r.sinh().powi(2)).abs() < 1e-12);
        assert_eq!(n[1], 0.0);
        assert_eq!(n[2], 0.0);
        // Pure state: unit symplectic spectrum.
        for nu in symplectic_spectrum(&sigma).unwrap() {
            assert!((nu - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_mode_squeezed_negativity() {
        // Beam splitter + opposite squeezes = two-mode squeezing between
        // modes 1 and 2; E = 2s, ν̃_min = e^{−2s}.
        let s = 0.1;
        let w = [1.0, 1.0, 1.0];
        let f = rotation_12(std::f64::consts::FRAC_PI_4, &w)
            * squeeze_123(&[s, -s, 0.0])
            * rotation_12(-std::f64::consts::FRAC_PI_4, &w);
        let sigma = from_factor(f);
        let (e, nu) = log_negativity_pair(&sigma, ModePair::AB).unwrap();
        assert!((e - 2.0 * s).abs() < 1e-9, "E = {e}");
        assert!((nu - (-2.0 * s).exp()).abs() < 1e-9);
        // Unentangled pairs with the spectator mode.
        let (e_ac, _) = log_negativity_pair(&sigma, ModePair::AC).unwrap();
        let (e_bc, _) = log_negativity_pair(&sigma, ModePair::BC).unwrap();
        assert!(e_ac.abs() < 1e-10 && e_bc.abs() < 1e-10);
        // 1-vs-2 splits: a|bc and b|ac both see the same 2s; c|ab nothing.
        let ent = entanglement_report(&sigma).unwrap();
        assert!((ent.e_one_vs_two[0] - 2.0 * s).abs() < 1e-9);
        assert!((ent.e_one_vs_two[1] - 2.0 * s).abs() < 1e-9);
        assert!(ent.e_one_vs_two[2].abs() < 1e-10);
        // Monogamy residuals vanish for this state.
        for r in ent.monogamy_residual {
            assert!(r.abs() < 1e-9);
        }
        // Pure state physicality.
        for nu in symplectic_spectrum(&sigma).unwrap() {
            assert!((nu - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn det_route_agrees_with_spectrum_route() {
        // The pairwise ν̃ from the determinant formula must equal the
        // smaller symplectic eigenvalue of the partially transposed
        // reduced state computed by the trace method.
        let p = SystemParams::new([1.0, 1.3, 0.8], [0.15, -0.07, 0.1], 1.0).unwrap();
        let prop = MilburnPropagator::new(p).unwrap();
        for &t in &[0.7, 3.0, 12.0] {
            let sigma = prop.covariance(t, 20.0).unwrap();
            for pair in ModePair::ALL {
                let (_, nu_det) = log_negativity_pair(&sigma, pair).unwrap();
                let mut s4 = reduce_two_mode(&sigma, pair);
                s4.swap_rows(2, 3);
                s4.swap_columns(2, 3);
                let nu = symplectic_spectrum_two_mode(&s4).unwrap();
                assert!(
                    (nu_det - nu[1]).abs() < 1e-10,
                    "t={t} {pair:?}: {nu_det} vs {:?}",
                    nu
                );
            }
        }
    }

    #[test]
    fn milburn_states_are_physical_and_mixed() {
        let p = SystemParams::new([1.0, 1.0, 1.0], [0.1, 0.1, 0.1], 1.0).unwrap();
        let prop = MilburnPropagator::new(p).unwrap();
        let sigma = prop.covariance(5.0, 10.0).unwrap();
        let nu = symplectic_spectrum(&sigma).unwrap();
        assert!(nu[2] >= 1.0 - 1e-9, "min ν = {}", nu[2]);
        assert!(nu[0] > 1.0 + 1e-12, "decoherence must mix: {nu:?}");
        // Unitary evolution keeps the state pure instead.
        let sigma = prop.covariance_schrodinger(5.0).unwrap();
        for v in symplectic_spectrum(&sigma).unwrap() {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_route_cross_checks_the_eigensolver_route() {
        // Mixed states with separated ν: both routes agree tightly.
        let p = SystemParams::new([1.0, 1.3, 0.8], [0.15, -0.07, 0.1], 2.0).unwrap();
        let prop = MilburnPropagator::new(p).unwrap();
        for &t in &[1.0, 5.0, 20.0] {
            let sigma = prop.covariance(t, 2.0).unwrap();
            let a = symplectic_spectrum(&sigma).unwrap();
            let b = symplectic_spectrum_traces(&sigma.mat).unwrap();
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-8, "t={t}: {a:?} vs {b:?}");
            }
        }
        // Near-pure states coalesce all ν at 1; the eigensolver route
        // must keep the physicality floor there (the cubic cannot).
        let sigma = prop.covariance(1e-3, 100.0).unwrap();
        let a = symplectic_spectrum(&sigma).unwrap();
        assert!(a[2] >= 1.0 - 1e-11, "near-vacuum min ν = {}", a[2]);
    }

    #[test]
    fn label_permutation_permutes_reports() {
        // Exchanging modes 1 and 3 (conjugation by the permutation that
        // swaps the row/column pairs) must permute every report slot.
        let p = SystemParams::new([1.0, 1.3, 0.8], [0.15, -0.07, 0.1], 1.0).unwrap();
        let sigma = MilburnPropagator::new(p)
            .unwrap()
            .covariance(3.0, 20.0)
            .unwrap();
        let mut m = sigma.mat;
        m.swap_rows(0, 4);
        m.swap_rows(1, 5);
        m.swap_columns(0, 4);
        m.swap_columns(1, 5);
        let swapped = cov(m);

        let n = mean_excitations(&sigma).unwrap();
        let ns = mean_excitations(&swapped).unwrap();
        assert!((n[0] - ns[2]).abs() < 1e-14 && (n[2] - ns[0]).abs() < 1e-14);
        assert!((n[1] - ns[1]).abs() < 1e-14);

        let e = entanglement_report(&sigma).unwrap();
        let es = entanglement_report(&swapped).unwrap();
        // Pairs map ab→cb=bc, ac→ca=ac, bc→ba=ab.
        assert!((e.e_pair[0] - es.e_pair[2]).abs() < 1e-10);
        assert!((e.e_pair[1] - es.e_pair[1]).abs() < 1e-10);
        assert!((e.e_pair[2] - es.e_pair[0]).abs() < 1e-10);
        assert!((e.e_one_vs_two[0] - es.e_one_vs_two[2]).abs() < 1e-10);
    }

    #[test]
    fn rejects_broken_inputs() {
        // A diagonal that says ⟨N⟩ < −1e-6.
        let mut m = Mat6::identity();
        m[(0, 0)] = C64::new(0.99, 0.0);
        assert!(mean_excitations(&cov(m)).is_err());
        // A non-Hermitian matrix.
        let mut m = Mat6::identity();
        m[(0, 1)] = C64::new(0.5, 0.0);
        assert!(symplectic_spectrum(&cov(m)).is_err());
        // Tiny negatives are clamped, not fatal.
        let mut m = Mat6::identity();
        m[(2, 2)] = C64::new(1.0 - 2e-10, 0.0);
        assert_eq!(mean_excitations(&cov(m)).unwrap()[1], 0.0);
    }
}
