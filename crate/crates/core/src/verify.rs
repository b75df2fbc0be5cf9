//! Self-contained verification suites with machine-readable results.
//!
//! Each suite checks one family of cross-validations (dual-route
//! diagonalization, symplectic conditions, kernel-vs-series, Fock
//! oracle, regressions against published steady values, symmetry and
//! extinction laws, trade-off inequalities, and a deliberate negative
//! control). The `verify` subcommand prints one JSON line per suite;
//! the acceptance tests reuse the same functions at their stated sample
//! counts, so there is exactly one implementation of every check.
//!
//! Suites use fixed seeds: two runs see the same pseudo-random
//! parameter sets.

use nalgebra::SymmetricEigen;

use crate::analysis::{
    entanglement_report, excitation_measures, excitation_report, mean_excitations,
    min_symplectic_eigenvalue, polygamy_check, purity_residual, symplectic_spectrum,
};
use crate::config::RunConfig;
use crate::fock::{observables, occupations, FockConfig, FockOracle};
use crate::isotropic::{iso_squeezes, iso_steady, iso_t_steady, symmetric_steady, IsotropicParams};
use crate::milburn::{CovarianceMatrix, MilburnPropagator};
use crate::model::{
    normal_frequencies, potential_matrix, validate_bound_state, NormalModeData, SystemParams,
};
use crate::symplectic::{
    compose_factor, rotation_12, rotation_13, squeeze_123, symplectic_residuals,
};
use crate::{Result, C64};

/// Settings a run configuration contributes to the suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Run the purity suite instead of the mixedness suite.
    pub schrodinger: bool,
    /// Fock cutoff for the oracle suites.
    pub fock_cutoff: usize,
    /// Tail tolerance for the truncated-series oracle.
    pub series_epsilon: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            schrodinger: false,
            fock_cutoff: 8,
            series_epsilon: 1e-12,
        }
    }
}

impl From<&RunConfig> for VerifyOptions {
    fn from(cfg: &RunConfig) -> Self {
        VerifyOptions {
            schrodinger: cfg.schrodinger_limit,
            fock_cutoff: cfg.fock_cutoff,
            series_epsilon: cfg.series_epsilon,
        }
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub pass: bool,
    /// Largest residual the suite observed (suite-specific meaning).
    pub max_residual: f64,
    pub detail: String,
}

impl SuiteResult {
    /// One JSON object per line, schema
    /// `{"suite":…,"pass":…,"max_residual":…,"detail":…}`.
    pub fn jsonl(&self) -> String {
        format!(
            "{{\"suite\":\"{}\",\"pass\":{},\"max_residual\":{:e},\"detail\":\"{}\"}}",
            self.name,
            self.pass,
            self.max_residual,
            json_escape(&self.detail)
        )
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// SplitMix64; fixed seeds keep every suite reproducible without
/// pulling a random-number dependency into the library.
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// Draws a bound-state parameter set (rejection sampling).
fn random_bound_params(rng: &mut Rng) -> SystemParams {
    loop {
        let omega = [
            rng.range(0.5, 2.0),
            rng.range(0.5, 2.0),
            rng.range(0.5, 2.0),
        ];
        let coupling = [
            rng.range(-0.3, 0.3),
            rng.range(-0.3, 0.3),
            rng.range(-0.3, 0.3),
        ];
        let gamma = rng.range(1.0, 100.0);
        if let Ok(p) = SystemParams::new(omega, coupling, gamma) {
            if validate_bound_state(&p) {
                return p;
            }
        }
    }
}

/// Trigonometric normal frequencies against an independent symmetric
/// eigensolver, plus the Euler-reconstructed rotation's diagonalization
/// residual, over random bound-state parameter sets.
pub fn normal_mode_suite(sets: usize) -> SuiteResult {
    let mut rng = Rng::new(0x6e6f726d);
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for i in 0..sets {
        let p = random_bound_params(&mut rng);
        let v = potential_matrix(&p);
        let trig = match normal_frequencies(&p) {
            Ok(f) => f,
            Err(e) => {
                return SuiteResult {
                    name: "normal_modes",
                    pass: false,
                    max_residual: f64::INFINITY,
                    detail: format!("set {i}: {e}"),
                };
            }
        };
        let eig = SymmetricEigen::new(v);
        for f in trig {
            let target = f * f;
            let best = eig
                .eigenvalues
                .iter()
                .map(|l| (l - target).abs() / target.abs().max(1e-300))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
        let nm = match NormalModeData::compute(&p) {
            Ok(nm) => nm,
            Err(e) => {
                return SuiteResult {
                    name: "normal_modes",
                    pass: false,
                    max_residual: f64::INFINITY,
                    detail: format!("set {i}: {e}"),
                };
            }
        };
        let r = nm.euler.rotation();
        let d = r.transpose() * v * r;
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    worst = worst.max(d[(a, b)].abs());
                }
            }
        }
        if worst > 1e-10 && detail.is_empty() {
            detail = format!(
                "first excess at set {i}: omega {:?} J {:?}",
                p.omega, p.coupling
            );
        }
    }
    SuiteResult {
        name: "normal_modes",
        pass: worst <= 1e-10,
        max_residual: worst,
        detail: if detail.is_empty() {
            format!("{sets} random bound sets, dual-route eigenvalues and Euler rotation")
        } else {
            detail
        },
    }
}

/// `det S = 1` and the ladder-basis symplectic conditions on random
/// factors and composites.
pub fn symplectic_suite(sets: usize) -> SuiteResult {
    let mut rng = Rng::new(0x73796d70);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let omega = [
            rng.range(0.5, 2.0),
            rng.range(0.5, 2.0),
            rng.range(0.5, 2.0),
        ];
        let s = match rng.next_u64() % 5 {
            0 => rotation_12(rng.range(-3.2, 3.2), &omega),
            1 => rotation_13(rng.range(-3.2, 3.2), &omega),
            2 => squeeze_123(&[
                rng.range(-0.8, 0.8),
                rng.range(-0.8, 0.8),
                rng.range(-0.8, 0.8),
            ]),
            3 => {
                rotation_12(rng.range(-3.2, 3.2), &omega)
                    * squeeze_123(&[rng.range(-0.8, 0.8), 0.0, rng.range(-0.8, 0.8)])
                    * rotation_13(rng.range(-3.2, 3.2), &omega)
            }
            _ => {
                let p = random_bound_params(&mut rng);
                let nm = NormalModeData::compute(&p).expect("bound params diagonalize");
                let (a, a_inv) = compose_factor(&nm, &p);
                worst = worst.max(symplectic_residuals(&a_inv).max());
                a
            }
        };
        worst = worst.max(symplectic_residuals(&s).max());
    }
    SuiteResult {
        name: "symplectic_conditions",
        pass: worst <= 1e-10,
        max_residual: worst,
        detail: format!("{sets} random factors and composites, all four conditions"),
    }
}

/// Canonical coupling configurations exercised by the fixed suites:
/// the two published open-chain variants, the label-consistent chain
/// through the third oscillator, the triangle, and the isotropic system.
pub const NAMED_CONFIGS: [(&str, [f64; 3]); 6] = [
    ("fig1-caption", [0.1, 0.0, 0.1]),
    ("fig1-prose", [0.1, 0.1, 0.0]),
    ("chain-through-c", [0.0, 0.1, 0.1]),
    ("triangle-weak", [0.1, 0.05, 0.1]),
    ("triangle", [0.1, 0.1, 0.1]),
    ("isotropic-mid", [0.3, 0.3, 0.3]),
];

/// The random `(params, t)` sample list used by the series suite; the
/// trade-off scans and the acceptance gate iterate the same list, so
/// "states sampled by the series comparison" is a single definition.
pub fn series_sample(points: usize) -> Vec<(SystemParams, f64)> {
    let mut rng = Rng::new(0x7365724d);
    (0..points)
        .map(|_| {
            let p = random_bound_params(&mut rng);
            // Bias toward small Γt but cover the cap.
            let u = rng.uniform();
            let t = (u * u * 100.0 / p.gamma).max(1e-3);
            (p, t)
        })
        .collect()
}

/// Closed decoherence kernel against the truncated Poisson series on a
/// random `(t, Γ, J)` grid with `Γt ≤ 100`.
pub fn series_suite(points: usize, epsilon: f64) -> SuiteResult {
    let mut worst: f64 = 0.0;
    let mut terms_max = 0usize;
    for (p, t) in series_sample(points) {
        let prop = match MilburnPropagator::new(p) {
            Ok(pr) => pr,
            Err(e) => {
                return SuiteResult {
                    name: "milburn_series",
                    pass: false,
                    max_residual: f64::INFINITY,
                    detail: e.to_string(),
                };
            }
        };
        let closed = prop.covariance(t, p.gamma).expect("valid t");
        match prop.covariance_series(t, p.gamma, epsilon) {
            Ok((series, terms)) => {
                terms_max = terms_max.max(terms);
                let gap = (closed.mat - series.mat)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                worst = worst.max(gap);
            }
            Err(e) => {
                return SuiteResult {
                    name: "milburn_series",
                    pass: false,
                    max_residual: f64::INFINITY,
                    detail: e.to_string(),
                };
            }
        }
    }
    SuiteResult {
        name: "milburn_series",
        pass: worst <= 1e-8,
        max_residual: worst,
        detail: format!("{points} random (t, Γ, J) points, longest series {terms_max} terms"),
    }
}

fn rel_or_abs_ok(a: f64, b: f64) -> bool {
    let gap = (a - b).abs();
    if b.abs() < 1e-4 {
        gap <= 1e-8
    } else {
        gap / b.abs() <= 1e-4
    }
}

/// Occupations and covariance from the Fock oracle against the
/// covariance pipeline on two open-chain configurations. The exact
/// log-negativity gap (a non-Gaussian `O(1/Γ)` effect, not an error) is
/// reported in the detail string rather than gated.
pub fn fock_suite(cutoff: usize, schrodinger: bool) -> SuiteResult {
    let run = || -> Result<(f64, f64)> {
        let mut worst: f64 = 0.0;
        let mut e_gap: f64 = 0.0;
        for coupling in [[0.1, 0.0, 0.1], [0.1, 0.05, 0.1]] {
            let p = if schrodinger {
                SystemParams::schrodinger([1.0; 3], coupling)?
            } else {
                SystemParams::new([1.0; 3], coupling, 50.0)?
            };
            let prop = MilburnPropagator::new(p)?;
            let oracle = FockOracle::new(p, FockConfig::new(cutoff, 1e-12, 1e-2)?)?;
            for t in [2.0, 10.0, 30.0] {
                let sigma = prop.evolve(t)?;
                let rho = oracle.milburn_density(t, p.gamma)?;
                let obs = observables(&rho, cutoff);
                let n = mean_excitations(&sigma)?;
                for j in 0..3 {
                    if !rel_or_abs_ok(obs.n[j], n[j]) {
                        worst = worst.max((obs.n[j] - n[j]).abs());
                    }
                }
                let cov = (obs.covariance - sigma.mat)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                worst = worst.max(if cov > 1e-6 { cov } else { 0.0 });
                let ent = entanglement_report(&sigma)?;
                for slot in 0..3 {
                    e_gap = e_gap.max((obs.e_pair[slot] - ent.e_pair[slot]).abs());
                }
            }
        }
        Ok((worst, e_gap))
    };
    match run() {
        Ok((worst, e_gap)) => SuiteResult {
            name: "fock_excitations",
            pass: worst <= 0.0,
            max_residual: worst,
            detail: format!(
                "cutoff {cutoff}; occupations and covariance gated; exact-vs-Gaussian \
                 negativity gap {e_gap:.3e} (finite-Γ non-Gaussianity, informational)"
            ),
        },
        Err(e) => SuiteResult {
            name: "fock_excitations",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

fn canonical_time_grid() -> Vec<f64> {
    vec![0.0, 0.5, 2.0, 5.0, 10.0, 20.0, 40.0]
}

/// Minimum symplectic eigenvalue stays ≥ 1 − 1e-9 on the canonical
/// configurations and the steady states.
pub fn physicality_suite() -> SuiteResult {
    let run = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, coupling) in NAMED_CONFIGS {
            let p = SystemParams::new([1.0; 3], coupling, 50.0)?;
            let prop = MilburnPropagator::new(p)?;
            for t in canonical_time_grid() {
                let nu = min_symplectic_eigenvalue(&prop.covariance(t, 50.0)?)?;
                worst = worst.max(1.0 - nu);
            }
            let nu = min_symplectic_eigenvalue(&prop.covariance_steady())?;
            worst = worst.max(1.0 - nu);
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => SuiteResult {
            name: "physicality",
            pass: worst <= 1e-9,
            max_residual: worst,
            detail: "1 − ν_min over canonical configurations and steady states".into(),
        },
        Err(e) => SuiteResult {
            name: "physicality",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// In the Schrödinger limit every symplectic eigenvalue is 1: unitary
/// evolution preserves the pure vacuum. Checked through the purity
/// identity `(Zσ)² = I`, whose residual bounds every `|ν − 1|` without
/// the triple-root conditioning of the characteristic cubic.
pub fn purity_suite() -> SuiteResult {
    let run = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, coupling) in NAMED_CONFIGS {
            let p = SystemParams::schrodinger([1.0; 3], coupling)?;
            let prop = MilburnPropagator::new(p)?;
            for t in canonical_time_grid() {
                worst = worst.max(purity_residual(&prop.covariance_schrodinger(t)?));
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => SuiteResult {
            name: "purity",
            pass: worst <= 1e-9,
            max_residual: worst,
            detail: "‖(Zσ)² − I‖ under unitary evolution, bounds every |ν − 1|".into(),
        },
        Err(e) => SuiteResult {
            name: "purity",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// At finite Γ the state genuinely mixes: the largest symplectic
/// eigenvalue must lift off 1 at late times.
pub fn mixedness_suite() -> SuiteResult {
    let run = || -> Result<f64> {
        let p = SystemParams::new([1.0; 3], [0.1, 0.0, 0.1], 50.0)?;
        let prop = MilburnPropagator::new(p)?;
        let nu = symplectic_spectrum(&prop.covariance(20.0, 50.0)?)?;
        Ok(nu[0] - 1.0)
    };
    match run() {
        Ok(lift) => SuiteResult {
            name: "mixedness",
            pass: lift >= 1e-4,
            max_residual: lift,
            detail: "ν_max − 1 at t = 20, Γ = 50 (must exceed 1e-4)".into(),
        },
        Err(e) => SuiteResult {
            name: "mixedness",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

fn skipped(name: &'static str, why: &str) -> SuiteResult {
    SuiteResult {
        name,
        pass: true,
        max_residual: 0.0,
        detail: format!("skipped: {why}"),
    }
}

/// Steady-state regression for the resonant system. The generic
/// pipeline's steady excitations are mode-symmetric,
/// `J²/(4(ω²+2J)(ω²−J))` each; the published per-mode closed forms
/// disagree with that (their total is right, the split is not), so the
/// suite asserts the pinned pipeline value, confirms it against the
/// Fock oracle, and records the published-value discrepancies.
pub fn steady_regression_suite(full: bool) -> SuiteResult {
    // (J, Fock cutoff, confirmation tolerance set by truncation level).
    let cases: &[(f64, usize, f64)] = if full {
        &[
            (0.1, 8, 1e-11),
            (0.3, 8, 1e-7),
            (0.5, 8, 5e-4),
            (0.7, 10, 5e-4),
        ]
    } else {
        &[(0.1, 8, 1e-11), (0.3, 8, 1e-7)]
    };
    let run = || -> Result<(f64, String)> {
        let mut worst: f64 = 0.0;
        let mut notes = Vec::new();
        for &(j, cutoff, fock_tol) in cases {
            let iso = IsotropicParams::new(1.0, j, 100.0)?;
            let p = iso.to_system_params()?;
            let pipe = mean_excitations(&MilburnPropagator::new(p)?.covariance_steady())?;
            let pinned = symmetric_steady(&iso);
            for v in pipe {
                worst = worst.max((v - pinned).abs());
            }
            let oracle = FockOracle::new(p, FockConfig::new(cutoff, 1e-12, 1e-1)?)?;
            let fock = occupations(&oracle.milburn_density(1e6, p.gamma)?, cutoff);
            let fock_gap = (0..3)
                .map(|k| (fock[k] - pipe[k]).abs())
                .fold(0.0, f64::max);
            if fock_gap > fock_tol {
                worst = worst.max(fock_gap);
                notes.push(format!(
                    "J={j}: Fock gap {fock_gap:.2e} exceeds {fock_tol:.0e}"
                ));
            }
            let published = iso_steady(&iso);
            notes.push(format!(
                "J={j}: pinned {pinned:.9e} (Fock gap {fock_gap:.1e}); published per-mode \
                 ({:.4e}, {:.4e}, {:.4e}) differs by ({:+.1e}, {:+.1e}, {:+.1e})",
                published.0,
                published.1,
                published.2,
                published.0 - pinned,
                published.1 - pinned,
                published.2 - pinned,
            ));
        }
        Ok((worst, notes.join("; ")))
    };
    match run() {
        Ok((worst, detail)) => SuiteResult {
            name: "steady_regression",
            pass: worst <= 1e-12,
            max_residual: worst,
            detail,
        },
        Err(e) => SuiteResult {
            name: "steady_regression",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// Long-time limit of the published excitation series at coupling `j`.
fn published_series_limit(j: f64) -> (f64, f64, f64) {
    let iso = IsotropicParams::new(1.0, j, 100.0).expect("bound isotropic");
    let (s1, s2) = iso_squeezes(&iso);
    let b1 = s1.cosh().powi(2) * s1.sinh().powi(2);
    let b2 = s2.cosh().powi(2) * s2.sinh().powi(2);
    (
        (24.0 * b1 + 76.0 * b2) / 50.0,
        (b1 + 99.0 * b2) / 50.0,
        1.5 * b1 + 0.5 * b2,
    )
}

/// Ordering of the published steady forms on both sides of the
/// crossing `J = ω²/2`, plus the pipeline's exact mode equality (the
/// empirically pinned value has no hierarchy at all).
pub fn steady_ordering_suite() -> SuiteResult {
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for k in 1..=50 {
        let j = 0.5 * k as f64 / 51.0;
        let (a, b, c) = published_series_limit(j);
        if !(c > a && a > b) && detail.is_empty() {
            detail = format!("hierarchy c > a > b broken at J = {j}");
        }
        let j = 0.5 + 0.5 * k as f64 / 51.0;
        let (a, b, c) = published_series_limit(j);
        if !(b > a && a > c) && detail.is_empty() {
            detail = format!("inverted hierarchy b > a > c broken at J = {j}");
        }
    }
    for j in [0.1, 0.35, 0.6, 0.85] {
        let iso = IsotropicParams::new(1.0, j, 100.0).expect("bound");
        let p = iso.to_system_params().expect("valid");
        let n = mean_excitations(&MilburnPropagator::new(p).expect("ok").covariance_steady())
            .expect("physical");
        worst = worst.max((n[0] - n[1]).abs()).max((n[1] - n[2]).abs());
    }
    SuiteResult {
        name: "steady_ordering",
        pass: detail.is_empty() && worst <= 1e-12,
        max_residual: worst,
        detail: if detail.is_empty() {
            "published series forms ordered on both sides of J = ω²/2; pipeline steady \
             values mode-symmetric (equality residual reported)"
                .into()
        } else {
            detail
        },
    }
}

/// Exchange symmetry of the open chains. With the hub at b
/// (J₁₃ = 0, J₁₂ = J₂₃) the symmetric pairs are (a,b) ↔ (b,c); the
/// published claim "E_ac = E_bc, N_a|c = N_b|c" holds verbatim for the
/// hub at c (J₁₂ = 0, J₁₃ = J₂₃), which is the labeling under which the
/// published discussion is self-consistent. Both are asserted.
pub fn open_chain_suite() -> SuiteResult {
    let run = || -> Result<(f64, f64)> {
        let mut worst: f64 = 0.0;
        let mut literal_gap: f64 = 0.0;
        let b_hub = SystemParams::new([1.0; 3], [0.1, 0.0, 0.1], 50.0)?;
        let c_hub = SystemParams::new([1.0; 3], [0.0, 0.1, 0.1], 50.0)?;
        let prop_b = MilburnPropagator::new(b_hub)?;
        let prop_c = MilburnPropagator::new(c_hub)?;
        for t in canonical_time_grid() {
            let sb = prop_b.covariance(t, 50.0)?;
            let exc = excitation_report(&sb)?;
            let ent = entanglement_report(&sb)?;
            worst = worst.max((ent.e_pair[0] - ent.e_pair[2]).abs());
            worst = worst.max((exc.pairwise[0] - exc.pairwise[2]).abs());
            literal_gap = literal_gap.max((ent.e_pair[1] - ent.e_pair[2]).abs());
            let sc = prop_c.covariance(t, 50.0)?;
            let exc = excitation_report(&sc)?;
            let ent = entanglement_report(&sc)?;
            worst = worst.max((ent.e_pair[1] - ent.e_pair[2]).abs());
            worst = worst.max((exc.pairwise[1] - exc.pairwise[2]).abs());
        }
        Ok((worst, literal_gap))
    };
    match run() {
        Ok((worst, literal_gap)) => SuiteResult {
            name: "open_chain_symmetry",
            pass: worst <= 1e-9,
            max_residual: worst,
            detail: format!(
                "E_ab = E_bc and N_a|b = N_b|c for the hub at b; E_ac = E_bc and \
                 N_a|c = N_b|c for the hub at c; with the hub at b the literal pairing \
                 E_ac vs E_bc differs by {literal_gap:.2e} (published bond labels are \
                 permuted)"
            ),
        },
        Err(e) => SuiteResult {
            name: "open_chain_symmetry",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// A fully decoupled third oscillator stays empty and separable.
pub fn extinction_suite() -> SuiteResult {
    let run = || -> Result<f64> {
        let p = SystemParams::new([1.0; 3], [0.1, 0.0, 0.0], 50.0)?;
        let prop = MilburnPropagator::new(p)?;
        let mut worst: f64 = 0.0;
        for t in canonical_time_grid() {
            let sigma = prop.covariance(t, 50.0)?;
            let n = mean_excitations(&sigma)?;
            worst = worst.max(n[2]);
            let ent = entanglement_report(&sigma)?;
            if ent.e_pair[1] != 0.0 || ent.e_pair[2] != 0.0 {
                worst = worst.max(ent.e_pair[1]).max(ent.e_pair[2]);
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => SuiteResult {
            name: "extinction_separability",
            pass: worst <= 1e-12,
            max_residual: worst,
            detail: "J13 = J23 = 0: ⟨N₃⟩ ≤ 1e-12 and E_ac = E_bc = 0 exactly".into(),
        },
        Err(e) => SuiteResult {
            name: "extinction_separability",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// Labeled covariance states covering the fixed-configuration suites,
/// used by the trade-off scans.
pub fn canonical_states() -> Vec<(String, CovarianceMatrix)> {
    let mut states = Vec::new();
    for (name, coupling) in NAMED_CONFIGS {
        for gamma in [10.0, 50.0, 100.0] {
            let p = SystemParams::new([1.0; 3], coupling, gamma).expect("bound config");
            let prop = MilburnPropagator::new(p).expect("diagonalizable");
            for t in canonical_time_grid() {
                states.push((
                    format!("{name} Γ={gamma} t={t}"),
                    prop.covariance(t, gamma).expect("valid"),
                ));
            }
            states.push((format!("{name} Γ={gamma} steady"), prop.covariance_steady()));
        }
    }
    // Detuned central oscillator at the published resonance condition.
    let p = SystemParams::new([1.0, 0.5, 1.0], [0.01, 0.9, 0.01], 50.0).expect("bound");
    let prop = MilburnPropagator::new(p).expect("diagonalizable");
    for t in canonical_time_grid() {
        states.push((
            format!("resonant-chain t={t}"),
            prop.covariance(t, 50.0).expect("valid"),
        ));
    }
    // Pure-state branch.
    let p = SystemParams::schrodinger([1.0; 3], [0.1, 0.0, 0.1]).expect("bound");
    let prop = MilburnPropagator::new(p).expect("diagonalizable");
    for t in canonical_time_grid() {
        states.push((
            format!("schrodinger t={t}"),
            prop.covariance_schrodinger(t).expect("valid"),
        ));
    }
    states
}

/// Minimum polygamy slack `δ` over the canonical states, the random
/// series sample, and `triples` random non-negative excitation triples.
pub fn polygamy_scan(triples: usize) -> Result<f64> {
    let mut min_delta = f64::INFINITY;
    for (_, sigma) in canonical_states() {
        let report = excitation_report(&sigma)?;
        let (_, delta) = polygamy_check(&report);
        for d in delta {
            min_delta = min_delta.min(d);
        }
    }
    for (p, t) in series_sample(500) {
        let sigma = MilburnPropagator::new(p)?.covariance(t, p.gamma)?;
        let (_, delta) = polygamy_check(&excitation_report(&sigma)?);
        for d in delta {
            min_delta = min_delta.min(d);
        }
    }
    let mut rng = Rng::new(0x746f7269);
    for _ in 0..triples {
        let n = [
            rng.range(0.0, 10.0),
            rng.range(0.0, 10.0),
            rng.range(0.0, 10.0),
        ];
        let (_, delta) = polygamy_check(&excitation_measures(&n));
        for d in delta {
            min_delta = min_delta.min(d);
        }
    }
    Ok(min_delta)
}

/// The polygamy inequality `δ ≥ 0` (within 1e-9) everywhere.
pub fn polygamy_suite(triples: usize) -> SuiteResult {
    match polygamy_scan(triples) {
        Ok(min_delta) => SuiteResult {
            name: "polygamy",
            pass: min_delta >= -1e-9,
            max_residual: min_delta,
            detail: format!(
                "minimum δ over canonical states, the random series sample, and {triples} \
                 random excitation triples"
            ),
        },
        Err(e) => SuiteResult {
            name: "polygamy",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// Most negative monogamy residual `E_k|lm − E_kl − E_km` over the
/// canonical states and the random series sample, with the worst
/// offenders listed.
pub fn monogamy_scan() -> Result<(f64, Vec<String>)> {
    let mut min_residual = f64::INFINITY;
    let mut findings: Vec<(f64, String)> = Vec::new();
    let mut visit = |label: &str, sigma: &CovarianceMatrix| -> Result<()> {
        let ent = entanglement_report(sigma)?;
        for (k, r) in ent.monogamy_residual.iter().enumerate() {
            min_residual = min_residual.min(*r);
            if *r < -1e-9 {
                findings.push((*r, format!("{label} mode {k}: residual {r:.3e}")));
            }
        }
        Ok(())
    };
    for (label, sigma) in canonical_states() {
        visit(&label, &sigma)?;
    }
    for (p, t) in series_sample(500) {
        let sigma = MilburnPropagator::new(p)?.covariance(t, p.gamma)?;
        visit(
            &format!("random omega {:?} J {:?} t {t:.3}", p.omega, p.coupling),
            &sigma,
        )?;
    }
    findings.sort_by(|a, b| a.0.total_cmp(&b.0));
    findings.truncate(5);
    Ok((min_residual, findings.into_iter().map(|(_, s)| s).collect()))
}

/// Reports where pairwise log-negativities exceed the one-vs-two value
/// (they genuinely do here: logarithmic negativity is not monogamous,
/// and these mixed states violate the inequality by up to a few
/// hundredths). Informational: the violations are physics, not bugs.
pub fn monogamy_findings_suite() -> SuiteResult {
    match monogamy_scan() {
        Ok((min_residual, findings)) => SuiteResult {
            name: "monogamy_findings",
            pass: true,
            max_residual: min_residual,
            detail: if findings.is_empty() {
                "no monogamy violations on the sampled states".into()
            } else {
                format!(
                    "monogamy violated on sampled states (expected for logarithmic \
                     negativity); worst: {}",
                    findings.join(" | ")
                )
            },
        },
        Err(e) => SuiteResult {
            name: "monogamy_findings",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// Isotropic relaxation-time property: at `t = 10 t_steady` the
/// excitations sit within 5% (of the whole run's maximum) of the
/// steady value.
pub fn steady_timescale_suite() -> SuiteResult {
    let run = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (j, gamma) in [(0.1, 50.0), (0.1, 100.0), (0.3, 100.0)] {
            let iso = IsotropicParams::new(1.0, j, gamma)?;
            let p = iso.to_system_params()?;
            let prop = MilburnPropagator::new(p)?;
            let t_star = 10.0 * iso_t_steady(&iso);
            let at_star = mean_excitations(&prop.covariance(t_star, gamma)?)?;
            let steady = mean_excitations(&prop.covariance_steady())?;
            let mut peak = [0.0f64; 3];
            for i in 0..400 {
                let t = t_star * i as f64 / 399.0;
                let n = mean_excitations(&prop.covariance(t, gamma)?)?;
                for j in 0..3 {
                    peak[j] = peak[j].max(n[j]);
                }
            }
            for j in 0..3 {
                worst = worst.max((at_star[j] - steady[j]).abs() / (0.05 * peak[j]));
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => SuiteResult {
            name: "steady_timescale",
            pass: worst <= 1.0,
            max_residual: worst,
            detail: "|N(10 t_steady) − N_∞| / (0.05 max_t N), must be ≤ 1".into(),
        },
        Err(e) => SuiteResult {
            name: "steady_timescale",
            pass: false,
            max_residual: f64::INFINITY,
            detail: e.to_string(),
        },
    }
}

/// Negative control: planting the published spurious matrix entry
/// (a stray 1 at row 6, column 5 of the mode-1/3 rotation) must break
/// the symplectic conditions loudly, while the clean factor passes.
pub fn negative_control_suite() -> SuiteResult {
    let omega = [1.0, 1.0, 1.0];
    let clean = symplectic_residuals(&rotation_13(0.3, &omega)).max();
    let mut corrupted = rotation_13(0.3, &omega);
    corrupted[(5, 4)] = C64::new(1.0, 0.0);
    let residual = symplectic_residuals(&corrupted).max();
    SuiteResult {
        name: "negative_control",
        pass: residual > 1e-3 && clean <= 1e-12,
        max_residual: residual,
        detail: format!(
            "clean rotation residual {clean:.2e}; with the spurious entry planted the \
             residual must exceed 1e-3"
        ),
    }
}

/// Runs every suite at its default scale.
pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteResult> {
    let mut results = vec![
        normal_mode_suite(1000),
        symplectic_suite(1000),
        series_suite(500, opts.series_epsilon),
        fock_suite(opts.fock_cutoff, opts.schrodinger),
        physicality_suite(),
    ];
    if opts.schrodinger {
        results.push(purity_suite());
        results.push(skipped("mixedness", "schrodinger_limit set"));
    } else {
        results.push(skipped(
            "purity",
            "finite gamma (set schrodinger_limit = true)",
        ));
        results.push(mixedness_suite());
    }
    results.push(steady_regression_suite(false));
    results.push(steady_ordering_suite());
    results.push(open_chain_suite());
    results.push(extinction_suite());
    results.push(polygamy_suite(10_000));
    results.push(monogamy_findings_suite());
    results.push(steady_timescale_suite());
    results.push(negative_control_suite());
    results
}
