//! Closed-form oracle for the fully resonant, uniformly coupled trio:
//! equal bare frequencies `ω_r` and equal couplings `J` on all three
//! pairs. The normal-mode problem collapses to one symmetric mode at
//! `√(ω_r² + 2J)` and a degenerate pair at `√(ω_r² − J)`, and every
//! quantity has an elementary expression.
//!
//! Two families of formulas live here. The *published* per-mode series
//! and steady values ([`iso_excitations`], [`iso_steady`]) distribute
//! excitation asymmetrically over the modes; the exact covariance
//! pipeline instead puts the same population in all three modes
//! ([`symmetric_excitation`], [`symmetric_steady`]). The two families
//! agree on the total excitation at every time, which is what the
//! regression tests pin; the per-mode discrepancy is kept visible
//! rather than papered over.

use crate::milburn;
use crate::model::SystemParams;
use crate::{Error, Result};

/// Parameters of the resonant, uniformly coupled configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicParams {
    pub omega_r: f64,
    pub j: f64,
    pub gamma: f64,
}

impl IsotropicParams {
    /// Requires `omega_r > 0`, `gamma > 0`, and `−ω_r²/2 < J < ω_r²` so
    /// that both normal frequencies stay real.
    pub fn new(omega_r: f64, j: f64, gamma: f64) -> Result<Self> {
        if !(omega_r > 0.0) || !omega_r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega_r must be positive and finite, got {omega_r}"
            )));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        let w2 = omega_r * omega_r;
        if !j.is_finite() || j <= -0.5 * w2 || j >= w2 {
            return Err(Error::Unbound(format!(
                "isotropic coupling J = {j} outside (−ω_r²/2, ω_r²) = ({}, {w2})",
                -0.5 * w2
            )));
        }
        Ok(Self { omega_r, j, gamma })
    }

    /// The same configuration as generic system parameters.
    pub fn to_system_params(&self) -> Result<SystemParams> {
        SystemParams::new([self.omega_r; 3], [self.j; 3], self.gamma)
    }
}

/// Normal frequencies `(Ω₁, Ω₂)` with `Ω₁ = √(ω_r² + 2J)` for the
/// symmetric mode and the doubly degenerate `Ω₂ = Ω₃ = √(ω_r² − J)`.
pub fn iso_frequencies(p: &IsotropicParams) -> (f64, f64) {
    let w2 = p.omega_r * p.omega_r;
    ((w2 + 2.0 * p.j).sqrt(), (w2 - p.j).sqrt())
}

/// Squeeze parameters `s_i = ½ ln(Ω_i/ω_r)` of the two normal branches.
pub fn iso_squeezes(p: &IsotropicParams) -> (f64, f64) {
    let (o1, o2) = iso_frequencies(p);
    (0.5 * (o1 / p.omega_r).ln(), 0.5 * (o2 / p.omega_r).ln())
}

/// The oscillatory decay factor of one normal branch,
/// `f(t) = e^{−Γt(1−cos(2Ω/Γ))} cos(Γt sin(2Ω/Γ))`; the bracket
/// `1 − f(t)` drives every time dependence in this module.
fn decay_factor(omega_n: f64, gamma: f64, t: f64) -> f64 {
    let x = 2.0 * omega_n / gamma;
    (-gamma * t * (1.0 - x.cos())).exp() * (gamma * t * x.sin()).cos()
}

/// Published per-mode excitations: fixed linear combinations of
/// `cosh²(s_i) sinh²(s_i) · [1 − f_i(t)]` with coefficients
/// `(24/50, 76/50)`, `(1/50, 99/50)`, `(3/2, 1/2)` for the three modes.
pub fn iso_excitations(p: &IsotropicParams, t: f64) -> (f64, f64, f64) {
    let (o1, o2) = iso_frequencies(p);
    let (s1, s2) = iso_squeezes(p);
    let b1 = s1.cosh().powi(2) * s1.sinh().powi(2) * (1.0 - decay_factor(o1, p.gamma, t));
    let b2 = s2.cosh().powi(2) * s2.sinh().powi(2) * (1.0 - decay_factor(o2, p.gamma, t));
    (
        24.0 / 50.0 * b1 + 76.0 / 50.0 * b2,
        1.0 / 50.0 * b1 + 99.0 / 50.0 * b2,
        1.5 * b1 + 0.5 * b2,
    )
}

/// Published steady excitations, rational in `(ω_r², J)`:
///
/// ```text
/// ⟨N₁⟩_∞ = J²(43ω_r² + 14J) / (200 ω_r² D) ,
/// ⟨N₂⟩_∞ = J²(103ω_r² + 149J) / (800 ω_r² D) ,
/// ⟨N₃⟩_∞ = J²(13ω_r² − 10J) / (32 ω_r² D) ,     D = (ω_r²+2J)(ω_r²−J).
/// ```
///
/// Γ-independent. These are regression fixtures: the second mode's
/// published numerator is not the `t → ∞` limit of the published series
/// form (that limit corresponds to `103ω_r² + 194J`), and none of the
/// three matches the exact pipeline's symmetric value; the totals of
/// series and pipeline do agree. See [`symmetric_steady`].
pub fn iso_steady(p: &IsotropicParams) -> (f64, f64, f64) {
    let w2 = p.omega_r * p.omega_r;
    let j = p.j;
    let d = (w2 + 2.0 * j) * (w2 - j);
    let j2 = j * j;
    (
        j2 * (43.0 * w2 + 14.0 * j) / (200.0 * w2 * d),
        j2 * (103.0 * w2 + 149.0 * j) / (800.0 * w2 * d),
        j2 * (13.0 * w2 - 10.0 * j) / (32.0 * w2 * d),
    )
}

/// Per-mode excitation actually produced by the covariance pipeline.
///
/// With equal bare frequencies the mixing matrix `M` is block diagonal,
/// so each mode carries `½ Σ_k R_jk² sinh²(2s_k)[1 − f_k(t)]`; isotropy
/// fixes `R_j1² = 1/3` and the degenerate pair's total at `2/3`, making
/// all three modes identical:
///
/// ```text
/// ⟨N⟩(t) = (1/6) sinh²(2s₁)[1 − f₁(t)] + (1/3) sinh²(2s₂)[1 − f₂(t)] .
/// ```
pub fn symmetric_excitation(p: &IsotropicParams, t: f64) -> f64 {
    let (o1, o2) = iso_frequencies(p);
    let (s1, s2) = iso_squeezes(p);
    (2.0 * s1).sinh().powi(2) * (1.0 - decay_factor(o1, p.gamma, t)) / 6.0
        + (2.0 * s2).sinh().powi(2) * (1.0 - decay_factor(o2, p.gamma, t)) / 3.0
}

/// Steady value of [`symmetric_excitation`]; the sinh² sums collapse to
/// `J² / (4 (ω_r²+2J)(ω_r²−J))`, shared by all three modes.
pub fn symmetric_steady(p: &IsotropicParams) -> f64 {
    let w2 = p.omega_r * p.omega_r;
    p.j * p.j / (4.0 * (w2 + 2.0 * p.j) * (w2 - p.j))
}

/// Time to reach the steady state: the slowest damping rate over the
/// two normal branches, `max_i 1/(Γ(1 − cos(2Ω_i/Γ)))`, `+∞` when some
/// branch never damps (`2Ω_i/Γ` a multiple of `2π`).
pub fn iso_t_steady(p: &IsotropicParams) -> f64 {
    let (o1, o2) = iso_frequencies(p);
    milburn::steady_time(&[o1, o2, o2], p.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::mean_excitations;
    use crate::milburn::MilburnPropagator;
    use crate::model;

    fn p(j: f64) -> IsotropicParams {
        IsotropicParams::new(1.0, j, 100.0).unwrap()
    }

    #[test]
    fn parameter_domain() {
        assert!(IsotropicParams::new(1.0, 0.0, 1.0).is_ok());
        assert!(IsotropicParams::new(1.0, -0.49, 1.0).is_ok());
        assert!(IsotropicParams::new(1.0, -0.5, 1.0).is_err());
        assert!(IsotropicParams::new(1.0, 1.0, 1.0).is_err());
        assert!(IsotropicParams::new(0.0, 0.1, 1.0).is_err());
        assert!(IsotropicParams::new(1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn frequency_values() {
        let (o1, o2) = iso_frequencies(&p(0.0));
        assert_eq!((o1, o2), (1.0, 1.0));
        let (o1, o2) = iso_frequencies(&p(0.1));
        assert!((o1 - 1.0954451).abs() < 1e-7);
        assert!((o2 - 0.9486833).abs() < 1e-7);
        let (o1, o2) = iso_frequencies(&p(0.5));
        assert!((o1 - 2f64.sqrt()).abs() < 1e-15);
        assert!((o2 - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn frequencies_match_generic_model() {
        for j in [-0.3, -0.05, 0.1, 0.5, 0.9] {
            let iso = p(j);
            let (o1, o2) = iso_frequencies(&iso);
            let generic = model::normal_frequencies(&iso.to_system_params().unwrap()).unwrap();
            // The trig labeling is (largest, smallest, middle), so the
            // symmetric branch Ω₁ sits in slot 0 for J > 0 but slot 1
            // for J < 0, where the degenerate pair is the larger.
            let expect = if j > 0.0 { [o1, o2, o2] } else { [o2, o1, o2] };
            for k in 0..3 {
                assert!((generic[k] - expect[k]).abs() < 1e-12, "J={j} slot {k}");
            }
        }
    }

    #[test]
    fn excitations_vanish_at_zero_time_and_zero_coupling() {
        let (a, b, c) = iso_excitations(&p(0.3), 0.0);
        assert_eq!((a, b, c), (0.0, 0.0, 0.0));
        for t in [0.5, 5.0, 500.0] {
            let (a, b, c) = iso_excitations(&p(0.0), t);
            assert!(a.abs() < 1e-15 && b.abs() < 1e-15 && c.abs() < 1e-15);
            assert!(symmetric_excitation(&p(0.0), t).abs() < 1e-15);
        }
    }

    #[test]
    fn steady_fixture_values() {
        // Direct evaluation of the rational forms at ω_r=1. For J=0.1
        // these are 0.444/216, 1.179/864, 0.12/34.56.
        let (a, b, c) = iso_steady(&p(0.1));
        assert!((a - 0.444 / 216.0).abs() < 1e-15);
        assert!((b - 1.179 / 864.0).abs() < 1e-15);
        assert!((c - 0.12 / 34.56).abs() < 1e-15);
        assert!((a - 0.00205556).abs() < 1e-8);
        assert!((b - 0.00136458).abs() < 1e-8);
        assert!((c - 0.00347222).abs() < 1e-8);

        let (a, b, c) = iso_steady(&p(0.5));
        assert!((a - 0.0625).abs() < 1e-15);
        assert!((b - 0.05546875).abs() < 1e-15);
        assert!((c - 0.0625).abs() < 1e-15);

        // The pipeline instead equalizes the three modes.
        assert!((symmetric_steady(&p(0.1)) - 0.01 / 4.32).abs() < 1e-15);
        assert!((symmetric_steady(&p(0.5)) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn steady_values_increase_with_coupling() {
        let mut prev = (0.0, 0.0, 0.0, 0.0);
        for i in 1..100 {
            let j = 0.99 * i as f64 / 100.0;
            let (a, b, c) = iso_steady(&p(j));
            let s = symmetric_steady(&p(j));
            assert!(
                a > prev.0 && b > prev.1 && c > prev.2 && s > prev.3,
                "J={j}"
            );
            prev = (a, b, c, s);
        }
    }

    #[test]
    fn published_hierarchy_below_the_crossing() {
        for i in 1..50 {
            let j = 0.5 * i as f64 / 50.0;
            let (a, b, c) = iso_steady(&p(j));
            assert!(c > a && a > b, "J={j}: ({a}, {b}, {c})");
        }
    }

    #[test]
    fn series_total_matches_pipeline_at_all_times() {
        // The published per-mode split disagrees with the pipeline, but
        // the summed excitation is identical, transiently and at t → ∞.
        for j in [0.1, 0.35] {
            let iso = p(j);
            let prop = MilburnPropagator::new(iso.to_system_params().unwrap()).unwrap();
            for t in [0.8, 7.0, 30.0, 90.0] {
                let (a, b, c) = iso_excitations(&iso, t);
                let n = mean_excitations(&prop.covariance(t, iso.gamma).unwrap()).unwrap();
                let total = n[0] + n[1] + n[2];
                assert!(
                    (a + b + c - total).abs() < 1e-10,
                    "J={j} t={t}: {} vs {total}",
                    a + b + c
                );
                // Pipeline modes are symmetric and match the closed form.
                for v in n {
                    assert!((v - symmetric_excitation(&iso, t)).abs() < 1e-10);
                    assert!((v - total / 3.0).abs() < 1e-10);
                }
            }
            // Steady state via the kernel mask: totals still agree with
            // the series limit (t large enough that every f_i underflows).
            let n = mean_excitations(&prop.covariance_steady()).unwrap();
            let (a, b, c) = iso_excitations(&iso, 1e9);
            assert!((n[0] + n[1] + n[2] - (a + b + c)).abs() < 1e-12);
            for v in n {
                assert!((v - symmetric_steady(&iso)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn published_second_mode_steady_is_not_the_series_limit() {
        // The series coefficients imply a numerator 103ω² + 194J for the
        // second mode; the published rational form carries 149J. Both
        // are kept: iso_excitations follows the series, iso_steady the
        // rational print.
        let iso = p(0.1);
        let (_, n2_series, _) = iso_excitations(&iso, 1e9);
        let (n1_series, _, n3_series) = iso_excitations(&iso, 1e9);
        let (n1, n2, n3) = iso_steady(&iso);
        assert!((n1_series - n1).abs() < 1e-12);
        assert!((n3_series - n3).abs() < 1e-12);
        let d = (1.0 + 2.0 * 0.1) * (1.0 - 0.1);
        let n2_expected = 0.01 * (103.0 + 19.4) / (800.0 * d);
        assert!((n2_series - n2_expected).abs() < 1e-12);
        assert!(n2_series > n2 + 5e-5);
    }

    #[test]
    fn steady_timescale() {
        // Small-angle regime: t ≈ Γ/(2 Ω_min²) = 100/1.8.
        let t = iso_t_steady(&p(0.1));
        assert!((t - 100.0 / 1.8).abs() / t < 1e-3, "t = {t}");
        let exact = 1.0 / (100.0 * (1.0 - (2.0f64 * 0.9486832980505138 / 100.0).cos()));
        assert!((t - exact).abs() < 1e-9 * exact);

        // cos = −1 extremum: both branches damp at 2Γ, so t = 1/(2Γ).
        let iso = IsotropicParams::new(1.0, 0.0, 2.0 / std::f64::consts::PI).unwrap();
        assert!((iso_t_steady(&iso) - std::f64::consts::PI / 4.0).abs() < 1e-12);

        // A branch with 2Ω/Γ = 2π never damps.
        let gamma = (1.0f64 + 2.0 * 0.1).sqrt() / std::f64::consts::PI;
        let iso = IsotropicParams::new(1.0, 0.1, gamma).unwrap();
        assert_eq!(iso_t_steady(&iso), f64::INFINITY);
    }

    #[test]
    fn equal_frequency_closed_form_generalizes() {
        // With equal bare frequencies but arbitrary couplings the mixing
        // matrix is still block diagonal, so
        // ⟨N_j⟩(t) = ½ Σ_k R_jk² sinh²(2s_k)[1 − f_k(t)]
        // holds with the generic rotation R and s_k = ½ ln(Ω_k/ω).
        let params =
            crate::model::SystemParams::new([1.0, 1.0, 1.0], [0.1, 0.05, 0.15], 40.0).unwrap();
        let prop = MilburnPropagator::new(params).unwrap();
        let nm = prop.normal_modes();
        for t in [1.0, 12.0] {
            let n = mean_excitations(&prop.covariance(t, 40.0).unwrap()).unwrap();
            for j in 0..3 {
                let mut expect = 0.0;
                for k in 0..3 {
                    let s = 0.5 * (nm.omega_normal[k] / 1.0).ln();
                    expect += 0.5
                        * nm.mode_matrix[(j, k)].powi(2)
                        * (2.0 * s).sinh().powi(2)
                        * (1.0 - decay_factor(nm.omega_normal[k], 40.0, t));
                }
                assert!((n[j] - expect).abs() < 1e-10, "t={t} j={j}");
            }
        }
    }
}
