//! Python bindings: a `Simulator` class over the covariance propagator
//! plus the closed-form symmetric-trio helpers. Build the cdylib and
//! import it as `usc_trio` (python/smoke_test.py shows the loading
//! dance without maturin).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use usc_trio::isotropic::{self, IsotropicParams};
use usc_trio::{analysis, milburn, CovarianceMatrix, MilburnPropagator, SystemParams};

fn value_err(e: usc_trio::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One parameter set of the three-oscillator model with everything
/// derived from it: evolve to a time, read occupations, negativities,
/// spectra, or the raw covariance.
#[pyclass(frozen)]
struct Simulator {
    prop: MilburnPropagator,
}

impl Simulator {
    fn state(&self, t: f64) -> PyResult<CovarianceMatrix> {
        self.prop.evolve(t).map_err(value_err)
    }
}

#[pymethods]
impl Simulator {
    /// Simulator(omega, coupling, gamma=None)
    ///
    /// `omega`: the three bare frequencies; `coupling`: position
    /// couplings in bond order (J12, J13, J23); `gamma`: intrinsic
    /// decoherence rate, or None for plain unitary evolution.
    #[new]
    #[pyo3(signature = (omega, coupling, gamma=None))]
    fn new(omega: [f64; 3], coupling: [f64; 3], gamma: Option<f64>) -> PyResult<Self> {
        let params = match gamma {
            Some(g) => SystemParams::new(omega, coupling, g),
            None => SystemParams::schrodinger(omega, coupling),
        }
        .map_err(value_err)?;
        Ok(Simulator {
            prop: MilburnPropagator::new(params).map_err(value_err)?,
        })
    }

    #[getter]
    fn omega(&self) -> [f64; 3] {
        self.prop.params().omega
    }

    #[getter]
    fn coupling(&self) -> [f64; 3] {
        self.prop.params().coupling
    }

    /// None in the unitary (no-decoherence) limit.
    #[getter]
    fn gamma(&self) -> Option<f64> {
        let p = self.prop.params();
        (!p.schrodinger_limit).then_some(p.gamma)
    }

    /// Normal-mode frequencies in the fixed label order used throughout
    /// (not sorted).
    fn normal_frequencies(&self) -> [f64; 3] {
        self.prop.normal_modes().omega_normal
    }

    /// Mean virtual occupations (N1, N2, N3) at time `t`.
    fn occupations(&self, t: f64) -> PyResult<[f64; 3]> {
        analysis::mean_excitations(&self.state(t)?).map_err(value_err)
    }

    /// Occupations plus the geometric-mean sharing measures:
    /// keys `n`, `pairwise`, `one_vs_two`, `delta`.
    fn excitations<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = analysis::excitation_report(&self.state(t)?).map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("n", r.n)?;
        d.set_item("pairwise", r.pairwise)?;
        d.set_item("one_vs_two", r.one_vs_two)?;
        d.set_item("delta", r.delta)?;
        Ok(d)
    }

    /// Logarithmic negativities: keys `e_pair`, `nu_tilde`,
    /// `e_one_vs_two`, `monogamy_residual` (pair order ab, ac, bc; split
    /// order a|bc, b|ac, c|ab).
    fn entanglement<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = analysis::entanglement_report(&self.state(t)?).map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("e_pair", r.e_pair)?;
        d.set_item("nu_tilde", r.nu_tilde)?;
        d.set_item("e_one_vs_two", r.e_one_vs_two)?;
        d.set_item("monogamy_residual", r.monogamy_residual)?;
        Ok(d)
    }

    /// Ladder-basis covariance at time `t` as a 6×6 nested list of
    /// complex numbers; the vacuum is the identity.
    fn covariance(&self, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
        let sigma = self.state(t)?;
        Ok((0..6)
            .map(|i| (0..6).map(|j| sigma.mat[(i, j)]).collect())
            .collect())
    }

    /// Symplectic eigenvalues, descending; all three are 1 for a pure
    /// state.
    fn symplectic_spectrum(&self, t: f64) -> PyResult<[f64; 3]> {
        analysis::symplectic_spectrum(&self.state(t)?).map_err(value_err)
    }

    /// Purity witness `max-row-sum |(Zσ)² − I|`; an upper bound on every
    /// `|ν − 1|`.
    fn purity_residual(&self, t: f64) -> PyResult<f64> {
        Ok(analysis::purity_residual(&self.state(t)?))
    }

    /// Occupations of the fully dephased late-time state.
    fn steady_occupations(&self) -> PyResult<[f64; 3]> {
        analysis::mean_excitations(&self.prop.covariance_steady()).map_err(value_err)
    }

    /// Slowest relaxation time toward the steady state; `inf` when some
    /// branch never damps (always in the unitary limit).
    fn steady_time(&self) -> f64 {
        let p = self.prop.params();
        if p.schrodinger_limit {
            f64::INFINITY
        } else {
            milburn::steady_time(&self.prop.normal_modes().omega_normal, p.gamma)
        }
    }

    fn __repr__(&self) -> String {
        let p = self.prop.params();
        match self.gamma() {
            Some(g) => format!(
                "Simulator(omega={:?}, coupling={:?}, gamma={g})",
                p.omega, p.coupling
            ),
            None => format!(
                "Simulator(omega={:?}, coupling={:?}, gamma=None)",
                p.omega, p.coupling
            ),
        }
    }
}

/// Closed-form steady occupation `J²/(4(ω²+2J)(ω²−J))` of the fully
/// symmetric trio (same frequency and coupling on every bond).
#[pyfunction]
fn isotropic_steady_occupation(omega: f64, j: f64, gamma: f64) -> PyResult<f64> {
    let p = IsotropicParams::new(omega, j, gamma).map_err(value_err)?;
    Ok(isotropic::symmetric_steady(&p))
}

/// Closed-form occupation trace of the symmetric trio at time `t`.
#[pyfunction]
fn isotropic_occupation(omega: f64, j: f64, gamma: f64, t: f64) -> PyResult<f64> {
    let p = IsotropicParams::new(omega, j, gamma).map_err(value_err)?;
    Ok(isotropic::symmetric_excitation(&p, t))
}

#[pymodule(name = "usc_trio")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Simulator>()?;
    m.add_function(wrap_pyfunction!(isotropic_steady_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(isotropic_occupation, m)?)?;
    Ok(())
}
