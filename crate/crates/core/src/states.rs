//! Constructors for the state family under study: N-qubit W and GHZ pure
//! states, their two-qubit reductions in closed form, and the classical
//! mixture of the two reductions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{self, ComplexMatrix, TOL_EIGEN, TOL_HERMITIAN};

/// Normalized amplitude vector over N qubits.
#[derive(Debug, Clone)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector, enforcing unit norm within `TOL_EIGEN`.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::ShapeMismatch {
                rows: dim,
                cols: 1,
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TOL_EIGEN {
            return Err(Error::Domain(format!(
                "state vector norm^2 is {norm_sq}, expected 1"
            )));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Dense density matrix |psi><psi|.
    pub fn density(&self) -> ComplexMatrix {
        let dim = self.amplitudes.len();
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        })
    }
}

/// Validated 4x4 density operator: Hermitian, unit trace, positive
/// semidefinite (all within tolerance).
#[derive(Debug, Clone)]
pub struct TwoQubitDensity {
    matrix: ComplexMatrix,
}

impl TwoQubitDensity {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        matrix.check_hermitian(TOL_HERMITIAN)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TOL_EIGEN || trace.im.abs() > TOL_EIGEN {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let eig = qmat::hermitian_eigenvalues(&matrix)?;
        if eig[0] < -TOL_EIGEN {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: eig[0],
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Reduction of an N-qubit pure state to the given qubit pair via the
    /// dense partial trace.
    pub fn from_pure(state: &PureState, keep: (usize, usize)) -> Result<Self> {
        let reduced = qmat::partial_trace(&state.density(), state.n_qubits(), keep)?;
        Self::new(reduced)
    }
}

/// Parameters of the classical W/GHZ reduction mixture.
///
/// `p` is the weight of the W-reduction term. The closed interval [0,1] is
/// accepted; both endpoints are legitimate densities.
#[derive(Debug, Clone, Copy)]
pub struct MixtureSpec {
    pub n: usize,
    pub p: f64,
}

impl MixtureSpec {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::QubitCountOutOfRange { n, min: 3, max: usize::MAX });
        }
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::ProbabilityOutOfRange { p });
        }
        Ok(Self { n, p })
    }
}

/// N-qubit W state: amplitude 1/sqrt(N) on each single-excitation basis
/// vector.
pub fn build_w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::QubitCountOutOfRange { n, min: 2, max: usize::MAX });
    }
    let dim = 1usize << n;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..n {
        v[1usize << (n - 1 - k)] = amp;
    }
    PureState::new(n, v)
}

/// N-qubit GHZ state: (|0...0> + |1...1>)/sqrt(2).
pub fn build_ghz_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::QubitCountOutOfRange { n, min: 2, max: usize::MAX });
    }
    let dim = 1usize << n;
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[0] = amp;
    v[dim - 1] = amp;
    PureState::new(n, v)
}

fn real_diag_x(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
    // [[a,0,0,0],[0,b,c,0],[0,c,b,0],[0,0,0,d]]
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let v = match (i, j) {
            (0, 0) => a,
            (1, 1) | (2, 2) => b,
            (1, 2) | (2, 1) => c,
            (3, 3) => d,
            _ => 0.0,
        };
        Complex64::new(v, 0.0)
    })
}

/// Two-qubit reduction of the N-qubit W state in closed form:
/// (1/N)[(N-2)|00><00| + |01><01| + |10><10| + |01><10| + |10><01|].
pub fn reduced_w_pair(n: usize) -> Result<TwoQubitDensity> {
    if n < 3 {
        return Err(Error::QubitCountOutOfRange { n, min: 3, max: usize::MAX });
    }
    let nf = n as f64;
    TwoQubitDensity::new(real_diag_x((nf - 2.0) / nf, 1.0 / nf, 1.0 / nf, 0.0))
}

/// Two-qubit reduction of the N-qubit GHZ state: diag(1/2, 0, 0, 1/2).
pub fn reduced_ghz_pair(n: usize) -> Result<TwoQubitDensity> {
    if n < 3 {
        return Err(Error::QubitCountOutOfRange { n, min: 3, max: usize::MAX });
    }
    TwoQubitDensity::new(real_diag_x(0.5, 0.0, 0.0, 0.5))
}

/// Classical mixture p * W-reduction + (1-p) * GHZ-reduction.
///
/// Built entrywise as the affine combination of the two boundary reductions,
/// so rho(p) = p*rho(1) + (1-p)*rho(0) holds exactly in floating point.
pub fn mixture_ghz_w(spec: MixtureSpec) -> Result<TwoQubitDensity> {
    let MixtureSpec { n, p } = spec;
    let w = reduced_w_pair(n)?;
    let g = reduced_ghz_pair(n)?;
    let m = ComplexMatrix::from_fn(4, 4, |i, j| {
        w.matrix().get(i, j) * p + g.matrix().get(i, j) * (1.0 - p)
    });
    TwoQubitDensity::new(m)
}

/// Singlet (|01> - |10>)/sqrt(2) as a density matrix.
pub fn singlet() -> TwoQubitDensity {
    TwoQubitDensity::new(real_diag_x(0.0, 0.5, -0.5, 0.0)).expect("singlet is a valid density")
}

/// Maximally mixed two-qubit state I/4.
pub fn maximally_mixed() -> TwoQubitDensity {
    TwoQubitDensity::new(ComplexMatrix::identity(4).scale(0.25))
        .expect("I/4 is a valid density")
}

/// On-disk density format: `dim` (must be 4) plus row-major `re`/`im` grids.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct DensityFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityFile {
    pub fn from_density(rho: &TwoQubitDensity) -> Self {
        let grid = |f: fn(Complex64) -> f64| {
            (0..4)
                .map(|i| (0..4).map(|j| f(rho.matrix().get(i, j))).collect())
                .collect()
        };
        Self {
            dim: 4,
            re: grid(|z| z.re),
            im: grid(|z| z.im),
        }
    }
}

/// Parses and validates a serialized density matrix.
///
/// Each failure mode is reported distinctly: malformed document, wrong
/// dimension, non-Hermitian, wrong trace, or negative spectrum.
pub fn load_density(content: &str) -> Result<TwoQubitDensity> {
    let file: DensityFile =
        serde_json::from_str(content).map_err(|e| Error::Parse(e.to_string()))?;
    if file.dim != 4 {
        return Err(Error::BadFileDimension { dim: file.dim });
    }
    let flatten = |grid: &[Vec<f64>], name: &str| -> Result<Vec<f64>> {
        if grid.len() != 4 || grid.iter().any(|row| row.len() != 4) {
            return Err(Error::Parse(format!("`{name}` must be a 4x4 grid")));
        }
        Ok(grid.iter().flatten().copied().collect())
    };
    let re = flatten(&file.re, "re")?;
    let im = flatten(&file.im, "im")?;
    let matrix = ComplexMatrix::from_re_im(4, 4, &re, &im)?;
    TwoQubitDensity::new(matrix)
}
