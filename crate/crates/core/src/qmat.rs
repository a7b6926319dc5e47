//! Dense complex linear algebra for small quantum operators.
//!
//! Everything here is sized for 2^N-dimensional pure states and 4x4 density
//! operators: Kronecker products, conjugate transpose, Hermitian eigenvalues
//! via cyclic Jacobi rotations, cofactor determinants, partial trace, and the
//! partial transpose of the second qubit.
//!
//! Qubit index convention: qubit 0 is the leftmost tensor factor, i.e. the
//! most significant bit of the basis index. The basis index of
//! |b0 b1 ... b(N-1)> is sum(b_k * 2^(N-1-k)), so the two-qubit basis order
//! is |00>, |01>, |10>, |11>.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for eigenvalue/trace arithmetic.
pub const TOL_EIGEN: f64 = 1e-12;
/// Tolerance on max |m(i,j) - conj(m(j,i))| when checking Hermiticity.
pub const TOL_HERMITIAN: f64 = 1e-10;
/// Tolerance band around verdict thresholds (sign decisions).
pub const TOL_SIGN: f64 = 1e-10;

/// Largest qubit count accepted by the dense partial-trace path.
///
/// Beyond this, index arithmetic is still sound but a dense 2^N x 2^N grid
/// does not fit in memory; closed-form constructors are the intended path.
pub const MAX_DENSE_QUBITS: usize = 24;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major entry grid, rejecting shape
    /// mismatches and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Convenience constructor from separate real and imaginary row-major grids.
    pub fn from_re_im(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != rows * cols || im.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: re.len().max(im.len()),
            });
        }
        let data = re
            .iter()
            .zip(im.iter())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Max-norm deviation from Hermiticity; errors name the worst entry pair.
    pub fn check_hermitian(&self, tolerance: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut worst = 0.0f64;
        let mut at = (0, 0);
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > worst {
                    worst = d;
                    at = (i, j);
                }
            }
        }
        if worst > tolerance {
            return Err(Error::NotHermitian {
                row: at.0,
                col: at.1,
                deviation: worst,
                tolerance,
            });
        }
        Ok(())
    }
}

/// Kronecker product: entry ((i*br+k),(j*bc+l)) = a(i,j) * b(k,l).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a.get(i / br, j / bc) * b.get(i % br, j % bc)
    })
}

pub fn pauli_x() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    ComplexMatrix::new(2, 2, vec![o, l, l, o]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    ComplexMatrix::new(
        2,
        2,
        vec![o, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), o],
    )
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    ComplexMatrix::new(
        2,
        2,
        vec![Complex64::new(1.0, 0.0), o, o, Complex64::new(-1.0, 0.0)],
    )
    .unwrap()
}

/// Single-qubit rotation Rz(alpha) * Ry(beta) * Rz(gamma).
///
/// Covers SU(2) up to a global phase, which is irrelevant everywhere this
/// library uses it.
pub fn single_qubit_rotation(alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    let phase = |t: f64| Complex64::new(0.0, t).exp();
    ComplexMatrix::new(
        2,
        2,
        vec![
            phase(-(alpha + gamma) / 2.0) * c,
            -phase(-(alpha - gamma) / 2.0) * s,
            phase((alpha - gamma) / 2.0) * s,
            phase((alpha + gamma) / 2.0) * c,
        ],
    )
    .expect("rotation entries are finite")
}

/// All real eigenvalues of a Hermitian matrix, ascending.
///
/// Uses cyclic Jacobi rotations; a complex Hermitian input is lifted to its
/// real-symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is the
/// original one doubled. Sweeps stop once the off-diagonal Frobenius norm
/// drops below `TOL_EIGEN`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    m.check_hermitian(TOL_HERMITIAN)?;
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }

    let imag_norm = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).im.abs())
        .fold(0.0f64, f64::max);

    if imag_norm == 0.0 {
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = m.get(i, j).re;
            }
        }
        Ok(jacobi_symmetric(a, n))
    } else {
        // Real-symmetric embedding; every eigenvalue appears twice.
        let d = 2 * n;
        let mut a = vec![0.0f64; d * d];
        for i in 0..n {
            for j in 0..n {
                let z = m.get(i, j);
                a[i * d + j] = z.re;
                a[(i + n) * d + (j + n)] = z.re;
                a[i * d + (j + n)] = -z.im;
                a[(i + n) * d + j] = z.im;
            }
        }
        let doubled = jacobi_symmetric(a, d);
        Ok((0..n)
            .map(|k| 0.5 * (doubled[2 * k] + doubled[2 * k + 1]))
            .collect())
    }
}

/// Cyclic Jacobi on a real symmetric matrix; returns ascending eigenvalues.
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let mut off_sq = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += a[p * n + q] * a[p * n + q];
            }
        }
        if (2.0 * off_sq).sqrt() < TOL_EIGEN {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = a[j * n + p];
                    let ajq = a[j * n + q];
                    let np = c * ajp - s * ajq;
                    let nq = s * ajp + c * ajq;
                    a[j * n + p] = np;
                    a[p * n + j] = np;
                    a[j * n + q] = nq;
                    a[q * n + j] = nq;
                }
                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    eig
}

/// Determinant by cofactor expansion along the first row.
///
/// Intended for dimensions up to 4; exact small-case arithmetic makes the
/// value trivially auditable.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(det_rec(m))
}

fn det_rec(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => m.get(0, 0),
        2 => m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0),
        _ => {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut sign = 1.0;
            for j in 0..n {
                let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, c| {
                    m.get(r + 1, if c < j { c } else { c + 1 })
                });
                acc += m.get(0, j) * det_rec(&minor) * sign;
                sign = -sign;
            }
            acc
        }
    }
}

/// Traces out all qubits except the ordered pair `keep` from a 2^N x 2^N
/// density matrix. The output basis is |b_a b_b> with b_a the first kept
/// qubit.
///
/// This dense path is the oracle; closed-form constructors are the fast path
/// for large N.
pub fn partial_trace(
    state_density: &ComplexMatrix,
    n_qubits: usize,
    keep: (usize, usize),
) -> Result<ComplexMatrix> {
    if !(2..=MAX_DENSE_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCountOutOfRange {
            n: n_qubits,
            min: 2,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n_qubits;
    if state_density.rows() != dim || state_density.cols() != dim {
        return Err(Error::WrongDimension {
            expected: dim,
            rows: state_density.rows(),
            cols: state_density.cols(),
        });
    }
    let (qa, qb) = keep;
    if qa >= n_qubits || qb >= n_qubits {
        return Err(Error::BadKeepPair {
            a: qa,
            b: qb,
            n: n_qubits,
            reason: "index out of range",
        });
    }
    if qa == qb {
        return Err(Error::BadKeepPair {
            a: qa,
            b: qb,
            n: n_qubits,
            reason: "indices must be distinct",
        });
    }

    let weight = |q: usize| 1usize << (n_qubits - 1 - q);
    let others: Vec<usize> = (0..n_qubits).filter(|&q| q != qa && q != qb).collect();
    let env_count = 1usize << others.len();

    let mut out = ComplexMatrix::zeros(4, 4);
    for ra in 0..2usize {
        for rb in 0..2usize {
            for ca in 0..2usize {
                for cb in 0..2usize {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for e in 0..env_count {
                        let mut base = 0usize;
                        for (bit, &q) in others.iter().enumerate() {
                            if (e >> bit) & 1 == 1 {
                                base |= weight(q);
                            }
                        }
                        let r = base | (ra * weight(qa)) | (rb * weight(qb));
                        let c = base | (ca * weight(qa)) | (cb * weight(qb));
                        sum += state_density.get(r, c);
                    }
                    out.set(2 * ra + rb, 2 * ca + cb, sum);
                }
            }
        }
    }
    Ok(out)
}

/// Partial transpose over the second qubit of a 4x4 operator:
/// out[(m,mu),(n,nu)] = in[(m,nu),(n,mu)].
///
/// Equivalent to transposing each 2x2 block in place; an involution that
/// preserves trace and Hermiticity exactly.
pub fn partial_transpose_2(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for m in 0..2usize {
        for mu in 0..2usize {
            for n in 0..2usize {
                for nu in 0..2usize {
                    out.set(2 * m + mu, 2 * n + nu, rho.get(2 * m + nu, 2 * n + mu));
                }
            }
        }
    }
    Ok(out)
}
