//! The three diagnostics on a two-qubit density matrix: inseparability via
//! the partial-transpose determinants and spectrum, the Bell-CHSH quantity
//! M(rho) from the correlation matrix, and the standard-scheme teleportation
//! fidelity — plus two independent optimization oracles (direct CHSH
//! maximization and fully entangled fraction) used to validate the closed
//! forms.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::qmat::{self, ComplexMatrix, TOL_EIGEN, TOL_SIGN};
use crate::states::TwoQubitDensity;

/// 3x3 real matrix of Pauli-pair expectation values C_ij = Tr[rho si (x) sj].
#[derive(Debug, Clone, Copy)]
pub struct CorrelationMatrix {
    c: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    fn new(c: [[f64; 3]; 3]) -> Self {
        debug_assert!(
            c.iter().flatten().all(|&x| x.abs() <= 1.0 + TOL_EIGEN),
            "correlation entries must lie in [-1,1]"
        );
        Self { c }
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.c
    }

    /// C * v.
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, row) in self.c.iter().enumerate() {
            out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    /// Eigenvalues of U = C^t C, descending.
    pub fn u_eigenvalues_desc(&self) -> [f64; 3] {
        let u = ComplexMatrix::from_fn(3, 3, |k, l| {
            let dot: f64 = (0..3).map(|m| self.c[m][k] * self.c[m][l]).sum();
            Complex64::new(dot, 0.0)
        });
        let asc = qmat::hermitian_eigenvalues(&u).expect("C^t C is symmetric");
        [asc[2], asc[1], asc[0]]
    }
}

/// Every scalar criterion for one state, with verdicts.
///
/// `ppt_spectrum` is ascending; `u` holds the eigenvalues of C^t C
/// descending (u1 >= u2 >= u3).
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub w3: f64,
    pub w4: f64,
    pub ppt_spectrum: [f64; 4],
    pub u: [f64; 3],
    pub m_value: f64,
    pub f_max: f64,
    pub entangled: bool,
    pub bell_violating: bool,
    pub teleport_useful: bool,
}

impl DiagnosticsReport {
    /// True when the PPT minimum sits inside the sign-tolerance band.
    pub fn entangled_boundary(&self) -> bool {
        self.ppt_spectrum[0].abs() <= TOL_SIGN
    }

    pub fn bell_boundary(&self) -> bool {
        (self.m_value - 1.0).abs() <= TOL_SIGN
    }

    pub fn teleport_boundary(&self) -> bool {
        (self.f_max - 2.0 / 3.0).abs() <= TOL_SIGN
    }
}

/// The inseparability determinants: W3 is the upper-left 3x3 minor of the
/// partially transposed operator, W4 its full determinant. Negativity of
/// either certifies inseparability.
pub fn w3_w4(rho: &TwoQubitDensity) -> (f64, f64) {
    let pt = qmat::partial_transpose_2(rho.matrix()).expect("density is 4x4");
    let w4 = qmat::determinant(&pt).expect("square");
    let top = ComplexMatrix::from_fn(3, 3, |i, j| pt.get(i, j));
    let w3 = qmat::determinant(&top).expect("square");
    debug_assert!(w3.im.abs() <= TOL_EIGEN && w4.im.abs() <= TOL_EIGEN);
    (w3.re, w4.re)
}

/// Eigenvalues of the partial transpose, ascending. A minimum below
/// -TOL_SIGN certifies entanglement.
pub fn ppt_spectrum(rho: &TwoQubitDensity) -> [f64; 4] {
    let pt = qmat::partial_transpose_2(rho.matrix()).expect("density is 4x4");
    let eig = qmat::hermitian_eigenvalues(&pt).expect("PT preserves Hermiticity");
    [eig[0], eig[1], eig[2], eig[3]]
}

/// C_ij = Tr[rho (si (x) sj)] with s1 = x, s2 = y, s3 = z.
pub fn correlation_matrix(rho: &TwoQubitDensity) -> CorrelationMatrix {
    let paulis = [qmat::pauli_x(), qmat::pauli_y(), qmat::pauli_z()];
    let mut c = [[0.0; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            let op = qmat::kron(si, sj);
            let t = rho.matrix().mul(&op).trace();
            debug_assert!(t.im.abs() <= TOL_EIGEN);
            c[i][j] = t.re;
        }
    }
    CorrelationMatrix::new(c)
}

/// M(rho): the sum of the two largest eigenvalues of C^t C. The state
/// satisfies every CHSH inequality iff M <= 1.
pub fn m_value(rho: &TwoQubitDensity) -> f64 {
    let u = correlation_matrix(rho).u_eigenvalues_desc();
    u[0] + u[1]
}

/// Standard-scheme teleportation fidelity from all three singular values of
/// C. Beats the classical channel iff the result exceeds 2/3.
pub fn f_max(rho: &TwoQubitDensity) -> f64 {
    let u = correlation_matrix(rho).u_eigenvalues_desc();
    let sum: f64 = u.iter().map(|&x| x.max(0.0).sqrt()).sum();
    0.5 * (1.0 + sum / 3.0)
}

/// Aggregates all criteria; verdict booleans use the TOL_SIGN band, mapping
/// boundary values conservatively to false.
pub fn full_report(rho: &TwoQubitDensity) -> DiagnosticsReport {
    let (w3, w4) = w3_w4(rho);
    let ppt = ppt_spectrum(rho);
    let u = correlation_matrix(rho).u_eigenvalues_desc();
    let m = u[0] + u[1];
    let f: f64 = 0.5 * (1.0 + u.iter().map(|&x| x.max(0.0).sqrt()).sum::<f64>() / 3.0);
    DiagnosticsReport {
        w3,
        w4,
        ppt_spectrum: ppt,
        u,
        m_value: m,
        f_max: f,
        entangled: ppt[0] < -TOL_SIGN,
        bell_violating: m > 1.0 + TOL_SIGN,
        teleport_useful: f > 2.0 / 3.0 + TOL_SIGN,
    }
}

// ---------------------------------------------------------------------------
// Optimization oracles
// ---------------------------------------------------------------------------

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const SCAN_POINTS: usize = 16;
const GOLDEN_ITERS: usize = 44;

fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Golden-section maximization on [lo, hi]; the bracket must contain a
/// single interior maximum.
fn golden_max(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_ITERS {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Cyclic coordinate ascent over periodic angles: each pass line-maximizes
/// every coordinate with a coarse scan followed by golden-section refinement.
/// Every slice of both oracle objectives is a single-harmonic sinusoid, so
/// the scan bracket always isolates the slice maximum.
fn coordinate_ascent(angles: &mut [f64], objective: &impl Fn(&[f64]) -> f64, sweeps: usize) -> f64 {
    let mut best = objective(angles);
    let step = TWO_PI / SCAN_POINTS as f64;
    let mut work = angles.to_vec();
    for _ in 0..sweeps {
        let before = best;
        for k in 0..angles.len() {
            work.copy_from_slice(angles);
            let base = angles[k];
            let mut scan_best_x = base;
            let mut scan_best_v = best;
            for s in 1..SCAN_POINTS {
                let x = base + step * s as f64;
                work[k] = x;
                let v = objective(&work);
                if v > scan_best_v {
                    scan_best_v = v;
                    scan_best_x = x;
                }
            }
            let mut line = |x: f64| {
                work[k] = x;
                objective(&work)
            };
            let x = golden_max(&mut line, scan_best_x - step, scan_best_x + step);
            work[k] = x;
            let v = objective(&work);
            if v > best {
                best = v;
                angles[k] = x;
            }
        }
        if best - before < 1e-14 {
            break;
        }
    }
    best
}

fn restart_rng(seed: u64, restart: u64) -> ChaCha8Rng {
    // Per-restart streams independent of the restart count, so adding
    // restarts can only raise the reported maximum.
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Numerically maximized CHSH expectation over four unit measurement
/// vectors a, a', b, b'. Converges to 2*sqrt(M(rho)) from below; an
/// under-converged value still lower-bounds the target.
pub fn chsh_maximize(rho: &TwoQubitDensity, restarts: usize, iters: usize, seed: u64) -> f64 {
    let restarts = restarts.max(1);
    let iters = iters.max(1);
    let corr = correlation_matrix(rho);
    let objective = |angles: &[f64]| -> f64 {
        let a = unit_vector(angles[0], angles[1]);
        let a2 = unit_vector(angles[2], angles[3]);
        let b = unit_vector(angles[4], angles[5]);
        let b2 = unit_vector(angles[6], angles[7]);
        let sum = [b[0] + b2[0], b[1] + b2[1], b[2] + b2[2]];
        let diff = [b[0] - b2[0], b[1] - b2[1], b[2] - b2[2]];
        dot3(a, corr.apply(sum)) + dot3(a2, corr.apply(diff))
    };

    let mut best = f64::NEG_INFINITY;
    for r in 0..restarts {
        let mut rng = restart_rng(seed, r as u64);
        let mut angles: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..TWO_PI)).collect();
        let v = coordinate_ascent(&mut angles, &objective, iters);
        if v > best {
            best = v;
        }
    }
    best
}

/// Maximally entangled two-qubit state (u (x) v)|Phi+>, as amplitudes in the
/// fixed basis order.
fn entangled_candidate(u: &ComplexMatrix, v: &ComplexMatrix) -> [Complex64; 4] {
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut phi = [Complex64::new(0.0, 0.0); 4];
    for m in 0..2 {
        for mu in 0..2 {
            let mut amp = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                amp += u.get(m, k) * v.get(mu, k);
            }
            phi[2 * m + mu] = amp * inv_sqrt2;
        }
    }
    phi
}

/// Fully entangled fraction: the maximum overlap <phi|rho|phi> over
/// maximally entangled |phi> = (u (x) v)|Phi+>, with u and v parameterized
/// by three Euler angles each. The search is seeded with the four Bell
/// states plus `restarts` random starts; (2f+1)/3 is the corresponding
/// optimal teleportation fidelity.
pub fn fully_entangled_fraction(
    rho: &TwoQubitDensity,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> f64 {
    let restarts = restarts.max(1);
    let iters = iters.max(1);
    let objective = |angles: &[f64]| -> f64 {
        let u = qmat::single_qubit_rotation(angles[0], angles[1], angles[2]);
        let v = qmat::single_qubit_rotation(angles[3], angles[4], angles[5]);
        let phi = entangled_candidate(&u, &v);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, pi) in phi.iter().enumerate() {
            for (j, pj) in phi.iter().enumerate() {
                acc += pi.conj() * rho.matrix().get(i, j) * pj;
            }
        }
        acc.re
    };

    use std::f64::consts::PI;
    // u-angle triples mapping |Phi+> to the four Bell states (v = identity).
    let bell_seeds: [[f64; 6]; 4] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [PI, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, PI, 0.0, 0.0, 0.0, 0.0],
        [PI, PI, 0.0, 0.0, 0.0, 0.0],
    ];

    let mut best = f64::NEG_INFINITY;
    for seed_angles in bell_seeds {
        let mut angles = seed_angles.to_vec();
        let v = coordinate_ascent(&mut angles, &objective, iters);
        if v > best {
            best = v;
        }
    }
    for r in 0..restarts {
        let mut rng = restart_rng(seed, r as u64);
        let mut angles: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..TWO_PI)).collect();
        let v = coordinate_ascent(&mut angles, &objective, iters);
        if v > best {
            best = v;
        }
    }
    best
}
