//! Parameter-space analysis of the W/GHZ reduction mixture: eigenvalue-case
//! classification, critical mixing probabilities with bisection
//! certification, p-grid sweeps, and the three-row summary table for
//! N = 3, 4, 5 together with a cell-by-cell verifier.

use serde::Serialize;

use crate::criteria::{self, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::qmat::TOL_SIGN;
use crate::states::{mixture_ghz_w, MixtureSpec};

/// Ordering of the U eigenvalues u1 = u2 = 4p^2/N^2 versus
/// u3 = (N-4p)^2/N^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MCase {
    /// u1 = u2 > u3; happens for p in [N/6, N/2].
    PairDegenerateDominant,
    /// u3 > u1 = u2; the complement range.
    ThirdDominant,
    /// All three eigenvalues coincide (within the sign tolerance).
    FullyDegenerate,
}

/// Which fidelity branch applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FCase {
    /// p <= N/4: fidelity sits at the classical value 2/3.
    Classical,
    /// p > N/4: fidelity exceeds 2/3.
    SuperClassical,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegimeLabel {
    pub m_case: MCase,
    pub f_case: FCase,
}

/// Per-N critical probabilities.
///
/// `p_teleport` is N/4 when that lies in [0,1]; at N = 4 it equals 1.0
/// exactly and is flagged as a boundary (fidelity exceeds 2/3 only strictly
/// above it, so no usable range remains). `p_bell` would be N/(2*sqrt(2)),
/// which exceeds 1 for every N >= 3 and is therefore absent.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub n: usize,
    pub p_entangled: f64,
    /// Closed form agreed with the bisection bracket to 1e-10 and the
    /// bracket endpoints straddle a sign change at width 1e-12.
    pub certified: bool,
    pub p_teleport: Option<f64>,
    pub p_teleport_boundary: bool,
    pub p_bell: Option<f64>,
}

/// The inseparability bracket 2p(1-p)N(N-2) + (1-p)^2 N^2 - 4p^2, evaluated
/// in its unexpanded form. W4 = p^2/(4N^4) times this, so W4 < 0 exactly
/// where the bracket is negative.
pub fn entanglement_bracket(n: usize, p: f64) -> f64 {
    let nf = n as f64;
    2.0 * p * (1.0 - p) * nf * (nf - 2.0) + (1.0 - p) * (1.0 - p) * nf * nf - 4.0 * p * p
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::QubitCountOutOfRange { n, min: 3, max: usize::MAX });
    }
    Ok(())
}

/// Labels the eigenvalue ordering and fidelity branch at (n, p).
pub fn classify_regime(n: usize, p: f64) -> Result<RegimeLabel> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::ProbabilityOutOfRange { p });
    }
    let nf = n as f64;
    let u_pair = 4.0 * p * p / (nf * nf);
    let u_third = (nf - 4.0 * p) * (nf - 4.0 * p) / (nf * nf);
    let m_case = if (u_pair - u_third).abs() <= TOL_SIGN {
        MCase::FullyDegenerate
    } else if u_pair > u_third {
        MCase::PairDegenerateDominant
    } else {
        MCase::ThirdDominant
    };
    let f_case = if p > nf / 4.0 + TOL_SIGN {
        FCase::SuperClassical
    } else {
        FCase::Classical
    };
    Ok(RegimeLabel { m_case, f_case })
}

/// Everything the bisection certification produced.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdCertificate {
    pub root: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub value_low: f64,
    pub value_high: f64,
}

/// Bisection on the unexpanded bracket down to an interval of width 1e-12.
pub fn certify_entanglement_threshold(n: usize) -> Result<ThresholdCertificate> {
    check_n(n)?;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let f_lo = entanglement_bracket(n, lo);
    let f_hi = entanglement_bracket(n, hi);
    debug_assert!(f_lo > 0.0 && f_hi < 0.0, "bracket(0)=N^2, bracket(1)=-4");
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entanglement_bracket(n, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdCertificate {
        root: 0.5 * (lo + hi),
        bracket_low: lo,
        bracket_high: hi,
        value_low: entanglement_bracket(n, lo),
        value_high: entanglement_bracket(n, hi),
    })
}

/// The unique root in (0,1) of the inseparability bracket.
///
/// Expanding the bracket gives -(N-2)^2 p^2 - 4Np + N^2, whose positive root
/// is N(sqrt((N-2)^2 + 4) - 2)/(N-2)^2. The closed form is always
/// cross-checked against bisection on the unexpanded bracket; disagreement
/// beyond 1e-10 is a hard error because it can only mean an algebra slip.
pub fn entanglement_threshold(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let d = (nf - 2.0) * (nf - 2.0);
    let root = nf * ((d + 4.0).sqrt() - 2.0) / d;
    let cert = certify_entanglement_threshold(n)?;
    assert!(
        (root - cert.root).abs() <= 1e-10,
        "closed-form root {root} disagrees with bisection {} for n={n}",
        cert.root
    );
    Ok(root)
}

/// All critical probabilities for one N.
pub fn thresholds(n: usize) -> Result<ThresholdReport> {
    check_n(n)?;
    let nf = n as f64;
    let cert = certify_entanglement_threshold(n)?;
    let root = entanglement_threshold(n)?;
    let certified = (root - cert.root).abs() <= 1e-10
        && cert.value_low > 0.0
        && cert.value_high < 0.0
        && cert.bracket_high - cert.bracket_low <= 1e-12;

    let teleport = nf / 4.0;
    let (p_teleport, p_teleport_boundary) = if teleport < 1.0 {
        (Some(teleport), false)
    } else if teleport == 1.0 {
        (Some(1.0), true)
    } else {
        (None, false)
    };

    let bell = nf / (2.0 * 2.0f64.sqrt());
    let p_bell = if bell <= 1.0 { Some(bell) } else { None };

    Ok(ThresholdReport {
        n,
        p_entangled: root,
        certified,
        p_teleport,
        p_teleport_boundary,
        p_bell,
    })
}

/// Uniform inclusive grid over [p_start, p_end], each point evaluated by the
/// full diagnostics pipeline on the mixture. Results are in grid order.
pub fn sweep(
    n: usize,
    p_start: f64,
    p_end: f64,
    steps: usize,
) -> Result<Vec<(f64, DiagnosticsReport)>> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&p_start)
        || !(0.0..=1.0).contains(&p_end)
        || p_start >= p_end
        || steps < 2
    {
        return Err(Error::Domain(format!(
            "need 0 <= p_start < p_end <= 1 and steps >= 2, got [{p_start}, {p_end}] with {steps} steps"
        )));
    }
    let span = p_end - p_start;
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let p = if i == steps - 1 {
            p_end
        } else {
            p_start + span * (i as f64) / ((steps - 1) as f64)
        };
        let rho = mixture_ghz_w(MixtureSpec::new(n, p)?)?;
        out.push((p, criteria::full_report(&rho)));
    }
    Ok(out)
}

/// One row of the N = 3, 4, 5 summary table.
#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub n: usize,
    /// Lower (open) endpoint of the inseparability range; the range is
    /// (p_entangled_low, 1].
    pub p_entangled_low: f64,
    /// Display form of the M value on that range.
    pub m_formula: String,
    /// M on the range equals m_coefficient * p^2.
    pub m_coefficient: f64,
    /// The "M <= 1" verdict.
    pub m_within_bound: bool,
    /// Range of p on which the fidelity exceeds 2/3, open at the left
    /// endpoint and closed at 1; None when no such range exists.
    pub fmax_useful: Option<(f64, f64)>,
}

/// Note attached to the table about interval-endpoint conventions.
pub const TABLE1_ENDPOINT_NOTE: &str = "ranges are open at the lower threshold and closed at \
     p = 1; the fidelity range for n = 3 includes p = 1, where equivalent statements are \
     sometimes printed open at 1";

/// The three-row summary table.
pub fn table1() -> Vec<Table1Row> {
    [3usize, 4, 5]
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let m_formula = match n {
                3 => "8p^2/9".to_string(),
                4 => "p^2/2".to_string(),
                5 => "8p^2/25".to_string(),
                _ => format!("8p^2/{}", n * n),
            };
            Table1Row {
                n,
                p_entangled_low: entanglement_threshold(n).expect("n >= 3"),
                m_formula,
                m_coefficient: 8.0 / (nf * nf),
                m_within_bound: true,
                fmax_useful: if nf / 4.0 < 1.0 { Some((nf / 4.0, 1.0)) } else { None },
            }
        })
        .collect()
}

/// Outcome of one verified table cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellCheck {
    pub n: usize,
    pub cell: String,
    pub pass: bool,
    pub detail: String,
}

const GRID_STEPS: usize = 101;
const VERIFY_TOL: f64 = 1e-12;
const M_SAMPLE_POINTS: [f64; 3] = [0.8, 0.9, 0.95];

fn grid_p(i: usize) -> f64 {
    (i as f64) / ((GRID_STEPS - 1) as f64)
}

/// Recomputes every cell of the given table through the matrix pipeline.
///
/// Taking the rows as input keeps the verifier honest: feeding it a row with
/// a corrupted coefficient or threshold must produce a FAIL.
pub fn verify_table1(rows: &[Table1Row]) -> Vec<CellCheck> {
    let mut checks = Vec::new();
    for row in rows {
        let n = row.n;
        let nf = n as f64;

        // Cell 1: the inseparability range (p_entangled_low, 1].
        let threshold_ok = entanglement_threshold(n)
            .map(|t| (t - row.p_entangled_low).abs() <= VERIFY_TOL)
            .unwrap_or(false);
        let below = mixture_ghz_w(MixtureSpec::new(n, row.p_entangled_low - 1e-3).unwrap())
            .map(|rho| criteria::w3_w4(&rho).1)
            .unwrap_or(f64::NAN);
        let above = mixture_ghz_w(MixtureSpec::new(n, row.p_entangled_low + 1e-3).unwrap())
            .map(|rho| criteria::w3_w4(&rho).1)
            .unwrap_or(f64::NAN);
        let sign_ok = below > 0.0 && above < 0.0;
        checks.push(CellCheck {
            n,
            cell: "entangled-range".into(),
            pass: threshold_ok && sign_ok,
            detail: format!(
                "W4({:.4}) = {below:+.3e}, W4({:.4}) = {above:+.3e}",
                row.p_entangled_low - 1e-3,
                row.p_entangled_low + 1e-3
            ),
        });

        // Cell 2: the M formula. The coefficient times p^2 is the sum of the
        // degenerate eigenvalue pair at every p, and equals the full M
        // wherever the pair dominates (p in [N/6, N/2], which covers the
        // whole entangled range of the row).
        let mut formula_ok = true;
        let mut detail = String::new();
        for &p in &M_SAMPLE_POINTS {
            let rho = mixture_ghz_w(MixtureSpec::new(n, p).unwrap()).unwrap();
            let u = criteria::correlation_matrix(&rho).u_eigenvalues_desc();
            let formula = row.m_coefficient * p * p;
            // Pick the degenerate pair as the two closest eigenvalues.
            let pair_sum = if (u[0] - u[1]).abs() <= (u[1] - u[2]).abs() {
                u[0] + u[1]
            } else {
                u[1] + u[2]
            };
            let mut ok = (pair_sum - formula).abs() <= VERIFY_TOL;
            let in_regime = p >= nf / 6.0 && p <= nf / 2.0;
            if in_regime {
                ok &= (criteria::m_value(&rho) - formula).abs() <= VERIFY_TOL;
            }
            formula_ok &= ok;
            detail.push_str(&format!(
                "p={p}: formula {formula:.6}, pair sum {pair_sum:.6}{}; ",
                if in_regime { ", = M" } else { " (pair not dominant)" }
            ));
        }
        checks.push(CellCheck {
            n,
            cell: "m-formula".into(),
            pass: formula_ok,
            detail,
        });

        // Cell 3: M <= 1 across the whole p grid.
        let mut m_max = f64::NEG_INFINITY;
        for i in 0..GRID_STEPS {
            let rho = mixture_ghz_w(MixtureSpec::new(n, grid_p(i)).unwrap()).unwrap();
            m_max = m_max.max(criteria::m_value(&rho));
        }
        let m_ok = m_max <= 1.0 + VERIFY_TOL && row.m_within_bound;
        checks.push(CellCheck {
            n,
            cell: "m-within-bound".into(),
            pass: m_ok,
            detail: format!("max M over grid = {m_max:.12}"),
        });

        // Cell 4: the fidelity column, including the n = 3 split at 0.75.
        let mut f_ok = true;
        let mut useful_seen = false;
        for i in 0..GRID_STEPS {
            let p = grid_p(i);
            let rho = mixture_ghz_w(MixtureSpec::new(n, p).unwrap()).unwrap();
            let rep = criteria::full_report(&rho);
            let expect = if p > nf / 4.0 {
                0.5 + (8.0 * p - nf) / (6.0 * nf)
            } else {
                2.0 / 3.0
            };
            f_ok &= (rep.f_max - expect).abs() <= VERIFY_TOL;
            let should_be_useful = match row.fmax_useful {
                Some((lo, hi)) => p > lo && p <= hi,
                None => false,
            };
            f_ok &= rep.teleport_useful == should_be_useful;
            useful_seen |= rep.teleport_useful;
        }
        f_ok &= useful_seen == row.fmax_useful.is_some();
        checks.push(CellCheck {
            n,
            cell: "fmax-range".into(),
            pass: f_ok,
            detail: match row.fmax_useful {
                Some((lo, hi)) => format!("F > 2/3 exactly on ({lo}, {hi}]"),
                None => "F never exceeds 2/3".into(),
            },
        });
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a}");
    }

    #[test]
    fn regime_examples() {
        let r = classify_regime(3, 0.9).unwrap();
        assert_eq!(r.m_case, MCase::PairDegenerateDominant);
        assert_eq!(r.f_case, FCase::SuperClassical);

        let r = classify_regime(5, 0.5).unwrap();
        assert_eq!(r.m_case, MCase::ThirdDominant);
        assert_eq!(r.f_case, FCase::Classical);

        let r = classify_regime(6, 1.0).unwrap();
        assert_eq!(r.m_case, MCase::FullyDegenerate);

        assert!(classify_regime(2, 0.5).is_err());
        assert!(classify_regime(3, 1.5).is_err());
    }

    #[test]
    fn regime_boundaries_continuous_in_m() {
        // At p = n/6 and p = n/2 the two case formulas agree.
        for n in 3..=10usize {
            let nf = n as f64;
            for boundary in [nf / 6.0, nf / 2.0] {
                if !(0.0..=1.0).contains(&boundary) {
                    continue;
                }
                let pair = 8.0 * boundary * boundary / (nf * nf);
                let third = (4.0 * boundary * boundary
                    + (nf - 4.0 * boundary) * (nf - 4.0 * boundary))
                    / (nf * nf);
                assert_close(pair, third, 1e-12);
            }
        }
    }

    #[test]
    fn threshold_closed_forms() {
        assert_close(entanglement_threshold(3).unwrap(), -6.0 + 45.0f64.sqrt(), 1e-12);
        assert_close(entanglement_threshold(4).unwrap(), -2.0 + 8.0f64.sqrt(), 1e-12);
        assert_close(
            entanglement_threshold(5).unwrap(),
            (-10.0 + 325.0f64.sqrt()) / 9.0,
            1e-12,
        );
        assert!(entanglement_threshold(2).is_err());
    }

    #[test]
    fn w4_sign_matches_bracket_prediction_near_threshold() {
        for n in 3..=10usize {
            let th = entanglement_threshold(n).unwrap();
            for (p, positive) in [(th - 1e-3, true), (th + 1e-3, false)] {
                let rho = mixture_ghz_w(MixtureSpec::new(n, p).unwrap()).unwrap();
                let (_, w4) = criteria::w3_w4(&rho);
                assert_eq!(w4 > 0.0, positive, "n={n}, p={p}");
                assert_eq!(entanglement_bracket(n, p) > 0.0, positive);
            }
        }
    }

    #[test]
    fn m_peaks_only_at_zero_mixing() {
        for n in 3..=10usize {
            let at_zero =
                criteria::m_value(&mixture_ghz_w(MixtureSpec::new(n, 0.0).unwrap()).unwrap());
            assert_close(at_zero, 1.0, 1e-12);
            for i in 1..=100usize {
                let p = (i as f64) / 100.0;
                let m =
                    criteria::m_value(&mixture_ghz_w(MixtureSpec::new(n, p).unwrap()).unwrap());
                assert!(m < 1.0 - 1e-6, "M must drop strictly below 1 for p={p}, n={n}");
            }
        }
    }

    #[test]
    fn threshold_monotone_in_n() {
        let mut prev = 0.0;
        for n in 3..=10 {
            let t = entanglement_threshold(n).unwrap();
            assert!(t > prev, "threshold must increase with n");
            prev = t;
        }
    }

    #[test]
    fn threshold_reports() {
        let t3 = thresholds(3).unwrap();
        assert_close(t3.p_entangled, 0.7082039324993694, 1e-12);
        assert!(t3.certified);
        assert_eq!(t3.p_teleport, Some(0.75));
        assert!(!t3.p_teleport_boundary);
        assert!(t3.p_bell.is_none(), "3/(2 sqrt 2) > 1");

        let t4 = thresholds(4).unwrap();
        assert_close(t4.p_entangled, 0.8284271247461903, 1e-12);
        assert_eq!(t4.p_teleport, Some(1.0));
        assert!(t4.p_teleport_boundary);

        let t5 = thresholds(5).unwrap();
        assert_close(t5.p_entangled, (5.0 * 13.0f64.sqrt() - 10.0) / 9.0, 1e-12);
        assert_close(t5.p_entangled, 0.891973, 1e-6);
        assert!(t5.p_teleport.is_none());
        assert!(t5.p_bell.is_none());
    }

    #[test]
    fn sweep_flip_points() {
        let rows = sweep(3, 0.0, 1.0, 101).unwrap();
        assert_eq!(rows.len(), 101);
        let entangled: Vec<bool> = rows.iter().map(|(_, r)| r.entangled).collect();
        let flips: Vec<usize> = (1..entangled.len())
            .filter(|&i| entangled[i] != entangled[i - 1])
            .collect();
        assert_eq!(flips, vec![71], "entangled flips between p=0.70 and p=0.71");

        let useful: Vec<bool> = rows.iter().map(|(_, r)| r.teleport_useful).collect();
        let flips: Vec<usize> = (1..useful.len())
            .filter(|&i| useful[i] != useful[i - 1])
            .collect();
        assert_eq!(flips, vec![76], "useful flips between p=0.75 and p=0.76");

        for (p, rep) in &rows {
            assert!(!rep.bell_violating, "no Bell violation anywhere, p={p}");
        }
        assert!(rows[0].1.bell_boundary(), "M = 1 at p = 0");
    }

    #[test]
    fn sweep_n5_never_useful() {
        for (_, rep) in sweep(5, 0.0, 1.0, 101).unwrap() {
            assert!(!rep.teleport_useful);
        }
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(sweep(3, 0.5, 0.5, 2).is_err());
        assert!(sweep(3, 0.0, 1.0, 1).is_err());
        assert!(sweep(3, -0.1, 0.5, 10).is_err());
        assert!(sweep(3, 0.2, 1.2, 10).is_err());
    }

    #[test]
    fn table_rows_match_known_columns() {
        let rows = table1();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].m_formula, "8p^2/9");
        assert_eq!(rows[1].m_formula, "p^2/2");
        assert_eq!(rows[2].m_formula, "8p^2/25");
        assert_eq!(rows[0].fmax_useful, Some((0.75, 1.0)));
        assert_eq!(rows[1].fmax_useful, None);
        assert_eq!(rows[2].fmax_useful, None);
        assert_close(rows[1].m_coefficient, 0.5, 1e-15);
    }

    #[test]
    fn verify_table_passes_on_correct_rows() {
        let checks = verify_table1(&table1());
        assert_eq!(checks.len(), 12);
        for c in &checks {
            assert!(c.pass, "cell {} for n={} failed: {}", c.cell, c.n, c.detail);
        }
    }

    #[test]
    fn verify_table_catches_injected_errors() {
        let mut rows = table1();
        rows[0].m_coefficient = -rows[0].m_coefficient;
        assert!(verify_table1(&rows).iter().any(|c| !c.pass));

        let mut rows = table1();
        rows[1].p_entangled_low = 0.5;
        assert!(verify_table1(&rows).iter().any(|c| !c.pass));

        let mut rows = table1();
        rows[0].fmax_useful = None;
        assert!(verify_table1(&rows).iter().any(|c| !c.pass));
    }
}
