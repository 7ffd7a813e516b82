//! Invariant report for a q-ary CSS pair loaded from disk.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lift::{check_cycle_basis, check_support, BinaryCssPair, CssPairQ};
use crate::qmatrix::SparseQMatrix;
use crate::toric::{check_toric_cycle_families, ExtendedToricCode, Side, ToricLayout};

/// How a pair was produced, which decides the checks that apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Lifted toric skeleton of size `n`.
    ExtendedToric { n: usize },
    /// Lift of an arbitrary skeleton, compared against it when known.
    LiftedGeneric { skeleton: Option<BinaryCssPair> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn push(&mut self, name: &'static str, outcome: Result<String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(CheckResult { name, passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn expect_rank(h: &SparseQMatrix, expected: usize, name: &str) -> Result<String> {
    let r = h.rank();
    if r == expected {
        Ok(format!("rank {name} = {r}"))
    } else {
        Err(Error::Rank(format!("rank {name} = {r}, expected {expected}")))
    }
}

/// Runs every applicable check; never stops at the first failure.
pub fn verify_pair(hxq: &SparseQMatrix, hzq: &SparseQMatrix, construction: &Construction) -> VerifyReport {
    let mut report = VerifyReport::default();
    let shape_ok = hxq.cols() == hzq.cols() && hxq.field() == hzq.field();
    report.push(
        "shape",
        if shape_ok {
            Ok(format!("{} symbols over GF({})", hxq.cols(), hxq.field().q()))
        } else {
            Err(Error::DimensionMismatch("H_X and H_Z differ in length or field".into()))
        },
    );
    if !shape_ok {
        return report;
    }

    let skeleton = match construction {
        Construction::ExtendedToric { n } => ToricLayout::new(*n).and_then(|l| {
            let (hx, hz) = l.binary_matrices();
            BinaryCssPair::new(hx, hz)
        }),
        Construction::LiftedGeneric { skeleton: Some(s) } => Ok(s.clone()),
        Construction::LiftedGeneric { skeleton: None } => BinaryCssPair::new(hxq.support(), hzq.support()),
    };
    report.push("skeleton", skeleton.as_ref().map(|s| format!("column weight 2, length {}", s.len())).map_err(Clone::clone));
    if let Ok(s) = &skeleton {
        report.push(
            "support",
            check_support(hxq, s.hx(), "H_X")
                .and_then(|_| check_support(hzq, s.hz(), "H_Z"))
                .map(|_| "supports match the skeleton".into()),
        );
    }
    report.push("orthogonality", hxq.check_orthogonal(hzq).map(|_| "H_X H_Z^T = 0".into()));
    report.push("cycle-basis", check_cycle_basis(hxq).map(|_| "unit products on the fundamental cycles of H_X".into()));

    if let Construction::ExtendedToric { n } = construction {
        let Ok(layout) = ToricLayout::new(*n) else {
            return report;
        };
        if layout.num_vars() != hxq.cols() {
            report.push(
                "toric-shape",
                Err(Error::DimensionMismatch(format!("length {} does not match n = {n}", hxq.cols()))),
            );
            return report;
        }
        for (name, side, h) in [("toric-cycles-x", Side::X, hxq), ("toric-cycles-z", Side::Z, hzq)] {
            report.push(name, check_toric_cycle_families(&layout, h, side).map(|_| "minimal and big cycles have unit product".into()));
        }
        report.push("rank-x", expect_rank(hxq, n * n - 1, "H_X"));
        report.push("rank-z", expect_rank(hzq, n * n - 1, "H_Z"));
        let logicals = CssPairQ::from_matrices(hxq.clone(), hzq.clone(), 0)
            .and_then(|pair| ExtendedToricCode::from_pair(layout, pair))
            .map(|code| format!("q-ary dimension 2, {} logical qubits", code.num_logical_qubits()));
        report.push("logicals", logicals);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_toric_pair_passes() {
        for m in [1, 3] {
            let code = ExtendedToricCode::build(3, m, 1).unwrap();
            let r = verify_pair(code.pair().hxq(), code.pair().hzq(), &Construction::ExtendedToric { n: 3 });
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.checks.len(), 10);
        }
    }

    #[test]
    fn every_single_entry_mutation_is_caught() {
        let code = ExtendedToricCode::build(2, 2, 5).unwrap();
        let (hx, hz) = (code.pair().hxq(), code.pair().hzq());
        let c = Construction::ExtendedToric { n: 2 };
        for (which, h) in [(0, hx), (1, hz)] {
            for i in 0..h.rows() {
                for j in 0..h.cols() {
                    for v in 0..4 {
                        if v == h.get(i, j) {
                            continue;
                        }
                        let mut bad = h.clone();
                        bad.set(i, j, v);
                        let r = if which == 0 { verify_pair(&bad, hz, &c) } else { verify_pair(hx, &bad, &c) };
                        assert!(!r.passed());
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_is_named() {
        let code = ExtendedToricCode::build(2, 2, 5).unwrap();
        let mut bad = code.pair().hxq().clone();
        let (j, v) = bad.row(0)[0];
        bad.set(0, j, if v == 1 { 2 } else { 1 });
        let r = verify_pair(&bad, code.pair().hzq(), &Construction::LiftedGeneric { skeleton: None });
        let names: Vec<_> = r.failures().map(|c| c.name).collect();
        assert!(names.contains(&"orthogonality"), "{names:?}");
    }
}
