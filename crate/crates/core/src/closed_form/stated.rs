//! The difference-count closed forms exactly as originally stated, including
//! branch conditions that can never fire and values that disagree with brute
//! force. The verification harness matches brute-force counts against these
//! tables; the predictors in the parent module hold the resolved assignments.

use std::fmt;

use serde::Serialize;

use super::{odd_label, shift_label, two_k_minus_one, OddLabel, ShiftLabel};
use crate::correlation::DifferenceKind;
use crate::number_theory::{Class, PMod8, PrimePowerParams};

/// A value expression appearing in a stated branch or in a derivation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ValueFormula {
    /// `p^(m−1)(p + c)/4`
    Quarter(i64),
    /// `p^(m−1)(p + c)/2`
    Half(i64),
    FullPower,
    LowerPower,
    Zero,
}

impl ValueFormula {
    /// `None` when the expression is not an integer for these parameters.
    pub fn eval(&self, params: &PrimePowerParams) -> Option<i64> {
        let p = params.p() as i64;
        let a = params.lower_power() as i64;
        let frac = |c: i64, d: i64| ((p + c) % d == 0).then(|| a * (p + c) / d);
        match *self {
            ValueFormula::Quarter(c) => frac(c, 4),
            ValueFormula::Half(c) => frac(c, 2),
            ValueFormula::FullPower => Some(params.q() as i64),
            ValueFormula::LowerPower => Some(a),
            ValueFormula::Zero => Some(0),
        }
    }
}

impl fmt::Display for ValueFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signed = |c: i64| {
            if c < 0 {
                format!("p-{}", -c)
            } else {
                format!("p+{c}")
            }
        };
        match *self {
            ValueFormula::Quarter(c) => write!(f, "p^(m-1)({})/4", signed(c)),
            ValueFormula::Half(c) => write!(f, "p^(m-1)({})/2", signed(c)),
            ValueFormula::FullPower => f.write_str("p^m"),
            ValueFormula::LowerPower => f.write_str("p^(m-1)"),
            ValueFormula::Zero => f.write_str("0"),
        }
    }
}

/// One stated branch: a literal condition and its value.
#[derive(Clone, Copy)]
pub struct StatedBranch {
    /// `"<kind>.<row>"`, rows numbered from 1 in stated order.
    pub id: &'static str,
    pub condition: &'static str,
    pub value: ValueFormula,
    pub applies: fn(&PrimePowerParams, u64) -> bool,
}

impl fmt::Debug for StatedBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StatedBranch")
            .field("id", &self.id)
            .field("condition", &self.condition)
            .field("value", &self.value)
            .finish()
    }
}

/// A value the harness may assign to a branch, with where it appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub value: ValueFormula,
    pub source: &'static str,
}

#[derive(Debug, Clone)]
pub struct StatedForm {
    pub kind: DifferenceKind,
    pub branches: Vec<StatedBranch>,
    /// Extra values that appear in intermediate derivation steps (branch values are always candidates).
    pub derivation_values: Vec<Candidate>,
}

fn r(params: &PrimePowerParams) -> PMod8 {
    params.p_mod_8()
}

fn mod4_is_1(params: &PrimePowerParams) -> bool {
    r(params).minus_one_is_square()
}

fn tau_is(params: &PrimePowerParams, tau: u64, want: ShiftLabel) -> bool {
    shift_label(params, tau) == want
}

fn tau_unit(params: &PrimePowerParams, tau: u64) -> bool {
    matches!(shift_label(params, tau), ShiftLabel::Unit(_))
}

fn odd_key(params: &PrimePowerParams, tau: u64) -> OddLabel {
    odd_label(params, two_k_minus_one(params, tau))
}

fn odd_is(params: &PrimePowerParams, tau: u64, want: OddLabel) -> bool {
    odd_key(params, tau) == want
}

fn odd_unit(params: &PrimePowerParams, tau: u64) -> bool {
    matches!(odd_key(params, tau), OddLabel::Unit(_))
}

// The stated "2τ − 2 ∈ D_0^{(2p^m)}": an even residue is never in a unit class.
fn even_residue_in_d0(params: &PrimePowerParams, tau: u64) -> bool {
    let n = params.period();
    let x = (2 * (tau % params.q()) + n - 2) % n;
    x % 2 == 1 && odd_label(params, x) == OddLabel::Unit(Class::D0)
}

const D0: ShiftLabel = ShiftLabel::Unit(Class::D0);
const D1: ShiftLabel = ShiftLabel::Unit(Class::D1);
const O0: OddLabel = OddLabel::Unit(Class::D0);
const O1: OddLabel = OddLabel::Unit(Class::D1);

pub fn stated_difference_form(kind: DifferenceKind) -> StatedForm {
    use PMod8::*;
    use ValueFormula::*;
    match kind {
        DifferenceKind::U => StatedForm {
            kind,
            branches: vec![
                StatedBranch {
                    id: "d_u.1",
                    condition: "τ ∈ D0(p^m), p ≡ 1 (mod 4)",
                    value: Quarter(3),
                    applies: |pr, t| tau_is(pr, t, D0) && mod4_is_1(pr),
                },
                StatedBranch {
                    id: "d_u.2",
                    condition: "τ ∈ D1(p^m), p ≡ 1 (mod 4)",
                    value: Quarter(-1),
                    applies: |pr, t| tau_is(pr, t, D1) && mod4_is_1(pr),
                },
                StatedBranch {
                    id: "d_u.3",
                    condition: "p ≡ 3 (mod 4)",
                    value: Quarter(1),
                    applies: |pr, t| tau_unit(pr, t) && !mod4_is_1(pr),
                },
                StatedBranch {
                    id: "d_u.4",
                    condition: "τ ∈ pZ \\ {0}",
                    value: Zero,
                    applies: |pr, t| tau_is(pr, t, ShiftLabel::PMultiple),
                },
            ],
            derivation_values: vec![],
        },
        DifferenceKind::V => StatedForm {
            kind,
            branches: vec![
                StatedBranch {
                    id: "d_v.1",
                    condition: "τ ∈ D1(p^m), p ≡ 1 (mod 8), or τ ∈ D0(p^m), p ≡ 5 (mod 8)",
                    value: Quarter(-1),
                    applies: |pr, t| {
                        (tau_is(pr, t, D1) && r(pr) == One) || (tau_is(pr, t, D0) && r(pr) == Five)
                    },
                },
                StatedBranch {
                    id: "d_v.2",
                    condition: "τ ∈ D0(p^m), p ≡ 1 (mod 8), or τ ∈ D1(p^m), p ≡ 5 (mod 8)",
                    value: Quarter(3),
                    applies: |pr, t| {
                        (tau_is(pr, t, D0) && r(pr) == One) || (tau_is(pr, t, D1) && r(pr) == Five)
                    },
                },
                StatedBranch {
                    id: "d_v.3",
                    condition: "τ ∈ Z*(p^m), p ≡ 3 or 7 (mod 8)",
                    value: Quarter(1),
                    applies: |pr, t| tau_unit(pr, t) && matches!(r(pr), Three | Seven),
                },
                StatedBranch {
                    id: "d_v.4",
                    condition: "τ ∈ pZ \\ {0}",
                    value: Zero,
                    applies: |pr, t| tau_is(pr, t, ShiftLabel::PMultiple),
                },
            ],
            derivation_values: vec![Candidate {
                value: LowerPower,
                source: "derivation, |B ∩ (C0 + 2τ)|",
            }],
        },
        DifferenceKind::UV => StatedForm {
            kind,
            branches: vec![
                StatedBranch {
                    id: "d_uv.1",
                    condition: "p ≡ 1 (mod 8), 2τ−1 ∈ D0(2p^m)",
                    value: Quarter(3),
                    applies: |pr, t| r(pr) == One && odd_is(pr, t, O0),
                },
                StatedBranch {
                    id: "d_uv.2",
                    condition: "p ≡ 1 (mod 8), 2τ−1 ∈ D1(2p^m), or p ≡ 5 (mod 8), 2τ−1 ∈ Z*(2p^m)",
                    value: Quarter(-1),
                    applies: |pr, t| {
                        (r(pr) == One && odd_is(pr, t, O1)) || (r(pr) == Five && odd_unit(pr, t))
                    },
                },
                StatedBranch {
                    id: "d_uv.3",
                    condition: "p ≡ 3 (mod 8), 2τ−1 ∈ D1(2p^m), or p ≡ 7 (mod 8), 2τ−1 ∈ Z*(2p^m)",
                    value: Quarter(1),
                    applies: |pr, t| {
                        (r(pr) == Three && odd_is(pr, t, O1)) || (r(pr) == Seven && odd_unit(pr, t))
                    },
                },
                StatedBranch {
                    id: "d_uv.4",
                    condition: "p ≡ 3 (mod 8), 2τ−2 ∈ D0(2p^m)",
                    value: Quarter(-3),
                    applies: |pr, t| r(pr) == Three && even_residue_in_d0(pr, t),
                },
                StatedBranch {
                    id: "d_uv.5",
                    condition: "p ≡ ±1 (mod 8), 2τ−1 ≡ p (mod 2p)",
                    value: FullPower,
                    applies: |pr, t| r(pr).two_is_square() && odd_is(pr, t, OddLabel::PMod2p),
                },
                StatedBranch {
                    id: "d_uv.6",
                    condition: "p ≡ ±3 (mod 8), 2τ−1 ≡ p (mod 2p)",
                    value: LowerPower,
                    applies: |pr, t| !r(pr).two_is_square() && odd_is(pr, t, OddLabel::PMod2p),
                },
            ],
            derivation_values: vec![
                Candidate {
                    value: Zero,
                    source: "derivation, 2τ−1 ≡ p (mod 2p) with 2 ∈ D0(p)",
                },
                Candidate {
                    value: Half(-1),
                    source: "derivation, 2τ−1 ≡ p (mod 2p) with 2 ∈ D1(p)",
                },
            ],
        },
        DifferenceKind::VU => StatedForm {
            kind,
            branches: vec![
                StatedBranch {
                    id: "d_vu.1",
                    condition: "p ≡ 1 (mod 8), 2τ−1 ∈ D0(2p^m)",
                    value: Quarter(3),
                    applies: |pr, t| r(pr) == One && odd_is(pr, t, O0),
                },
                StatedBranch {
                    id: "d_vu.2",
                    condition: "p ≡ 3 (mod 8), 2τ−1 ∈ D1(2p^m)",
                    value: Quarter(-3),
                    applies: |pr, t| r(pr) == Three && odd_is(pr, t, O1),
                },
                StatedBranch {
                    id: "d_vu.3",
                    condition: "p ≡ 5 (mod 8), 2τ−1 ∈ Z*(2p^m), or p ≡ 1 (mod 8), 2τ−1 ∈ D1(2p^m)",
                    value: Quarter(-1),
                    applies: |pr, t| {
                        (r(pr) == Five && odd_unit(pr, t)) || (r(pr) == One && odd_is(pr, t, O1))
                    },
                },
                StatedBranch {
                    id: "d_vu.4",
                    condition: "p ≡ 7 (mod 8), 2τ−1 ∈ Z*(2p^m), or p ≡ 3 (mod 8), 2τ−1 ∈ D0(2p^m)",
                    value: Quarter(1),
                    applies: |pr, t| {
                        (r(pr) == Seven && odd_unit(pr, t)) || (r(pr) == Three && odd_is(pr, t, O0))
                    },
                },
                StatedBranch {
                    id: "d_vu.5",
                    condition: "p ≡ ±1 (mod 8), 2τ−1 ≡ p (mod 2p)",
                    value: FullPower,
                    applies: |pr, t| r(pr).two_is_square() && odd_is(pr, t, OddLabel::PMod2p),
                },
                StatedBranch {
                    id: "d_vu.6",
                    condition: "p ≡ ±3 (mod 8), 2τ−1 ≡ p (mod 2p)",
                    value: LowerPower,
                    applies: |pr, t| !r(pr).two_is_square() && odd_is(pr, t, OddLabel::PMod2p),
                },
            ],
            derivation_values: vec![
                Candidate {
                    value: Zero,
                    source: "derivation, 2τ−1 ≡ p (mod 2p) with 2 ∈ D0(p)",
                },
                Candidate {
                    value: Half(-1),
                    source: "derivation, 2τ−1 ≡ p (mod 2p) with 2 ∈ D1(p)",
                },
            ],
        },
    }
}

impl StatedForm {
    /// Every value the stated form or its derivation mentions.
    pub fn candidates(&self) -> Vec<Candidate> {
        let mut out: Vec<Candidate> = Vec::new();
        for b in &self.branches {
            if !out.iter().any(|c| c.value == b.value) {
                out.push(Candidate {
                    value: b.value,
                    source: b.id,
                });
            }
        }
        for c in &self.derivation_values {
            if !out.iter().any(|o| o.value == c.value) {
                out.push(*c);
            }
        }
        out
    }

    pub fn applicable(&self, params: &PrimePowerParams, shift: u64) -> Vec<&StatedBranch> {
        self.branches
            .iter()
            .filter(|b| (b.applies)(params, shift))
            .collect()
    }

    /// Shifts the form speaks about: nonzero mod `p^m` for `d_u`, `d_v`; all `1..=p^m` otherwise.
    pub fn admissible_shifts(&self, params: &PrimePowerParams) -> std::ops::RangeInclusive<u64> {
        match self.kind {
            DifferenceKind::U | DifferenceKind::V => 1..=params.q() - 1,
            DifferenceKind::UV | DifferenceKind::VU => 1..=params.q(),
        }
    }
}
