//! Branch matching: where a stated closed form disagrees with brute force,
//! find which stated values (from the same form or its derivation) fit instead.
//!
//! Cases are grouped by `(p mod 8, branch label)`. A group is confirmed when some
//! stated branch applying to it fits every case; otherwise one entry is emitted
//! listing the fitting candidates. Nothing outside the candidate lists is ever
//! proposed.

use std::collections::BTreeMap;

use serde::Serialize;

use super::Instance;
use crate::closed_form::stated::stated_difference_form;
use crate::closed_form::{
    difference_case, predict_cross_ccf, shift_label, CrossDirection, ShiftLabel,
};
use crate::correlation::{DifferenceKind, GaussianInt};
use crate::number_theory::Class;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypoResolution {
    /// Which closed form: `d_u`, `d_v`, `d_v.split`, `d_uv`, `d_vu`, `C_s1`, `C_s2s1`.
    pub form: String,
    pub p_mod_8: u64,
    pub case: String,
    pub cases: u64,
    /// The stated branch(es) applying to the case and their value, or why none applies.
    pub stated: String,
    /// Stated values that fit every case in the group.
    pub fitting: Vec<String>,
}

pub(crate) fn all(inst: &Instance) -> Vec<TypoResolution> {
    let mut out = Vec::new();
    for kind in DifferenceKind::ALL {
        out.extend(difference(inst, kind));
    }
    out.extend(d_v_split(inst));
    out.extend(component_imaginary_term(inst));
    out.extend(cross_shift(inst));
    out
}

fn difference(inst: &Instance, kind: DifferenceKind) -> Vec<TypoResolution> {
    let pr = &inst.params;
    let form = stated_difference_form(kind);
    let mut groups: BTreeMap<String, Vec<(u64, i64)>> = BTreeMap::new();
    for t in form.admissible_shifts(pr) {
        let brute = inst.sets.count(kind, Class::D1, Class::D0, t) as i64;
        groups
            .entry(difference_case(kind, t, pr).to_string())
            .or_default()
            .push((t, brute));
    }
    let mut out = Vec::new();
    for (case, items) in groups {
        let mut applicable: Vec<_> = Vec::new();
        for &(t, _) in &items {
            for b in form.applicable(pr, t) {
                if !applicable.iter().any(|a: &&_| std::ptr::eq(*a, b)) {
                    applicable.push(b);
                }
            }
        }
        let fits = |v: Option<i64>| items.iter().all(|&(_, brute)| v == Some(brute));
        if applicable.iter().any(|b| fits(b.value.eval(pr))) {
            continue;
        }
        let stated = if applicable.is_empty() {
            "no stated condition applies".to_string()
        } else {
            applicable
                .iter()
                .map(|b| format!("{} [{}] = {}", b.id, b.condition, b.value))
                .collect::<Vec<_>>()
                .join("; ")
        };
        let fitting = form
            .candidates()
            .into_iter()
            .filter(|c| fits(c.value.eval(pr)))
            .map(|c| format!("{} [{}]", c.value, c.source))
            .collect();
        out.push(TypoResolution {
            form: kind.to_string(),
            p_mod_8: pr.p_mod_8().value(),
            case,
            cases: items.len() as u64,
            stated,
            fitting,
        });
    }
    out
}

const FIRST_SPLIT: &str = "first display: τ ∈ D0 → (0,1), τ ∈ D1 → (1,0)";
const SECOND_SPLIT: &str = "second display: τ ∈ D0 → (1,0), τ ∈ D1 → (0,1)";

// The d_v derivation splits |D1(2p^m) ∩ (C0(2p^m) + 2τ)| into two cyclotomic-number
// displays, both labelled p ≡ ±1 (mod 8). Check which display each class obeys.
fn d_v_split(inst: &Instance) -> Vec<TypoResolution> {
    let pr = &inst.params;
    let (q, n) = (pr.q(), pr.period());
    let t = &inst.table;
    let cyc01 = t.cyclotomic_number(Class::D0, Class::D1) as i64;
    let cyc10 = t.cyclotomic_number(Class::D1, Class::D0) as i64;
    let (mut first_ok, mut second_ok, mut cases) = (true, true, 0u64);
    for tau in 1..q {
        let ShiftLabel::Unit(c) = shift_label(pr, tau) else {
            continue;
        };
        let brute = t
            .top()
            .d_2p(Class::D1)
            .iter()
            .filter(|&&x| t.class_mod_2q((x + n - 2 * tau) % n) == Some(Class::D0))
            .count() as i64;
        let (first, second) = match c {
            Class::D0 => (cyc01, cyc10),
            Class::D1 => (cyc10, cyc01),
        };
        first_ok &= brute == first;
        second_ok &= brute == second;
        cases += 1;
    }
    // Both displays carry the ±1 label, so only ±1 classes are covered as stated.
    if pr.p_mod_8().two_is_square() && (first_ok || second_ok) {
        return Vec::new();
    }
    // p ≡ 5 fits both displays since (0,1) = (1,0); list the one p ≡ 3 also needs first.
    let mut fitting = Vec::new();
    if second_ok {
        fitting.push(SECOND_SPLIT.to_string());
    }
    if first_ok {
        fitting.push(FIRST_SPLIT.to_string());
    }
    vec![TypoResolution {
        form: "d_v.split".to_string(),
        p_mod_8: pr.p_mod_8().value(),
        case: "τ ∈ Z*(p^m)".to_string(),
        cases,
        stated: if pr.p_mod_8().two_is_square() {
            "displays labelled p ≡ ±1 (mod 8)".to_string()
        } else {
            "no display labelled p ≡ ±3 (mod 8); both are labelled p ≡ ±1 (mod 8)".to_string()
        },
        fitting,
    }]
}

// C_s1 for p ≡ 3 (mod 4) was stated with an imaginary term of ±2ω, where the
// C_s2 form carries ±2p^(m−1)ω.
fn component_imaginary_term(inst: &Instance) -> Vec<TypoResolution> {
    let pr = &inst.params;
    if pr.p_mod_8().minus_one_is_square() {
        return Vec::new();
    }
    let a = pr.lower_power() as i64;
    let re = a * (pr.p() as i64 - 5) / 2;
    let mut out = Vec::new();
    for class in Class::BOTH {
        let sign = if class == Class::D0 { 1 } else { -1 };
        let stated = GaussianInt::new(re, 2 * sign);
        let scaled = GaussianInt::new(re, 2 * a * sign);
        let ks: Vec<u64> = (1..pr.q())
            .filter(|&k| shift_label(pr, k) == ShiftLabel::Unit(class))
            .collect();
        let fits = |v: GaussianInt| ks.iter().all(|&k| inst.decomposition.acf_s1.at(k) == v);
        if fits(stated) {
            continue;
        }
        let pm = if sign > 0 { "+" } else { "-" };
        let mut fitting = Vec::new();
        if fits(scaled) {
            fitting.push(format!("p^(m-1)(p-5)/2 {pm} 2p^(m-1)ω [C_s2 form]"));
        }
        out.push(TypoResolution {
            form: "C_s1".to_string(),
            p_mod_8: pr.p_mod_8().value(),
            case: format!("D{class}"),
            cases: ks.len() as u64,
            stated: format!("p^(m-1)(p-5)/2 {pm} 2ω"),
            fitting,
        });
    }
    out
}

// The C_s2s1 form is keyed on 2k − 1 but, read literally as C_s2s1(k), does not
// hold; the term paired with C_s1s2(k) in the odd-shift decomposition is C_s2s1(k − 1).
fn cross_shift(inst: &Instance) -> Vec<TypoResolution> {
    let pr = &inst.params;
    let prof = &inst.decomposition.ccf_s2s1;
    let mut groups: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for k in 1..=pr.q() {
        groups
            .entry(crate::closed_form::cross_case(k, pr).to_string())
            .or_default()
            .push(k);
    }
    let mut out = Vec::new();
    for (case, ks) in groups {
        let literal = ks
            .iter()
            .all(|&k| prof.at(k) == predict_cross_ccf(CrossDirection::S2S1, k, pr));
        if literal {
            continue;
        }
        let shifted = ks
            .iter()
            .all(|&k| prof.at(k - 1) == predict_cross_ccf(CrossDirection::S2S1, k, pr));
        out.push(TypoResolution {
            form: "C_s2s1".to_string(),
            p_mod_8: pr.p_mod_8().value(),
            case,
            cases: ks.len() as u64,
            stated: "value of C_s2s1(k), 1 ≤ k ≤ p^m, keyed on 2k−1".to_string(),
            fitting: if shifted {
                vec!["value of C_s2s1(k−1), keyed on 2k−1 [odd-shift decomposition]".to_string()]
            } else {
                Vec::new()
            },
        });
    }
    out
}
