//! Individual brute-force-versus-closed-form checks over one instance.

use std::collections::BTreeSet;
use std::fmt::Display;

use serde::{Serialize, Serializer};

use super::Instance;
use crate::closed_form::{
    acf_case, cross_k_for_shift, predict_acf_s, predict_component_acf, predict_cross_ccf,
    predict_difference_count, Component, CrossDirection,
};
use crate::correlation::{autocorrelation, DifferenceKind, GaussianInt};
use crate::cyclotomy::{cyclotomic_number_cf, ClassTable};
use crate::number_theory::{mod_pow, qr_class, Class, PrimePowerParams};
use crate::sequences::{balance_stats, build_s, Periodic};

/// Mismatches listed per check; the full count is always kept.
pub const MISMATCH_SAMPLE_CAP: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    #[serde(serialize_with = "as_str")]
    pub id: CheckId,
    pub cases: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
}

fn as_str<S: Serializer>(id: &CheckId, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(id.as_str())
}

impl Check {
    pub fn new(id: CheckId) -> Self {
        Self {
            id,
            cases: 0,
            mismatch_count: 0,
            mismatches: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }

    pub(crate) fn expect<T: PartialEq + Display>(
        &mut self,
        input: impl FnOnce() -> String,
        expected: T,
        actual: T,
    ) {
        self.cases += 1;
        if expected != actual {
            self.mismatch_count += 1;
            if self.mismatches.len() < MISMATCH_SAMPLE_CAP {
                self.mismatches.push(Mismatch {
                    input: input(),
                    expected: expected.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
    }

    pub(crate) fn expect_true(&mut self, input: impl FnOnce() -> String, ok: bool) {
        self.expect(input, true, ok);
    }
}

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Every check the harness runs, in report order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($variant),*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name),*
                }
            }
        }

        impl std::str::FromStr for CheckId {
            type Err = crate::error::Error;

            fn from_str(s: &str) -> crate::error::Result<Self> {
                match s {
                    $($name => Ok(CheckId::$variant),)*
                    _ => Err(crate::error::invalid(format!("unknown check id {s:?}"))),
                }
            }
        }
    };
}

check_ids! {
    Partition => "structural.partition",
    Cardinality => "structural.cardinality",
    GIndependence => "structural.g_independence",
    FastClass => "structural.fast_class",
    Interleaving => "structural.interleaving",
    UvRelations => "structural.uv_relations",
    ConjugateSymmetry => "structural.conjugate_symmetry",
    Balance => "structural.balance",
    EulerVsEnumeration => "classes.euler_vs_enumeration",
    TwoLifts => "classes.two_lifts",
    TwoByPMod8 => "classes.two_by_p_mod_8",
    ShiftInvariance => "classes.shift_invariance",
    MinusOneLifts => "classes.minus_one_lifts",
    CyclotomicNumbers => "cyclotomic_numbers",
    DifferenceU => "difference.d_u",
    DifferenceV => "difference.d_v",
    DifferenceUV => "difference.d_uv",
    DifferenceVU => "difference.d_vu",
    DifferenceSymmetry => "difference.symmetry",
    DifferenceTotal => "difference.total",
    Decomposition => "decomposition",
    DecompositionShiftZero => "decomposition.cross_shift_zero",
    ComponentAcfS1 => "component_acf.s1",
    ComponentAcfS2 => "component_acf.s2",
    CrossS1S2 => "cross_ccf.s1s2",
    CrossS2S1 => "cross_ccf.s2s1",
    AcfS => "acf.s",
    DistinctMagnitudes => "acf.distinct_magnitudes",
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CheckId {
    pub fn is_structural(self) -> bool {
        self.as_str().starts_with("structural.")
    }
}

pub(crate) fn run(id: CheckId, inst: &Instance) -> Check {
    let mut c = Check::new(id);
    let pr = &inst.params;
    match id {
        CheckId::Partition => {
            for (x, &n) in inst.table.partition_cover().iter().enumerate() {
                c.expect(|| format!("n={x}"), 1, n);
            }
        }
        CheckId::Cardinality => {
            let p = pr.p();
            for lvl in inst.table.levels() {
                let j = lvl.level();
                let want = p.pow(j - 1) * (p - 1) / 2;
                for cl in Class::BOTH {
                    c.expect(
                        || format!("|D{cl}({})|", lvl.prime_power()),
                        want,
                        lvl.d_p(cl).len() as u64,
                    );
                    c.expect(
                        || format!("|D{cl}({})|", 2 * lvl.prime_power()),
                        want,
                        lvl.d_2p(cl).len() as u64,
                    );
                }
            }
        }
        CheckId::GIndependence => {
            if let Some(g2) = inst.second_root {
                let alt_params = PrimePowerParams::with_root(pr.p(), pr.m(), g2)
                    .expect("second root was validated when found");
                let alt = ClassTable::build(&alt_params).expect("same size as the primary table");
                for x in 0..pr.period() {
                    c.expect(
                        || format!("g={} vs g={g2}, n={x}", pr.g()),
                        inst.table.classify(x),
                        alt.classify(x),
                    );
                }
                let alt_s = build_s(&alt_params);
                for (n, (a, b)) in inst.s.symbols().iter().zip(alt_s.symbols()).enumerate() {
                    c.expect(|| format!("s({n}) with g={g2}"), *a, *b);
                }
            }
        }
        CheckId::FastClass => {
            for x in 0..pr.period() {
                c.expect(
                    || format!("n={x}"),
                    inst.table.classify(x),
                    inst.table.fast_class(x),
                );
            }
        }
        CheckId::Interleaving => {
            let s = inst.s.symbols();
            for j in 0..pr.q() as usize {
                c.expect(|| format!("s({})", 2 * j), inst.s1.symbols()[j], s[2 * j]);
                c.expect(
                    || format!("s({})", 2 * j + 1),
                    inst.s2.symbols()[j],
                    s[2 * j + 1],
                );
            }
        }
        CheckId::UvRelations => {
            let p = pr.p() as usize;
            for n in 0..pr.q() as usize {
                if n % p != 0 {
                    c.expect(
                        || format!("s1({n}) = u({n}) + 2"),
                        inst.u.symbols()[n] + 2,
                        inst.s1.symbols()[n],
                    );
                }
                if (2 * n + 1) % p != 0 {
                    c.expect(
                        || format!("s2({n}) = v({n})"),
                        inst.v.symbols()[n],
                        inst.s2.symbols()[n],
                    );
                }
            }
        }
        CheckId::ConjugateSymmetry => {
            let profiles = [
                ("s", &inst.acf_s),
                ("s1", &inst.decomposition.acf_s1),
                ("s2", &inst.decomposition.acf_s2),
                ("u", &inst.acf_u),
                ("v", &inst.acf_v),
            ];
            for (name, prof) in profiles {
                let len = prof.period as u64;
                for t in 0..len {
                    c.expect(
                        || format!("{name}, tau={t}"),
                        prof.at(t).conj(),
                        prof.at(len - t),
                    );
                }
            }
        }
        CheckId::Balance => {
            if pr.m() == 1 {
                let stats = balance_stats(&inst.s);
                c.expect(
                    || format!("counts {:?}", stats.counts),
                    true,
                    stats.balanced,
                );
            }
        }
        CheckId::EulerVsEnumeration => {
            let p = pr.p();
            let squares: BTreeSet<u64> = (0..(p - 1) / 2)
                .map(|t| mod_pow(pr.g(), 2 * t, p).expect("p >= 3"))
                .collect();
            for n in 1..p {
                let euler = qr_class(n as i64, p).expect("n is a unit") == Class::D0;
                c.expect(|| format!("n={n}"), squares.contains(&n), euler);
            }
        }
        CheckId::TwoLifts => {
            let base = class_at(&inst.table, 1, 2);
            for lvl in inst.table.levels() {
                c.expect(
                    || format!("class of 2 mod {}", lvl.prime_power()),
                    base,
                    class_at(&inst.table, lvl.level(), 2),
                );
            }
        }
        CheckId::TwoByPMod8 => {
            let want = if pr.p_mod_8().two_is_square() {
                Class::D0
            } else {
                Class::D1
            };
            c.expect(
                || format!("p ≡ {} (mod 8)", pr.p_mod_8()),
                want,
                class_at(&inst.table, 1, 2),
            );
        }
        CheckId::ShiftInvariance => shift_invariance(&mut c, inst),
        CheckId::MinusOneLifts => {
            for lvl in inst.table.levels() {
                let pk = lvl.prime_power();
                let in_p = lvl.d_p(Class::D0).binary_search(&(pk - 1)).is_ok();
                let in_2p = lvl.d_2p(Class::D0).binary_search(&(2 * pk - 1)).is_ok();
                c.expect(|| format!("-1 mod {pk} vs -1 mod {}", 2 * pk), in_p, in_2p);
                c.expect(
                    || format!("-1 ∈ D0({pk}) iff p ≡ 1 (mod 4)"),
                    pr.p_mod_8().minus_one_is_square(),
                    in_p,
                );
            }
        }
        CheckId::CyclotomicNumbers => {
            for i in Class::BOTH {
                for j in Class::BOTH {
                    c.expect(
                        || format!("({i},{j})"),
                        cyclotomic_number_cf(i, j, pr),
                        inst.table.cyclotomic_number(i, j),
                    );
                }
            }
        }
        CheckId::DifferenceU => difference(&mut c, inst, DifferenceKind::U),
        CheckId::DifferenceV => difference(&mut c, inst, DifferenceKind::V),
        CheckId::DifferenceUV => difference(&mut c, inst, DifferenceKind::UV),
        CheckId::DifferenceVU => difference(&mut c, inst, DifferenceKind::VU),
        CheckId::DifferenceSymmetry => {
            for kind in DifferenceKind::ALL {
                for t in 0..pr.q() {
                    c.expect(
                        || format!("{kind}, tau={t}"),
                        inst.sets.count(kind, Class::D0, Class::D1, t),
                        inst.sets.count(kind, Class::D1, Class::D0, t),
                    );
                }
            }
        }
        CheckId::DifferenceTotal => {
            for kind in DifferenceKind::ALL {
                for t in 0..pr.q() {
                    let total: u64 = Class::BOTH
                        .iter()
                        .flat_map(|&i| Class::BOTH.map(|j| inst.sets.count(kind, i, j, t)))
                        .sum();
                    c.expect(|| format!("{kind}, tau={t}"), pr.q(), total);
                }
            }
        }
        CheckId::Decomposition => {
            for t in 0..pr.period() {
                c.expect(
                    || format!("tau={t}"),
                    inst.acf_s.at(t),
                    inst.decomposition.value(t),
                );
            }
        }
        CheckId::DecompositionShiftZero => {
            // τ = 1 needs the cross-correlation at shift 0, below the usual 1 ≤ k range.
            c.expect(
                || "C_s2s1(0)".to_string(),
                predict_cross_ccf(CrossDirection::S2S1, 1, pr),
                inst.decomposition.ccf_s2s1.at(0),
            );
        }
        CheckId::ComponentAcfS1 | CheckId::ComponentAcfS2 => {
            let (which, prof) = if id == CheckId::ComponentAcfS1 {
                (Component::S1, &inst.decomposition.acf_s1)
            } else {
                (Component::S2, &inst.decomposition.acf_s2)
            };
            for k in 1..pr.q() {
                c.expect(
                    || format!("k={k}"),
                    predict_component_acf(which, k, pr),
                    prof.at(k),
                );
            }
        }
        CheckId::CrossS1S2 | CheckId::CrossS2S1 => {
            let (dir, prof) = if id == CheckId::CrossS1S2 {
                (CrossDirection::S1S2, &inst.decomposition.ccf_s1s2)
            } else {
                (CrossDirection::S2S1, &inst.decomposition.ccf_s2s1)
            };
            for shift in 0..pr.q() {
                let k = cross_k_for_shift(dir, shift, pr);
                c.expect(
                    || format!("shift={shift} (k={k})"),
                    predict_cross_ccf(dir, k, pr),
                    prof.at(shift),
                );
            }
        }
        CheckId::AcfS => {
            for t in 0..pr.period() {
                c.expect(
                    || format!("tau={t}"),
                    predict_acf_s(t, pr),
                    inst.acf_s.at(t),
                );
            }
        }
        CheckId::DistinctMagnitudes => {
            let mags: BTreeSet<i64> = inst.acf_s.values.iter().map(|v| v.norm_sqr()).collect();
            c.expect(
                || format!("squared magnitudes {mags:?}"),
                true,
                mags.len() <= 4,
            );
        }
    }
    c
}

// Class of the unit `x` in the enumerated classes mod `p^level`.
fn class_at(table: &ClassTable, level: u32, x: u64) -> Class {
    let lvl = table.level(level).expect("level within 1..=m");
    let x = x % lvl.prime_power();
    Class::BOTH
        .into_iter()
        .find(|&c| lvl.d_p(c).binary_search(&x).is_ok())
        .expect("x is a unit")
}

fn difference(c: &mut Check, inst: &Instance, kind: DifferenceKind) {
    let pr = &inst.params;
    let shifts = match kind {
        DifferenceKind::U | DifferenceKind::V => 1..=pr.q() - 1,
        DifferenceKind::UV | DifferenceKind::VU => 1..=pr.q(),
    };
    for t in shifts {
        let brute = inst.sets.count(kind, Class::D1, Class::D0, t);
        let predicted = predict_difference_count(kind, t, pr).expect("admissible shift");
        c.expect(|| format!("tau={t}"), predicted, brute);
    }
}

/// Odd `t` sampled for the shift-invariance identities.
pub(crate) fn sample_odd_t(p: u64) -> Vec<i64> {
    let p = p as i64;
    let mut ts: Vec<i64> = vec![1, -1, 3, p - 2, p + 2, -p];
    ts.retain(|t| t % 2 != 0);
    ts.sort_unstable();
    ts.dedup();
    ts
}

// 2D_i(p^j) + pt ≡ D_i or D_{i+1} (mod 2p^j), by whether 2 is a square mod p;
// D_i(2p^j) + 2pt ≡ D_i(2p^j).
fn shift_invariance(c: &mut Check, inst: &Instance) {
    let pr = &inst.params;
    let p = pr.p();
    let two_square = pr.p_mod_8().two_is_square();
    for lvl in inst.table.levels() {
        let pj = lvl.prime_power();
        let n = 2 * pj as i64;
        let reduce = |x: i64| x.rem_euclid(n) as u64;
        for t in sample_odd_t(p) {
            let pt = p as i64 * t;
            for i in Class::BOTH {
                let target = if two_square { i } else { i.other() };
                let lhs: BTreeSet<u64> = lvl
                    .d_p(i)
                    .iter()
                    .map(|&x| reduce(2 * x as i64 + pt))
                    .collect();
                let rhs: BTreeSet<u64> = lvl.d_2p(target).iter().copied().collect();
                c.expect_true(|| format!("2D{i}({pj}) + {p}*{t} mod {n}"), lhs == rhs);
                let lhs: BTreeSet<u64> = lvl
                    .d_2p(i)
                    .iter()
                    .map(|&x| reduce(x as i64 + 2 * pt))
                    .collect();
                let rhs: BTreeSet<u64> = lvl.d_2p(i).iter().copied().collect();
                c.expect_true(|| format!("D{i}({n}) + 2*{p}*{t} mod {n}"), lhs == rhs);
            }
        }
    }
}

/// Per-branch tally of the `C_s` comparison, so merged branches can be inspected separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchTally {
    pub p_mod_8: u64,
    pub branch: String,
    pub cases: u64,
    pub mismatches: u64,
    /// Distinct brute-force values seen on this branch.
    pub observed: Vec<String>,
}

pub(crate) fn acf_branch_tallies(inst: &Instance) -> Vec<BranchTally> {
    use std::collections::BTreeMap;
    let pr = &inst.params;
    let mut map: BTreeMap<String, (u64, u64, BTreeSet<GaussianInt>)> = BTreeMap::new();
    for t in 0..pr.period() {
        let entry = map.entry(acf_case(t, pr).to_string()).or_default();
        let v = inst.acf_s.at(t);
        entry.0 += 1;
        entry.1 += u64::from(v != predict_acf_s(t, pr));
        entry.2.insert(v);
    }
    map.into_iter()
        .map(|(branch, (cases, mismatches, vals))| BranchTally {
            p_mod_8: pr.p_mod_8().value(),
            branch,
            cases,
            mismatches,
            observed: vals.iter().map(ToString::to_string).collect(),
        })
        .collect()
}

/// Mismatches of the `C_s` comparison when the brute-force side uses `ω = −i`.
pub(crate) fn conjugate_acf_mismatches(inst: &Instance) -> u64 {
    let pr = &inst.params;
    (0..pr.period())
        .filter(|&t| inst.acf_s.at(t).conj() != predict_acf_s(t, pr))
        .count() as u64
}

/// Autocorrelation of any sequence, for callers that only hold a trait object.
pub(crate) fn acf_of(seq: &impl Periodic) -> crate::correlation::CorrelationProfile {
    autocorrelation(seq).expect("instance size was checked against the correlation cap")
}
