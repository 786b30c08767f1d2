//! The oracle harness: brute force against every closed form over a grid of
//! `(p, m)`, plus the structural identities, collected into one report.

mod checks;
mod typo;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use checks::{BranchTally, Check, CheckId, Mismatch, MISMATCH_SAMPLE_CAP};
pub use typo::TypoResolution;

use crate::closed_form::AcfDecomposition;
use crate::correlation::{CharacteristicSets, CorrelationProfile, MAX_CORRELATION_PERIOD};
use crate::cyclotomy::ClassTable;
use crate::error::{Error, Result};
use crate::number_theory::{is_prime, odd_primitive_roots, PrimePowerParams};
use crate::sequences::{
    balance_stats, build_s, build_s1, build_s2, build_u, build_v, BalanceStats, BinarySequence,
    QuaternarySequence,
};

/// Largest period in the default grid.
pub const DEFAULT_MAX_PERIOD: u64 = 5000;

/// Everything brute force knows about one instance, computed once.
#[derive(Debug, Clone)]
pub struct Instance {
    pub params: PrimePowerParams,
    pub table: ClassTable,
    pub sets: CharacteristicSets,
    pub s: QuaternarySequence,
    pub s1: QuaternarySequence,
    pub s2: QuaternarySequence,
    pub u: BinarySequence,
    pub v: BinarySequence,
    pub acf_s: CorrelationProfile,
    pub acf_u: CorrelationProfile,
    pub acf_v: CorrelationProfile,
    pub decomposition: AcfDecomposition,
    /// Another odd primitive root below `2p^m`, if there is one.
    pub second_root: Option<u64>,
}

impl Instance {
    pub fn new(params: &PrimePowerParams) -> Result<Self> {
        let table = ClassTable::build(params)?;
        let s = build_s(params);
        let acf_s = crate::correlation::autocorrelation(&s)?;
        let (u, v) = (build_u(params), build_v(params));
        let second_root = odd_primitive_roots(params.p(), params.m())?.find(|&g| g != params.g());
        Ok(Self {
            params: *params,
            sets: CharacteristicSets::new(&table),
            table,
            s1: build_s1(params),
            s2: build_s2(params),
            acf_u: checks::acf_of(&u),
            acf_v: checks::acf_of(&v),
            u,
            v,
            s,
            acf_s,
            decomposition: AcfDecomposition::new(params)?,
            second_root,
        })
    }
}

/// Run one check against one instance.
pub fn verify_check(id: CheckId, params: &PrimePowerParams) -> Result<Check> {
    Ok(checks::run(id, &Instance::new(params)?))
}

/// Compare the brute-force autocorrelation of `s` with its closed form at every shift.
pub fn verify_acf(params: &PrimePowerParams) -> Result<Check> {
    verify_check(CheckId::AcfS, params)
}

pub fn verify_structural(params: &PrimePowerParams) -> Result<Vec<Check>> {
    let inst = Instance::new(params)?;
    Ok(CheckId::ALL
        .iter()
        .filter(|id| id.is_structural())
        .map(|&id| checks::run(id, &inst))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub p: u64,
    pub m: u32,
    pub g: u64,
    pub period: u64,
    pub checks: Vec<Check>,
    pub typo_resolutions: Vec<TypoResolution>,
    pub balance: BalanceStats,
    pub acf_branches: Vec<BranchTally>,
    /// Mismatches of the `C_s` comparison if brute force used `ω = −i` instead.
    pub acf_conjugate_mismatches: u64,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, id: CheckId) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

pub fn run_entry(params: &PrimePowerParams) -> Result<EntryReport> {
    let inst = Instance::new(params)?;
    let checks = CheckId::ALL
        .iter()
        .map(|&id| checks::run(id, &inst))
        .collect();
    Ok(EntryReport {
        p: params.p(),
        m: params.m(),
        g: params.g(),
        period: params.period(),
        checks,
        typo_resolutions: typo::all(&inst),
        balance: balance_stats(&inst.s),
        acf_branches: checks::acf_branch_tallies(&inst),
        acf_conjugate_mismatches: checks::conjugate_acf_mismatches(&inst),
    })
}

/// Which choice of the primitive fourth root of unity makes the `C_s` closed form hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaConvention {
    PlusI,
    MinusI,
    /// Both fit; the grid has no instance whose `C_s` is non-real.
    Either,
    BothFail,
}

impl OmegaConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            OmegaConvention::PlusI => "+i",
            OmegaConvention::MinusI => "-i",
            OmegaConvention::Either => "either",
            OmegaConvention::BothFail => "both-fail",
        }
    }
}

impl fmt::Display for OmegaConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for OmegaConvention {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GridPoint {
    pub p: u64,
    pub m: u32,
}

/// A reassignment seen across the grid: the fitting values common to every entry that needed it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypoSummary {
    pub form: String,
    pub p_mod_8: u64,
    pub case: String,
    pub stated: String,
    pub entries: Vec<GridPoint>,
    pub fitting_everywhere: Vec<String>,
    /// First common fitting value, or `None` if no stated value fits everywhere.
    pub resolved: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub grid: Vec<GridPoint>,
    pub omega_convention: OmegaConvention,
    pub entries: Vec<EntryReport>,
    pub typo_resolutions: Vec<TypoSummary>,
    /// `C_s` branch tallies merged per `(p mod 8, branch)`.
    pub acf_by_class: Vec<BranchTally>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn entry(&self, p: u64, m: u32) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.p == p && e.m == m)
    }

    /// All checks with the given id across the grid.
    pub fn checks(&self, id: CheckId) -> impl Iterator<Item = (&EntryReport, &Check)> {
        self.entries
            .iter()
            .filter_map(move |e| e.check(id).map(|c| (e, c)))
    }
}

/// All odd primes `p ≤ 31` with every `m` such that `2p^m ≤ max_period`.
pub fn default_grid(max_period: u64) -> Vec<(u64, u32)> {
    let mut grid = Vec::new();
    for p in (3..=31u64).filter(|&p| is_prime(p)) {
        let mut m = 1;
        while 2 * p.pow(m) <= max_period {
            grid.push((p, m));
            m += 1;
        }
    }
    grid
}

fn validate_grid(grid: &[(u64, u32)]) -> Result<Vec<PrimePowerParams>> {
    let mut diags = Vec::new();
    let mut params = Vec::new();
    for &(p, m) in grid {
        match PrimePowerParams::new(p, m) {
            Ok(pr) if pr.period() > MAX_CORRELATION_PERIOD as u64 => diags.push(format!(
                "(p={p}, m={m}): period {} exceeds the correlation cap of {MAX_CORRELATION_PERIOD}",
                pr.period()
            )),
            Ok(pr) => params.push(pr),
            Err(e) => diags.push(format!("(p={p}, m={m}): {e}")),
        }
    }
    if grid.is_empty() {
        diags.push("grid is empty".to_string());
    }
    if diags.is_empty() {
        Ok(params)
    } else {
        Err(Error::InvalidGrid(diags))
    }
}

/// Run every check on every grid entry. Entries run in parallel; the report is
/// ordered by `(p, m)` and never stops at a mismatch.
pub fn run_suite(grid: &[(u64, u32)]) -> Result<VerificationReport> {
    let mut params = validate_grid(grid)?;
    params.sort_by_key(|pr| (pr.p(), pr.m()));
    params.dedup();
    let entries = params
        .par_iter()
        .map(run_entry)
        .collect::<Result<Vec<_>>>()?;

    let plus_ok = entries
        .iter()
        .all(|e| e.check(CheckId::AcfS).is_some_and(Check::passed));
    let minus_ok = entries.iter().all(|e| e.acf_conjugate_mismatches == 0);
    let omega_convention = match (plus_ok, minus_ok) {
        (true, true) => OmegaConvention::Either,
        (true, false) => OmegaConvention::PlusI,
        (false, true) => OmegaConvention::MinusI,
        (false, false) => OmegaConvention::BothFail,
    };

    Ok(VerificationReport {
        grid: params
            .iter()
            .map(|pr| GridPoint {
                p: pr.p(),
                m: pr.m(),
            })
            .collect(),
        omega_convention,
        typo_resolutions: summarize_typos(&entries),
        acf_by_class: merge_tallies(&entries),
        pass: entries.iter().all(EntryReport::passed),
        entries,
    })
}

// (form, p mod 8, case, stated) -> (grid points, values fitting at all of them so far)
type TypoGroups = BTreeMap<(String, u64, String, String), (Vec<GridPoint>, Option<Vec<String>>)>;

fn summarize_typos(entries: &[EntryReport]) -> Vec<TypoSummary> {
    let mut map = TypoGroups::new();
    for e in entries {
        for t in &e.typo_resolutions {
            let slot = map
                .entry((t.form.clone(), t.p_mod_8, t.case.clone(), t.stated.clone()))
                .or_default();
            slot.0.push(GridPoint { p: e.p, m: e.m });
            slot.1 = Some(match slot.1.take() {
                None => t.fitting.clone(),
                Some(prev) => prev.into_iter().filter(|f| t.fitting.contains(f)).collect(),
            });
        }
    }
    map.into_iter()
        .map(|((form, p_mod_8, case, stated), (entries, fitting))| {
            let fitting_everywhere = fitting.unwrap_or_default();
            TypoSummary {
                form,
                p_mod_8,
                case,
                stated,
                entries,
                resolved: fitting_everywhere.first().cloned(),
                fitting_everywhere,
            }
        })
        .collect()
}

fn merge_tallies(entries: &[EntryReport]) -> Vec<BranchTally> {
    let mut map: BTreeMap<(u64, String), BranchTally> = BTreeMap::new();
    for e in entries {
        for t in &e.acf_branches {
            let slot = map
                .entry((t.p_mod_8, t.branch.clone()))
                .or_insert_with(|| BranchTally {
                    p_mod_8: t.p_mod_8,
                    branch: t.branch.clone(),
                    cases: 0,
                    mismatches: 0,
                    observed: Vec::new(),
                });
            slot.cases += t.cases;
            slot.mismatches += t.mismatches;
        }
    }
    map.into_values().collect()
}
